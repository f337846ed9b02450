#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "conetree/greens_free.hpp"

namespace conetree {

/// Branch-correct square root of det D for complex symmetric D with
/// positive definite real part: det(sqrt(A)) det(sqrt(1 + i A^{-1/2} B A^{-1/2}))
/// with D = A + iB and principal square roots of the eigenvalues.
struct BranchedDeterminantRoot {
    Eigen::MatrixXcd D;
    cplx value;
};

BranchedDeterminantRoot gaussian_branch_det(const Eigen::MatrixXcd& D);

/// Tensor Gauss-Legendre approximation of the integral of exp(-x.Dx/2) over
/// R^k (k <= 3), truncated at `radius` standard deviations of Re D.
cplx gaussian_integral_quadrature(const Eigen::MatrixXcd& D, double radius = 12.0,
                                  int panels_per_unit = 2);

/// D_1 = -D^{-1}, D_j = -(D + D_{j-1})^{-1} while the inverses exist.
struct IteratedDMatrices {
    std::vector<Eigen::MatrixXd> D;           ///< D_1 .. D_n computed
    std::optional<int> failure_index;         ///< first j whose inverse does not exist
};

inline constexpr double kConditionLimit = 1e12;
inline constexpr double kSingularValueFloor = 1e-10;

IteratedDMatrices iterated_D_matrices(const Eigen::MatrixXd& D, int L);

/// jk x jk block tridiagonal matrix: `diag` on the diagonal blocks, identities
/// on the first off-diagonal blocks.
Eigen::MatrixXd block_tridiagonal(const Eigen::MatrixXd& diag, int j);

/// Inverse of the Schur complement of the upper-left k x k block of `Y`.
Eigen::MatrixXd schur_complement_inverse(const Eigen::MatrixXd& Y, Eigen::Index k);

/// max_j || D_j - (Schur complement of the leading block of block_tridiagonal(-D, j))^{-1} ||.
/// Throws DomainRejection if some D_j with j <= L does not exist.
double schur_equivalence_check(const Eigen::MatrixXd& D, int L);

/// True iff each of the L block tridiagonal matrices with diagonal blocks
/// A - E is invertible (smallest singular value above 1e-10, condition below 1e12).
bool a_matrices_invertible(double E, const VerticalOperator& A, int L);

}  // namespace conetree

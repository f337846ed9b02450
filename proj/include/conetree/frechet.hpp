#pragma once

#include <vector>

#include <Eigen/Dense>

#include "conetree/greens_free.hpp"

namespace conetree {

/// Upper-triangular m x m array of nonnegative integers.
class MultiIndex {
public:
    explicit MultiIndex(std::size_t m);

    std::size_t m() const noexcept { return m_; }
    int operator()(std::size_t j, std::size_t k) const;
    /// Throws InvalidArgument for j > k or negative values.
    void set(std::size_t j, std::size_t k, int value);
    int norm1() const noexcept;
    bool is_zero() const noexcept { return norm1() == 0; }

    MultiIndex operator+(const MultiIndex& other) const;
    bool operator==(const MultiIndex&) const = default;

    /// Entries in row-major upper-triangular order.
    const std::vector<int>& packed() const noexcept { return entries_; }
    std::string to_string() const;

private:
    std::size_t index(std::size_t j, std::size_t k) const;

    std::size_t m_;
    std::vector<int> entries_;
};

/// All multi-indices with norm1 <= max_norm, ordered by (norm1, packed
/// entries in descending lexicographic order).
std::vector<MultiIndex> enumerate_multi_indices(std::size_t m, int max_norm);

/// Gamma^(p)_{E - a_j} for p = 0..L (rows) and j = 1..m (columns).
/// Throws DomainRejection unless E - a_j lies in the a.c. set for every j.
struct BoundaryTable {
    int K = 1;
    int L = 1;
    double E = 0.0;
    Eigen::MatrixXcd gamma;
};

BoundaryTable boundary_table(double E, const VerticalOperator& A, int K, int L);

/// Diagonal of theta_{J,E}: component p is the product over j <= k of
/// (Gamma^(p)_{E-a_j} Gamma^(p)_{E-a_k})^{J_jk}.
struct ThetaMatrix {
    Eigen::VectorXcd values;

    Eigen::MatrixXcd as_matrix() const { return values.asDiagonal(); }
};

ThetaMatrix theta(const MultiIndex& J, const BoundaryTable& table);
ThetaMatrix theta(const MultiIndex& J, double E, const VerticalOperator& A, int K, int L);

/// theta_J conj(theta_J') S^{K,L}.
Eigen::MatrixXcd frechet_matrix(const MultiIndex& J, const MultiIndex& Jp,
                                const BoundaryTable& table);

std::vector<cplx> frechet_eigenvalues(const MultiIndex& J, const MultiIndex& Jp,
                                      const BoundaryTable& table);
std::vector<cplx> frechet_eigenvalues(const MultiIndex& J, const MultiIndex& Jp, double E,
                                      const VerticalOperator& A, int K, int L);

/// Closed form of det(1 - theta_J conj(theta_J') S^{K,L}):
/// 1 - K t_0 - prod_p t_p with t_p = theta^(p)_J conj(theta^(p)_J').
cplx f_value(const MultiIndex& J, const MultiIndex& Jp, const BoundaryTable& table);

struct UnitEigenvalueCertificate {
    double min_abs_f = 0.0;
    MultiIndex argmin_J;
    MultiIndex argmin_Jp;
    std::size_t pairs_checked = 0;
};

/// Minimum of |f(J, J', E)| over norm1(J) + norm1(J') <= cutoff.
UnitEigenvalueCertificate check_no_unit_eigenvalue(double E, const VerticalOperator& A, int K,
                                                   int L, int cutoff = 4);

inline constexpr int kMaxFrechetCutoff = 6;

}  // namespace conetree

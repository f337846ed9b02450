#pragma once

#include <array>
#include <optional>
#include <vector>

#include "conetree/intervals.hpp"
#include "conetree/poly.hpp"
#include "conetree/tree.hpp"

namespace conetree {

/// Root Green's functions of the free (adjacency) operator, one per label.
struct GreensVector {
    cplx z;
    std::vector<cplx> gamma;
    std::size_t iterations = 0;  ///< 0 for values obtained in closed form
    double last_change = 0.0;
};

/// Eigenvalues a_1 <= ... <= a_m of the vertical operator A.
class VerticalOperator {
public:
    VerticalOperator() : eigenvalues_{0.0} {}
    explicit VerticalOperator(std::vector<double> eigenvalues);

    std::size_t size() const noexcept { return eigenvalues_.size(); }
    double operator[](std::size_t j) const { return eigenvalues_[j]; }
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    double min() const { return eigenvalues_.front(); }
    double max() const { return eigenvalues_.back(); }

private:
    std::vector<double> eigenvalues_;
};

struct IterationOptions {
    double tol = 1e-13;
    std::size_t max_iterations = 1'000'000;
};

/// Fixed point of Gamma_p = -1 / (z + sum_q S_pq Gamma_q) reached by plain
/// iteration from Gamma = i.  Requires Im z > 0.  Throws NonConvergence.
GreensVector general_greens(const SubstitutionMatrix& S, cplx z, IterationOptions opts = {});

GreensVector greens_halfplane(int K, int L, cplx z, IterationOptions opts = {});

/// max_p |Gamma_p (z + sum_q S_pq Gamma_q) + 1|.
double recursion_residual(const SubstitutionMatrix& S, cplx z, const std::vector<cplx>& gamma);

/// |det(1 - diag(|Gamma|^2) S)|; vanishes at boundary energies of the a.c. set.
double verify_general_identity(const GreensVector& gv, const SubstitutionMatrix& S);

/// Same fixed point as general_greens, reached by a few plain iterations at
/// Im z >= 0.5 followed by Newton steps along a geometric path down to z.
/// Converges where the fixed point is only neutrally stable for the plain
/// iteration (e.g. regular trees near the real axis).
GreensVector general_greens_continuation(const SubstitutionMatrix& S, cplx z,
                                         IterationOptions opts = {});

/// Boundary value of a general family at a real energy: solve at E + i eta
/// and E + i eta/2 by continuation and Richardson-extrapolate linearly in eta.
GreensVector richardson_boundary_greens(const SubstitutionMatrix& S, double E, double eta,
                                        IterationOptions opts = {});

/// Coefficients {x^0, x^1, x^2, x^3} of the cubic satisfied by Gamma^(0)_E.
std::array<double, 4> cubic_coefficients(int K, int L, double E);

/// Discriminant of that cubic.
double discriminant(int K, int L, double E);

/// The discriminant as a polynomial in E, ascending coefficients.
polynomial::Poly discriminant_polynomial(int K, int L);

/// Roots of a real cubic (coefficients ascending, leading nonzero) as
/// eigenvalues of the companion matrix, polished by Newton steps.
std::array<cplx, 3> cubic_roots(const std::array<double, 4>& coeffs);

inline constexpr double kBandEdgeGuard = 1e-10;

/// Gamma^(p)_E for real E in the a.c. set, from the upper-half-plane root of
/// the cubic.  Throws DomainRejection when D(E) >= 0, |D(E)| < 1e-10, or
/// E lies in the excluded set.
GreensVector boundary_greens(int K, int L, double E);

/// |K |Gamma_0|^2 + |Gamma_0 ... Gamma_L|^2 - 1|.
double norm_identity_residual(int K, const GreensVector& gv);

/// {E : D(E) < 0} with the excluded set removed.
SpectralIntervals ac_intervals(int K, int L);

/// Intersection over j of ac_intervals(K, L) + a_j.  May be empty.
SpectralIntervals ac_intervals_strip(int K, int L, const VerticalOperator& A);

/// Smallest K <= K_max with D_K < 0 on [-E0, E0] away from 1e-6
/// neighbourhoods of the roots of D_K.
std::optional<int> kl_threshold_K0(int L, double E0, int K_max);

/// True when D_K < 0 on [-E0, E0] away from 1e-6 neighbourhoods of its roots.
bool covers_symmetric_window(int K, int L, double E0);

}  // namespace conetree

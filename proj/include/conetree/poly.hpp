#pragma once

#include <complex>
#include <vector>

namespace conetree {

using cplx = std::complex<double>;

/// c_k(z) from c_0 = 0, c_1 = 1, c_{k+1} = z c_k - c_{k-1}.
cplx c_poly(int k, cplx z);
double c_poly(int k, double z);

/// (c_+^k - c_-^k) / (c_+ - c_-) with c_pm = (z +- sqrt(z^2 - 4)) / 2.
/// `flip_branch` takes the other square root; the value does not depend on
/// it.  Falls back to the recursion when |z^2 - 4| <= 1e-8.
cplx c_closed_form(int k, cplx z, bool flip_branch = false);

/// Coefficients (ascending powers) of c_k as a polynomial with integer
/// coefficients.
std::vector<double> c_poly_coefficients(int k);

/// Eigenvalues of the d x d path adjacency matrix, ascending.
std::vector<double> path_adjacency_eigenvalues(int d);

/// Union of the path adjacency spectra for d = 1..L.
struct ExcludedSet {
    int L = 0;
    std::vector<double> points;

    bool contains(double E, double tol = 1e-12) const;
    double distance(double E) const;
};

inline constexpr double kExcludedDedupTol = 1e-12;

ExcludedSet excluded_set(int L);

/// Polynomials over doubles, coefficients in ascending order.
namespace polynomial {

using Poly = std::vector<double>;

Poly add(const Poly& a, const Poly& b);
Poly multiply(const Poly& a, const Poly& b);
Poly scale(const Poly& a, double s);
Poly derivative(const Poly& a);
/// Drops exactly-zero leading coefficients.
Poly trim(Poly a);
double evaluate(const Poly& a, double x);
int degree(const Poly& a);

/// All distinct real roots in [lo, hi], ascending.  Roots are isolated
/// between the critical points of the polynomial and refined by bisection;
/// critical points where the polynomial vanishes to relative `touch_tol`
/// are reported as (even multiplicity) roots.
std::vector<double> real_roots(const Poly& a, double lo, double hi, double touch_tol = 1e-10);

/// Cauchy bound on the modulus of all roots.
double root_bound(const Poly& a);

}  // namespace polynomial

}  // namespace conetree

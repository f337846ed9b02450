#include "conetree/greens_free.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "conetree/errors.hpp"

namespace conetree {

VerticalOperator::VerticalOperator(std::vector<double> eigenvalues)
    : eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.empty()) throw InvalidArgument("vertical operator needs m >= 1 eigenvalues");
    std::sort(eigenvalues_.begin(), eigenvalues_.end());
}

GreensVector general_greens(const SubstitutionMatrix& S, cplx z, IterationOptions opts) {
    if (!(z.imag() > 0.0)) throw DomainRejection("half-plane iteration requires Im z > 0");
    if (!(opts.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const std::size_t s = S.size();
    std::vector<cplx> gamma(s, cplx(0.0, 1.0)), next(s);
    double change = INFINITY;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        change = 0.0;
        for (std::size_t p = 0; p < s; ++p) {
            cplx denom = z;
            for (std::size_t q = 0; q < s; ++q)
                if (S(p, q) != 0) denom += static_cast<double>(S(p, q)) * gamma[q];
            next[p] = -1.0 / denom;
            change = std::max(change, std::abs(next[p] - gamma[p]));
        }
        gamma.swap(next);
        if (change < opts.tol) return GreensVector{z, std::move(gamma), it, change};
    }
    throw NonConvergence(opts.max_iterations, change);
}

GreensVector greens_halfplane(int K, int L, cplx z, IterationOptions opts) {
    return general_greens(make_kl_matrix(K, L), z, opts);
}

double recursion_residual(const SubstitutionMatrix& S, cplx z, const std::vector<cplx>& gamma) {
    double worst = 0.0;
    for (std::size_t p = 0; p < S.size(); ++p) {
        cplx denom = z;
        for (std::size_t q = 0; q < S.size(); ++q)
            denom += static_cast<double>(S(p, q)) * gamma[q];
        worst = std::max(worst, std::abs(gamma[p] * denom + 1.0));
    }
    return worst;
}

double verify_general_identity(const GreensVector& gv, const SubstitutionMatrix& S) {
    const auto s = static_cast<Eigen::Index>(S.size());
    if (gv.gamma.size() != S.size()) throw InvalidArgument("Green's vector / matrix size mismatch");
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(s, s);
    for (Eigen::Index p = 0; p < s; ++p) {
        const double w = std::norm(gv.gamma[static_cast<std::size_t>(p)]);
        for (Eigen::Index q = 0; q < s; ++q)
            M(p, q) -= w * static_cast<double>(S(static_cast<Label>(p), static_cast<Label>(q)));
    }
    return std::abs(M.determinant());
}

namespace {

// Newton's method on Gamma_p (z + sum_q S_pq Gamma_q) + 1 = 0.  Returns false
// if it fails to converge or leaves the upper half-plane.
bool newton_polish(const SubstitutionMatrix& S, cplx z, std::vector<cplx>& gamma, double tol,
                   std::size_t& steps) {
    const auto s = static_cast<Eigen::Index>(S.size());
    std::vector<cplx> trial(gamma);
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXcd F(s);
        Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(s, s);
        for (Eigen::Index p = 0; p < s; ++p) {
            cplx denom = z;
            for (Eigen::Index q = 0; q < s; ++q)
                denom += static_cast<double>(S(static_cast<Label>(p), static_cast<Label>(q))) *
                         trial[static_cast<std::size_t>(q)];
            F(p) = trial[static_cast<std::size_t>(p)] * denom + 1.0;
            J(p, p) += denom;
            for (Eigen::Index q = 0; q < s; ++q)
                J(p, q) += trial[static_cast<std::size_t>(p)] *
                           static_cast<double>(S(static_cast<Label>(p), static_cast<Label>(q)));
        }
        const Eigen::VectorXcd delta = J.partialPivLu().solve(F);
        if (!delta.allFinite()) return false;
        double change = 0.0;
        for (Eigen::Index p = 0; p < s; ++p) {
            trial[static_cast<std::size_t>(p)] -= delta(p);
            change = std::max(change, std::abs(delta(p)));
        }
        ++steps;
        for (const auto& g : trial)
            if (!(g.imag() > 0.0)) return false;
        if (change < tol) {
            gamma = trial;
            return true;
        }
    }
    return false;
}

}  // namespace

GreensVector general_greens_continuation(const SubstitutionMatrix& S, cplx z, IterationOptions opts) {
    if (!(z.imag() > 0.0)) throw DomainRejection("continuation requires Im z > 0");
    const double start_eta = std::max(z.imag(), 0.5);
    GreensVector gv = general_greens(S, {z.real(), start_eta}, {1e-6, opts.max_iterations});
    std::size_t steps = gv.iterations;
    double eta = start_eta;
    double ratio = 0.25;
    while (true) {
        const double next_eta = std::max(z.imag(), eta * ratio);
        std::vector<cplx> trial = gv.gamma;
        if (newton_polish(S, {z.real(), next_eta}, trial, opts.tol, steps)) {
            gv.gamma = std::move(trial);
            eta = next_eta;
            if (eta == z.imag()) break;
            ratio = std::max(ratio * ratio, 1e-3);
        } else {
            ratio = std::sqrt(ratio);
            if (ratio > 0.999) throw NonConvergence(steps, INFINITY);
        }
    }
    gv.z = z;
    gv.iterations = steps;
    gv.last_change = opts.tol;
    return gv;
}

GreensVector richardson_boundary_greens(const SubstitutionMatrix& S, double E, double eta,
                                        IterationOptions opts) {
    const auto coarse = general_greens_continuation(S, {E, eta}, opts);
    const auto fine = general_greens_continuation(S, {E, 0.5 * eta}, opts);
    GreensVector out{cplx(E, 0.0), {}, coarse.iterations + fine.iterations,
                     std::max(coarse.last_change, fine.last_change)};
    for (std::size_t p = 0; p < S.size(); ++p)
        out.gamma.push_back(2.0 * fine.gamma[p] - coarse.gamma[p]);
    return out;
}

std::array<double, 4> cubic_coefficients(int K, int L, double E) {
    const double cl = c_poly(L, E), cl1 = c_poly(L + 1, E);
    return {cl1, E * cl1, (K + 1.0) * cl1, K * cl};
}

namespace {

using polynomial::Poly;

// The bracket of the discriminant without the c_{L+1}^2 prefactor.
Poly discriminant_inner(int K, int L) {
    using namespace polynomial;
    const double k = K;
    const Poly cl = c_poly_coefficients(L);
    const Poly cl1 = c_poly_coefficients(L + 1);
    const Poly x{0.0, 1.0};
    const Poly x2 = multiply(x, x);
    const Poly x3 = multiply(x2, x);
    const Poly cl_cl1 = multiply(cl, cl1);
    const Poly cl1_sq = multiply(cl1, cl1);
    Poly inner = scale(multiply(x, cl_cl1), 18.0 * k * (k + 1.0));
    inner = add(inner, scale(multiply(x2, cl1_sq), (k + 1.0) * (k + 1.0)));
    inner = add(inner, scale(multiply(x3, cl_cl1), -4.0 * k));
    inner = add(inner, scale(multiply(cl, cl), -27.0 * k * k));
    inner = add(inner, scale(cl1_sq, -4.0 * (k + 1.0) * (k + 1.0) * (k + 1.0)));
    return trim(inner);
}

}  // namespace

polynomial::Poly discriminant_polynomial(int K, int L) {
    if (K < 1 || L < 1) throw InvalidArgument("K and L must both be >= 1");
    const Poly cl1 = c_poly_coefficients(L + 1);
    return polynomial::trim(
        polynomial::multiply(polynomial::multiply(cl1, cl1), discriminant_inner(K, L)));
}

// The bracket has exact integer coefficients in which the leading powers of E
// have already cancelled, so Horner evaluation loses far less than the
// textbook cubic discriminant does near its roots.
double discriminant(int K, int L, double E) {
    if (K < 1 || L < 1) throw InvalidArgument("K and L must both be >= 1");
    const double cl1 = c_poly(L + 1, E);
    return cl1 * cl1 * polynomial::evaluate(discriminant_inner(K, L), E);
}

std::array<cplx, 3> cubic_roots(const std::array<double, 4>& c) {
    if (c[3] == 0.0) throw InvalidArgument("cubic has vanishing leading coefficient");
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    for (int i = 0; i < 3; ++i) companion(i, 2) = -c[static_cast<std::size_t>(i)] / c[3];
    Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericFailure("companion eigensolve failed");

    std::array<cplx, 3> roots;
    for (int i = 0; i < 3; ++i) {
        cplx x = solver.eigenvalues()[i];
        for (int step = 0; step < 3; ++step) {
            const cplx f = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
            const cplx df = (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1];
            if (std::abs(df) < 1e-300) break;
            const cplx nx = x - f / df;
            if (std::abs(((c[3] * nx + c[2]) * nx + c[1]) * nx + c[0]) >= std::abs(f)) break;
            x = nx;
        }
        roots[static_cast<std::size_t>(i)] = x;
    }
    return roots;
}

GreensVector boundary_greens(int K, int L, double E) {
    if (K < 1 || L < 1) throw InvalidArgument("K and L must both be >= 1");
    if (excluded_set(L).contains(E))
        throw DomainRejection("E = " + std::to_string(E) + " lies in the excluded set");
    const double D = discriminant(K, L, E);
    if (D >= 0.0 || std::abs(D) < kBandEdgeGuard)
        throw DomainRejection("discriminant " + std::to_string(D) + " at E = " +
                              std::to_string(E) + " does not certify an a.c. boundary value");

    const auto roots = cubic_roots(cubic_coefficients(K, L, E));
    int count = 0;
    cplx g0;
    for (const auto& r : roots) {
        if (r.imag() > 1e-12) {
            ++count;
            g0 = r;
        }
    }
    if (count != 1)
        throw NumericFailure("expected exactly one cubic root with Im > 0, found " +
                             std::to_string(count));

    GreensVector out{cplx(E, 0.0), std::vector<cplx>(static_cast<std::size_t>(L) + 1), 0, 0.0};
    out.gamma[0] = g0;
    out.gamma[static_cast<std::size_t>(L)] = -1.0 / (E + g0);
    for (int p = L - 1; p >= 1; --p)
        out.gamma[static_cast<std::size_t>(p)] = -1.0 / (E + out.gamma[static_cast<std::size_t>(p) + 1]);
    for (const auto& g : out.gamma)
        if (!(g.imag() > 0.0)) throw NumericFailure("boundary Green's value left the upper half-plane");
    return out;
}

double norm_identity_residual(int K, const GreensVector& gv) {
    cplx prod = 1.0;
    for (const auto& g : gv.gamma) prod *= g;
    return std::abs(K * std::norm(gv.gamma.at(0)) + std::norm(prod) - 1.0);
}

SpectralIntervals ac_intervals(int K, int L) {
    const Poly inner = discriminant_inner(K, L);
    const double R = polynomial::root_bound(inner);
    const auto roots = polynomial::real_roots(inner, -R, R);

    const auto negative_at = [&](double x) { return polynomial::evaluate(inner, x) < 0.0; };
    if (roots.empty() ? negative_at(0.0) : (negative_at(roots.front() - 1.0) || negative_at(roots.back() + 1.0)))
        throw NumericFailure("discriminant negative on an unbounded set");

    std::vector<Interval> comps;
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        if (negative_at(0.5 * (roots[i] + roots[i + 1]))) comps.push_back({roots[i], roots[i + 1]});
    }
    // Merge components separated only by a touching root of the bracket;
    // such points are still zeros of D and must stay removed.
    std::vector<double> touching;
    std::vector<Interval> merged;
    for (const auto& c : comps) {
        if (!merged.empty() && merged.back().hi == c.lo) {
            touching.push_back(c.lo);
            merged.back().hi = c.hi;
        } else {
            merged.push_back(c);
        }
    }
    auto points = excluded_set(L).points;
    points.insert(points.end(), touching.begin(), touching.end());
    return remove_points(SpectralIntervals(std::move(merged), {}), points);
}

SpectralIntervals ac_intervals_strip(int K, int L, const VerticalOperator& A) {
    const SpectralIntervals base = ac_intervals(K, L);
    SpectralIntervals out = base.shifted(A[0]);
    for (std::size_t j = 1; j < A.size(); ++j) out = intersect(out, base.shifted(A[j]));
    return out;
}

bool covers_symmetric_window(int K, int L, double E0) {
    if (!(E0 > 0.0)) throw InvalidArgument("E0 must be positive");
    constexpr double kHole = 1e-6;
    const Poly inner = discriminant_inner(K, L);
    const double R = polynomial::root_bound(inner);
    std::vector<double> roots = polynomial::real_roots(inner, -R, R);
    const auto c_roots = path_adjacency_eigenvalues(L);
    roots.insert(roots.end(), c_roots.begin(), c_roots.end());
    std::sort(roots.begin(), roots.end());

    // Closed pieces of [-E0, E0] left after cutting out the neighbourhoods.
    std::vector<Interval> pieces{{-E0, E0}};
    for (double r : roots) {
        std::vector<Interval> next;
        for (const auto& p : pieces) {
            if (r + kHole <= p.lo || r - kHole >= p.hi) {
                next.push_back(p);
                continue;
            }
            if (r - kHole > p.lo) next.push_back({p.lo, r - kHole});
            if (r + kHole < p.hi) next.push_back({r + kHole, p.hi});
        }
        pieces = std::move(next);
    }
    for (const auto& p : pieces) {
        for (double x : {p.lo, 0.5 * (p.lo + p.hi), p.hi})
            if (!(discriminant(K, L, x) < 0.0)) return false;
    }
    return true;
}

std::optional<int> kl_threshold_K0(int L, double E0, int K_max) {
    for (int K = 1; K <= K_max; ++K)
        if (covers_symmetric_window(K, L, E0)) return K;
    return std::nullopt;
}

}  // namespace conetree

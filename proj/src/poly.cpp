#include "conetree/poly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "conetree/errors.hpp"

namespace conetree {

cplx c_poly(int k, cplx z) {
    if (k < 0) throw InvalidArgument("c_k requires k >= 0");
    if (k == 0) return 0.0;
    cplx prev = 0.0, cur = 1.0;
    for (int j = 1; j < k; ++j) {
        cplx next = z * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double c_poly(int k, double z) {
    if (k < 0) throw InvalidArgument("c_k requires k >= 0");
    if (k == 0) return 0.0;
    double prev = 0.0, cur = 1.0;
    for (int j = 1; j < k; ++j) {
        double next = z * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx c_closed_form(int k, cplx z, bool flip_branch) {
    const cplx disc = z * z - 4.0;
    if (std::abs(disc) <= 1e-8) return c_poly(k, z);
    cplx root = std::sqrt(disc);
    if (flip_branch) root = -root;
    const cplx cp = 0.5 * (z + root);
    const cplx cm = 0.5 * (z - root);
    return (std::pow(cp, k) - std::pow(cm, k)) / (cp - cm);
}

std::vector<double> c_poly_coefficients(int k) {
    using polynomial::Poly;
    if (k < 0) throw InvalidArgument("c_k requires k >= 0");
    Poly prev{0.0}, cur{1.0};
    if (k == 0) return prev;
    const Poly x{0.0, 1.0};
    for (int j = 1; j < k; ++j) {
        Poly next = polynomial::add(polynomial::multiply(x, cur), polynomial::scale(prev, -1.0));
        prev = std::move(cur);
        cur = std::move(next);
    }
    return polynomial::trim(cur);
}

std::vector<double> path_adjacency_eigenvalues(int d) {
    if (d < 1) throw InvalidArgument("path length must be >= 1");
    if (d == 1) return {0.0};
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd sub = Eigen::VectorXd::Ones(d - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericFailure("tridiagonal eigensolve failed");
    const auto& ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end());
    return out;
}

bool ExcludedSet::contains(double E, double tol) const { return distance(E) <= tol; }

double ExcludedSet::distance(double E) const {
    double best = INFINITY;
    for (double p : points) best = std::min(best, std::abs(E - p));
    return best;
}

ExcludedSet excluded_set(int L) {
    if (L < 1) throw InvalidArgument("L must be >= 1");
    std::vector<double> all;
    for (int d = 1; d <= L; ++d) {
        auto ev = path_adjacency_eigenvalues(d);
        all.insert(all.end(), ev.begin(), ev.end());
    }
    std::sort(all.begin(), all.end());
    ExcludedSet out{L, {}};
    for (double v : all) {
        if (out.points.empty() || v - out.points.back() > kExcludedDedupTol) out.points.push_back(v);
    }
    return out;
}

namespace polynomial {

Poly add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Poly multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly scale(const Poly& a, double s) {
    Poly out = a;
    for (auto& c : out) c *= s;
    return out;
}

Poly derivative(const Poly& a) {
    if (a.size() <= 1) return {0.0};
    Poly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<double>(i);
    return out;
}

Poly trim(Poly a) {
    while (a.size() > 1 && a.back() == 0.0) a.pop_back();
    return a;
}

double evaluate(const Poly& a, double x) {
    double acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
    return acc;
}

int degree(const Poly& a) {
    const Poly t = trim(a);
    if (t.empty() || (t.size() == 1 && t[0] == 0.0)) return -1;
    return static_cast<int>(t.size()) - 1;
}

double root_bound(const Poly& a) {
    const Poly t = trim(a);
    const double lead = std::abs(t.back());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) m = std::max(m, std::abs(t[i]) / lead);
    return 1.0 + m;
}

namespace {

double magnitude(const Poly& a, double x) {
    double acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * std::abs(x) + std::abs(*it);
    return acc;
}

double bisect(const Poly& a, double lo, double hi, double flo) {
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) return mid;
        const double fm = evaluate(a, mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

}  // namespace

std::vector<double> real_roots(const Poly& a_in, double lo, double hi, double touch_tol) {
    Poly a = trim(a_in);
    const int deg = degree(a);
    if (deg < 0) throw InvalidArgument("zero polynomial has no isolated roots");
    if (deg == 0) return {};
    a = scale(a, 1.0 / a.back());
    if (deg == 1) {
        const double r = -a[0];
        if (r >= lo && r <= hi) return {r};
        return {};
    }

    const auto crit = real_roots(derivative(a), lo, hi, touch_tol);
    std::vector<double> pts;
    pts.reserve(crit.size() + 2);
    pts.push_back(lo);
    for (double c : crit)
        if (c > lo && c < hi) pts.push_back(c);
    pts.push_back(hi);

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double x0 = pts[i], x1 = pts[i + 1];
        const double f0 = evaluate(a, x0), f1 = evaluate(a, x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if (f1 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
            roots.push_back(bisect(a, x0, x1, f0));
        }
    }
    if (evaluate(a, hi) == 0.0) roots.push_back(hi);
    for (double c : crit) {
        if (std::abs(evaluate(a, c)) <= touch_tol * magnitude(a, c)) roots.push_back(c);
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() || r - out.back() > 1e-12 * (1.0 + std::abs(r))) out.push_back(r);
    }
    return out;
}

}  // namespace polynomial

}  // namespace conetree

#include "conetree/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "conetree/errors.hpp"
#include "conetree/frechet.hpp"
#include "conetree/greens_free.hpp"
#include "conetree/susy.hpp"

namespace conetree {

nlohmann::json to_json(const CheckResult& r) {
    return {{"check", r.check},
            {"params", r.params},
            {"residual", r.value},
            {"threshold", r.threshold},
            {"relation", r.upper_bound ? "<" : ">"},
            {"pass", r.pass}};
}

namespace {

CheckResult below(std::string check, nlohmann::json params, double value, double threshold) {
    return {std::move(check), std::move(params), value, threshold, true, value < threshold};
}

CheckResult above(std::string check, nlohmann::json params, double value, double threshold) {
    return {std::move(check), std::move(params), value, threshold, false, value > threshold};
}

const std::vector<std::pair<int, int>> kIdentityFamilies{{1, 1}, {2, 1}, {1, 3}, {2, 3}};

}  // namespace

std::vector<CheckResult> verify_identities() {
    std::vector<CheckResult> out;

    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double E = -3.0 + 6.0 * i / 999.0;
        const double expected = 4.0 * E * E * E * E - 27.0 * E * E;
        const double err = std::abs(discriminant(1, 1, E) - expected);
        worst = std::max(worst, expected == 0.0 ? err : err / std::abs(expected));
    }
    out.push_back(below("discriminant_closed_form", {{"K", 1}, {"L", 1}, {"points", 1000}}, worst, 1e-12));

    for (auto [K, L] : kIdentityFamilies) {
        const auto S = make_kl_matrix(K, L);
        double norm_identity = 0.0, general = 0.0;
        for (double E : ac_intervals(K, L).sample_points(200)) {
            const auto gv = boundary_greens(K, L, E);
            norm_identity = std::max(norm_identity, norm_identity_residual(K, gv));
            general = std::max(general, verify_general_identity(gv, S));
        }
        const nlohmann::json params{{"K", K}, {"L", L}, {"energies", 200}};
        out.push_back(below("green_identity", params, norm_identity, 1e-10));
        out.push_back(below("general_identity", params, general, 1e-8));
    }

    const std::vector<std::vector<std::vector<std::int64_t>>> non_family{
        {{2, 1}, {1, 1}}, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}};
    for (const auto& rows : non_family) {
        const SubstitutionMatrix S(rows);
        double worst_det = 0.0;
        for (double E : {-1.3, 0.4, 1.1})
            worst_det = std::max(worst_det, verify_general_identity(richardson_boundary_greens(S, E, 1e-6), S));
        out.push_back(below("general_identity_richardson", {{"S", rows}, {"eta", 1e-6}}, worst_det, 1e-4));
    }
    return out;
}

std::vector<CheckResult> verify_frechet(const VerifyOptions& opts) {
    std::vector<CheckResult> out;

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    auto ev = frechet_eigenvalues(MultiIndex(1), MultiIndex(1), 1.0, VerticalOperator(), 1, 1);
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    const double golden = std::max(std::abs(ev[0] - (1.0 - phi)), std::abs(ev[1] - phi));
    out.push_back(below("golden_ratio_eigenvalues", {{"K", 1}, {"L", 1}}, golden, 1e-12));

    const VerticalOperator A({0.0, 1.0});
    const auto energies = ac_intervals_strip(1, 1, A).sample_points(static_cast<std::size_t>(opts.frechet_energies));
    const auto indices = enumerate_multi_indices(A.size(), opts.frechet_cutoff);
    double min_f = INFINITY, min_gap = INFINITY;
    for (double E : energies) {
        min_f = std::min(min_f, check_no_unit_eigenvalue(E, A, 1, 1, opts.frechet_cutoff).min_abs_f);
        const auto table = boundary_table(E, A, 1, 1);
        for (const auto& J : indices)
            for (const auto& Jp : indices) {
                if (J.norm1() + Jp.norm1() > opts.frechet_cutoff) continue;
                for (const auto& e : frechet_eigenvalues(J, Jp, table)) min_gap = std::min(min_gap, std::abs(e - 1.0));
            }
    }
    const nlohmann::json params{{"K", 1}, {"L", 1}, {"A", A.eigenvalues()}, {"cutoff", opts.frechet_cutoff},
                                {"energies", energies.size()}};
    out.push_back(above("no_unit_eigenvalue_min_abs_f", params, min_f, 1e-4));
    out.push_back(above("unit_eigenvalue_gap", params, min_gap, 1e-9));
    return out;
}

std::vector<CheckResult> verify_susy() {
    std::vector<CheckResult> out;

    Eigen::MatrixXcd d1 = Eigen::MatrixXcd::Constant(1, 1, cplx(1.0, 1.0));
    const cplx r1 = gaussian_branch_det(d1).value;
    const cplx q1 = gaussian_integral_quadrature(d1);
    const cplx e1 = std::sqrt(2.0 * std::numbers::pi) / r1;
    out.push_back(below("gaussian_branch_k1", {{"D", "1+i"}}, std::abs(q1 - e1) / std::abs(e1), 1e-5));

    Eigen::MatrixXcd d2 = Eigen::MatrixXcd::Identity(2, 2);
    d2(0, 1) = d2(1, 0) = cplx(0.0, 1.0);
    const cplx r2 = gaussian_branch_det(d2).value;
    const cplx q2 = gaussian_integral_quadrature(d2);
    const cplx e2 = 2.0 * std::numbers::pi / r2;
    out.push_back(below("gaussian_branch_k2", {{"D", "I + i[[0,1],[1,0]]"}}, std::abs(q2 - e2) / std::abs(e2), 1e-5));

    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    int checked = 0;
    for (int trial = 0; checked < 20 && trial < 1000; ++trial) {
        const Eigen::Index k = 1 + trial % 4;
        const int L = 1 + trial % 5;
        Eigen::MatrixXd M(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j) M(i, j) = u(gen);
        const Eigen::MatrixXd D = 0.5 * (M + M.transpose());
        if (iterated_D_matrices(D, L).failure_index) continue;
        worst = std::max(worst, schur_equivalence_check(D, L));
        ++checked;
    }
    out.push_back(below("schur_equivalence", {{"samples", checked}, {"k_max", 4}, {"L_max", 5}}, worst, 1e-10));

    // Mismatches between the invertibility test and membership in the excluded set.
    int mismatches = 0;
    for (int L = 1; L <= 5; ++L) {
        const auto ex = excluded_set(L);
        for (int i = 0; i < 10000; ++i) {
            const double E = (i - 5000) * 0x1.0p-11;
            const bool invertible = a_matrices_invertible(E, VerticalOperator(), L);
            if (invertible == (ex.distance(E) < 1e-8)) ++mismatches;
        }
    }
    out.push_back(below("a_matrices_vs_excluded_set", {{"L_max", 5}, {"grid", 10000}}, mismatches, 0.5));
    return out;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, const VerifyOptions& opts) {
    if (suite == "identities") return verify_identities();
    if (suite == "frechet") return verify_frechet(opts);
    if (suite == "susy") return verify_susy();
    if (suite == "all") {
        auto out = verify_identities();
        for (auto&& r : verify_frechet(opts)) out.push_back(std::move(r));
        for (auto&& r : verify_susy()) out.push_back(std::move(r));
        return out;
    }
    throw InvalidArgument("unknown verify suite '" + suite + "'");
}

}  // namespace conetree

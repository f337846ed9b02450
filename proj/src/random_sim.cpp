#include "conetree/random_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

#include <Eigen/SparseLU>

#include "conetree/errors.hpp"
#include "conetree/frechet.hpp"

namespace conetree {

DisorderModel parse_disorder(const std::string& spec, std::size_t m) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw InvalidArgument("disorder must look like kind:half_width, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    DisorderModel model;
    model.m = m;
    if (kind == "diagonal" || kind == "diagonal-iid-uniform") {
        model.kind = DisorderKind::DiagonalIidUniform;
    } else if (kind == "scalar" || kind == "scalar-uniform") {
        model.kind = DisorderKind::ScalarUniform;
    } else if (kind == "dense" || kind == "dense-symmetric-bounded") {
        model.kind = DisorderKind::DenseSymmetricBounded;
    } else {
        throw InvalidArgument("unknown disorder kind '" + kind + "'");
    }
    try {
        std::size_t used = 0;
        model.half_width = std::stod(spec.substr(colon + 1), &used);
        if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw InvalidArgument("bad disorder half-width in '" + spec + "'");
    }
    if (!(model.half_width > 0.0)) throw InvalidArgument("disorder half-width must be positive");
    return model;
}

std::string to_string(DisorderKind kind) {
    switch (kind) {
        case DisorderKind::DiagonalIidUniform: return "diagonal-iid-uniform";
        case DisorderKind::ScalarUniform: return "scalar-uniform";
        case DisorderKind::DenseSymmetricBounded: return "dense-symmetric-bounded";
    }
    return "unknown";
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::for_replica(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

Eigen::MatrixXd sample_potential(const DisorderModel& model, Rng& rng) {
    const auto m = static_cast<Eigen::Index>(model.m);
    const double w = model.half_width;
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(m, m);
    switch (model.kind) {
        case DisorderKind::DiagonalIidUniform:
            for (Eigen::Index i = 0; i < m; ++i) V(i, i) = rng.uniform(-w, w);
            break;
        case DisorderKind::ScalarUniform: {
            const double v = rng.uniform(-w, w);
            for (Eigen::Index i = 0; i < m; ++i) V(i, i) = v;
            break;
        }
        case DisorderKind::DenseSymmetricBounded: {
            Eigen::MatrixXd M(m, m);
            for (Eigen::Index i = 0; i < m; ++i)
                for (Eigen::Index j = 0; j < m; ++j) M(i, j) = rng.uniform(-w, w);
            V = 0.5 * (M + M.transpose());
            break;
        }
    }
    return V;
}

void SimulationConfig::validate() const {
    if (K < 1 || L < 1) throw InvalidArgument("K and L must both be >= 1");
    if (root_label > static_cast<Label>(L)) throw InvalidArgument("root label must lie in 0..L");
    if (depth < 1) throw InvalidArgument("depth must be >= 1");
    if (samples < 1) throw InvalidArgument("samples must be >= 1");
    if (disorder.m != A.size()) throw InvalidArgument("disorder size does not match A");
    if (!(disorder.half_width > 0.0)) throw InvalidArgument("disorder half-width must be positive");
    if (z.imag() < 0.0) throw InvalidArgument("spectral parameter must have Im z >= 0");
    if (z.imag() == 0.0) {
        if (boundary != Boundary::Wired)
            throw DomainRejection("eta = 0 requires the wired boundary");
        boundary_table(z.real(), A, K, L);  // throws DomainRejection outside the strip a.c. set
    }
}

double MatrixGreens::min_imag_eigenvalue() const {
    const Eigen::MatrixXcd im = (value - value.adjoint()) / cplx(0.0, 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(im, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

Eigen::MatrixXcd free_label_table(int K, int L, const VerticalOperator& A, cplx z) {
    Eigen::MatrixXcd table(L + 1, static_cast<Eigen::Index>(A.size()));
    for (std::size_t j = 0; j < A.size(); ++j) {
        const cplx shifted = z - A[j];
        const GreensVector gv = z.imag() > 0.0
                                    ? general_greens_continuation(make_kl_matrix(K, L), shifted, {1e-14})
                                    : boundary_greens(K, L, shifted.real());
        for (int p = 0; p <= L; ++p)
            table(p, static_cast<Eigen::Index>(j)) = gv.gamma[static_cast<std::size_t>(p)];
    }
    return table;
}

RecursionResult forward_greens(const TruncatedTree& tree, const VerticalOperator& A, double lambda,
                               cplx z, const std::vector<Eigen::MatrixXd>& potentials,
                               Boundary boundary, const Eigen::MatrixXcd& free_values,
                               const SubstitutionMatrix& S) {
    const auto m = static_cast<Eigen::Index>(A.size());
    if (potentials.size() != tree.size()) throw InvalidArgument("one potential per node required");
    if (boundary == Boundary::Wired &&
        (free_values.rows() != static_cast<Eigen::Index>(S.size()) || free_values.cols() != m))
        throw InvalidArgument("free value table has the wrong shape");

    Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) shift(j, j) = z - A[static_cast<std::size_t>(j)];

    std::vector<Eigen::MatrixXcd> G(tree.size());
    RecursionResult result;
    for (std::size_t id = tree.size(); id-- > 0;) {
        const TreeNode& x = tree.node(id);
        if (potentials[id].rows() != m || potentials[id].cols() != m)
            throw InvalidArgument("potential has the wrong dimension");
        Eigen::MatrixXcd M = shift - lambda * potentials[id].cast<cplx>();
        for (std::size_t c = 0; c < x.child_count; ++c) M += G[x.first_child + c];
        if (x.generation == tree.depth() && boundary == Boundary::Wired) {
            for (Label q = 0; q < S.size(); ++q) {
                const auto n = static_cast<double>(S(x.label, q));
                if (n == 0.0) continue;
                for (Eigen::Index j = 0; j < m; ++j)
                    M(j, j) += n * free_values(static_cast<Eigen::Index>(q), j);
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
        if (!(lu.rcond() > 1e-14)) {
            result.degenerate = true;
            result.root.value = Eigen::MatrixXcd::Constant(m, m, cplx(NAN, NAN));
            return result;
        }
        G[id] = -lu.inverse();
        // Children are never read again once the parent is formed.
        for (std::size_t c = 0; c < x.child_count; ++c) G[x.first_child + c].resize(0, 0);
    }
    result.root.value = std::move(G[0]);
    return result;
}

RecursionResult forward_greens_recursion(const SimulationConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto S = make_kl_matrix(cfg.K, cfg.L);
    const auto tree = build_tree(S, cfg.root_label, cfg.depth);
    std::vector<Eigen::MatrixXd> potentials;
    potentials.reserve(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) potentials.push_back(sample_potential(cfg.disorder, rng));
    const Eigen::MatrixXcd free = cfg.boundary == Boundary::Wired
                                      ? free_label_table(cfg.K, cfg.L, cfg.A, cfg.z)
                                      : Eigen::MatrixXcd();
    return forward_greens(tree, cfg.A, cfg.lambda, cfg.z, potentials, cfg.boundary, free, S);
}

Eigen::SparseMatrix<double> assemble_hamiltonian(const TruncatedTree& tree, const VerticalOperator& A,
                                                 double lambda,
                                                 const std::vector<Eigen::MatrixXd>& potentials) {
    const auto m = static_cast<Eigen::Index>(A.size());
    if (potentials.size() != tree.size()) throw InvalidArgument("one potential per node required");
    const auto n = static_cast<Eigen::Index>(tree.size()) * m;
    std::vector<Eigen::Triplet<double>> triplets;
    for (const auto& x : tree.nodes()) {
        const auto& V = potentials[x.id];
        if (V.rows() != m || V.cols() != m) throw InvalidArgument("potential has the wrong dimension");
        const auto base = static_cast<Eigen::Index>(x.id) * m;
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                double v = lambda * V(i, j);
                if (i == j) v += A[static_cast<std::size_t>(i)];
                if (v != 0.0) triplets.emplace_back(base + i, base + j, v);
            }
        }
        if (x.parent) {
            const auto pbase = static_cast<Eigen::Index>(*x.parent) * m;
            for (Eigen::Index i = 0; i < m; ++i) {
                triplets.emplace_back(base + i, pbase + i, 1.0);
                triplets.emplace_back(pbase + i, base + i, 1.0);
            }
        }
    }
    Eigen::SparseMatrix<double> H(n, n);
    H.setFromTriplets(triplets.begin(), triplets.end());
    return H;
}

MatrixGreens direct_greens(const Eigen::SparseMatrix<double>& H, std::size_t m, cplx z,
                           std::size_t node) {
    if (!(z.imag() > 0.0)) throw DomainRejection("direct resolvent requires Im z > 0");
    const auto n = H.rows();
    const auto mm = static_cast<Eigen::Index>(m);
    const auto base = static_cast<Eigen::Index>(node) * mm;
    if (H.cols() != n || n % mm != 0 || base + mm > n) throw InvalidArgument("dimension mismatch");

    Eigen::SparseMatrix<cplx> shifted = H.cast<cplx>();
    Eigen::SparseMatrix<cplx> id(n, n);
    id.setIdentity();
    shifted -= z * id;
    shifted.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) throw NumericFailure("sparse LU failed: " + lu.lastErrorMessage());

    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, mm);
    for (Eigen::Index i = 0; i < mm; ++i) rhs(base + i, i) = 1.0;
    const Eigen::MatrixXcd X = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw NumericFailure("sparse solve failed");
    const double residual = (shifted * X - rhs).cwiseAbs().maxCoeff();
    if (!(residual < 1e-8))
        throw NumericFailure("resolvent solve residual " + std::to_string(residual) +
                             " indicates an ill-conditioned system");
    return MatrixGreens{X.middleRows(base, mm)};
}

McEstimate monte_carlo_expectation(const SimulationConfig& cfg, Estimand which, unsigned threads) {
    cfg.validate();
    if (cfg.samples < 2) throw InvalidArgument("Monte Carlo estimates need at least 2 samples");
    const auto S = make_kl_matrix(cfg.K, cfg.L);
    const auto tree = build_tree(S, cfg.root_label, cfg.depth);
    const Eigen::MatrixXcd free = cfg.boundary == Boundary::Wired
                                      ? free_label_table(cfg.K, cfg.L, cfg.A, cfg.z)
                                      : Eigen::MatrixXcd();

    std::vector<RecursionResult> replicas(cfg.samples);
    const auto run_replica = [&](std::size_t r) {
        Rng rng = Rng::for_replica(cfg.seed, r);
        std::vector<Eigen::MatrixXd> potentials;
        potentials.reserve(tree.size());
        for (std::size_t i = 0; i < tree.size(); ++i)
            potentials.push_back(sample_potential(cfg.disorder, rng));
        replicas[r] = forward_greens(tree, cfg.A, cfg.lambda, cfg.z, potentials, cfg.boundary, free, S);
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.samples)));
    if (threads == 1) {
        for (std::size_t r = 0; r < cfg.samples; ++r) run_replica(r);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t r = t; r < cfg.samples; r += threads) run_replica(r);
            });
    }

    // Aggregate in replica order so the result is independent of scheduling.
    // Moments are taken about the first sample, which keeps a constant
    // sequence at exactly zero variance.
    const auto m = static_cast<Eigen::Index>(cfg.m());
    McEstimate est;
    std::optional<Eigen::MatrixXcd> pivot;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(m, m);
    Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(m, m), sq_im = Eigen::MatrixXd::Zero(m, m);
    for (auto& rep : replicas) {
        if (rep.degenerate) {
            ++est.degenerate;
            continue;
        }
        const Eigen::MatrixXcd& G = rep.root.value;
        const Eigen::MatrixXcd v = which == Estimand::G ? G : Eigen::MatrixXcd(G.adjoint() * G);
        if (!pivot) pivot = v;
        const Eigen::MatrixXcd d = v - *pivot;
        sum += d;
        sq_re += d.real().cwiseAbs2();
        sq_im += d.imag().cwiseAbs2();
        ++est.samples_used;
    }
    if (est.samples_used < 2) throw NumericFailure("fewer than 2 non-degenerate samples");
    const double n = static_cast<double>(est.samples_used);
    const Eigen::MatrixXcd shift = sum / n;
    est.mean = *pivot + shift;
    const Eigen::MatrixXd var_re = ((sq_re - n * shift.real().cwiseAbs2()) / (n - 1.0)).cwiseMax(0.0);
    const Eigen::MatrixXd var_im = ((sq_im - n * shift.imag().cwiseAbs2()) / (n - 1.0)).cwiseMax(0.0);
    est.stderr_real = (var_re / n).cwiseSqrt();
    est.stderr_imag = (var_im / n).cwiseSqrt();
    return est;
}

std::vector<DosPoint> dos_estimate(const SimulationConfig& cfg, const std::vector<double>& grid,
                                   unsigned threads) {
    if (!(cfg.z.imag() > 0.0)) throw DomainRejection("density estimates require eta > 0");
    std::vector<DosPoint> out;
    out.reserve(grid.size());
    for (double E : grid) {
        SimulationConfig c = cfg;
        c.z = cplx(E, cfg.z.imag());
        const auto est = monte_carlo_expectation(c, Estimand::G, threads);
        out.push_back(DosPoint{E, est.mean.imag() / std::numbers::pi,
                               est.stderr_imag / std::numbers::pi, est.degenerate});
    }
    return out;
}

}  // namespace conetree

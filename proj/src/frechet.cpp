#include "conetree/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "conetree/errors.hpp"

namespace conetree {

MultiIndex::MultiIndex(std::size_t m) : m_(m), entries_(m * (m + 1) / 2, 0) {
    if (m == 0) throw InvalidArgument("multi-index needs m >= 1");
}

std::size_t MultiIndex::index(std::size_t j, std::size_t k) const {
    if (j > k || k >= m_) throw InvalidArgument("multi-index entry outside the upper triangle");
    // Row j starts after rows 0..j-1 of lengths m, m-1, ...
    return j * m_ - j * (j - 1) / 2 + (k - j);
}

int MultiIndex::operator()(std::size_t j, std::size_t k) const {
    if (j > k) return 0;
    return entries_[index(j, k)];
}

void MultiIndex::set(std::size_t j, std::size_t k, int value) {
    if (value < 0) throw InvalidArgument("multi-index entries must be >= 0");
    entries_[index(j, k)] = value;
}

int MultiIndex::norm1() const noexcept {
    int total = 0;
    for (int v : entries_) total += v;
    return total;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    if (other.m_ != m_) throw InvalidArgument("multi-index size mismatch");
    MultiIndex out(m_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] + other.entries_[i];
    return out;
}

std::string MultiIndex::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
    os << ']';
    return os.str();
}

std::vector<MultiIndex> enumerate_multi_indices(std::size_t m, int max_norm) {
    std::vector<MultiIndex> out;
    MultiIndex current(m);
    const std::size_t slots = current.packed().size();
    std::vector<int> entries(slots, 0);

    // Compositions of n into `slots` parts, first slot largest first.
    std::function<void(std::size_t, int)> fill = [&](std::size_t slot, int remaining) {
        if (slot + 1 == slots) {
            entries[slot] = remaining;
            MultiIndex J(m);
            std::size_t pos = 0;
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t k = j; k < m; ++k) J.set(j, k, entries[pos++]);
            out.push_back(std::move(J));
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            entries[slot] = v;
            fill(slot + 1, remaining - v);
        }
    };
    for (int n = 0; n <= max_norm; ++n) fill(0, n);
    return out;
}

BoundaryTable boundary_table(double E, const VerticalOperator& A, int K, int L) {
    BoundaryTable table{K, L, E, Eigen::MatrixXcd(L + 1, static_cast<Eigen::Index>(A.size()))};
    for (std::size_t j = 0; j < A.size(); ++j) {
        GreensVector gv;
        try {
            gv = boundary_greens(K, L, E - A[j]);
        } catch (const DomainRejection& e) {
            throw DomainRejection("E = " + std::to_string(E) +
                                  " is outside the strip a.c. set: " + e.what());
        }
        for (int p = 0; p <= L; ++p)
            table.gamma(p, static_cast<Eigen::Index>(j)) = gv.gamma[static_cast<std::size_t>(p)];
    }
    return table;
}

ThetaMatrix theta(const MultiIndex& J, const BoundaryTable& table) {
    const auto m = static_cast<std::size_t>(table.gamma.cols());
    if (J.m() != m) throw InvalidArgument("multi-index size does not match the vertical operator");
    ThetaMatrix out{Eigen::VectorXcd::Ones(table.L + 1)};
    for (int p = 0; p <= table.L; ++p) {
        cplx acc = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t k = j; k < m; ++k) {
                const int power = J(j, k);
                if (power == 0) continue;
                const cplx base = table.gamma(p, static_cast<Eigen::Index>(j)) *
                                  table.gamma(p, static_cast<Eigen::Index>(k));
                for (int e = 0; e < power; ++e) acc *= base;
            }
        }
        out.values(p) = acc;
    }
    return out;
}

ThetaMatrix theta(const MultiIndex& J, double E, const VerticalOperator& A, int K, int L) {
    return theta(J, boundary_table(E, A, K, L));
}

namespace {

Eigen::MatrixXd kl_matrix_dense(int K, int L) {
    const auto S = make_kl_matrix(K, L);
    Eigen::MatrixXd out(L + 1, L + 1);
    for (int p = 0; p <= L; ++p)
        for (int q = 0; q <= L; ++q)
            out(p, q) = static_cast<double>(S(static_cast<Label>(p), static_cast<Label>(q)));
    return out;
}

}  // namespace

Eigen::MatrixXcd frechet_matrix(const MultiIndex& J, const MultiIndex& Jp,
                                const BoundaryTable& table) {
    const Eigen::VectorXcd diag =
        theta(J, table).values.cwiseProduct(theta(Jp, table).values.conjugate());
    return diag.asDiagonal() * kl_matrix_dense(table.K, table.L).cast<cplx>();
}

std::vector<cplx> frechet_eigenvalues(const MultiIndex& J, const MultiIndex& Jp,
                                      const BoundaryTable& table) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(frechet_matrix(J, Jp, table), false);
    if (solver.info() != Eigen::Success) throw NumericFailure("Frechet eigensolve failed");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<cplx> frechet_eigenvalues(const MultiIndex& J, const MultiIndex& Jp, double E,
                                      const VerticalOperator& A, int K, int L) {
    return frechet_eigenvalues(J, Jp, boundary_table(E, A, K, L));
}

cplx f_value(const MultiIndex& J, const MultiIndex& Jp, const BoundaryTable& table) {
    const Eigen::VectorXcd t = theta(J, table).values.cwiseProduct(theta(Jp, table).values.conjugate());
    cplx prod = 1.0;
    for (Eigen::Index p = 0; p < t.size(); ++p) prod *= t(p);
    return 1.0 - static_cast<double>(table.K) * t(0) - prod;
}

UnitEigenvalueCertificate check_no_unit_eigenvalue(double E, const VerticalOperator& A, int K,
                                                   int L, int cutoff) {
    if (cutoff < 0 || cutoff > kMaxFrechetCutoff)
        throw InvalidArgument("cutoff must lie in [0, " + std::to_string(kMaxFrechetCutoff) + "]");
    const auto table = boundary_table(E, A, K, L);
    const auto indices = enumerate_multi_indices(A.size(), cutoff);

    UnitEigenvalueCertificate cert{INFINITY, MultiIndex(A.size()), MultiIndex(A.size()), 0};
    for (const auto& J : indices) {
        for (const auto& Jp : indices) {
            if (J.norm1() + Jp.norm1() > cutoff) continue;
            ++cert.pairs_checked;
            const double v = std::abs(f_value(J, Jp, table));
            if (v < cert.min_abs_f) {
                cert.min_abs_f = v;
                cert.argmin_J = J;
                cert.argmin_Jp = Jp;
            }
        }
    }
    return cert;
}

}  // namespace conetree

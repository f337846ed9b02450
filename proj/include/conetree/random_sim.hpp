#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "conetree/greens_free.hpp"
#include "conetree/tree.hpp"

namespace conetree {

enum class DisorderKind { DiagonalIidUniform, ScalarUniform, DenseSymmetricBounded };

struct DisorderModel {
    DisorderKind kind = DisorderKind::DiagonalIidUniform;
    double half_width = 1.0;
    std::size_t m = 1;
};

/// Parses "diagonal:w", "scalar:w" or "dense:w" (long names accepted too).
DisorderModel parse_disorder(const std::string& spec, std::size_t m);
std::string to_string(DisorderKind kind);

/// 64-bit engine whose uniform draws are computed from raw output bits, so a
/// given seed yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for replica `index` of a run seeded with `seed`.
    static Rng for_replica(std::uint64_t seed, std::uint64_t index);

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

Eigen::MatrixXd sample_potential(const DisorderModel& model, Rng& rng);

enum class Boundary { Zero, Wired };

struct SimulationConfig {
    int K = 1;
    int L = 1;
    Label root_label = 0;
    int depth = 12;
    VerticalOperator A;
    double lambda = 0.0;
    cplx z{1.0, 0.05};
    DisorderModel disorder;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    Boundary boundary = Boundary::Wired;

    std::size_t m() const { return A.size(); }
    /// Throws InvalidArgument or DomainRejection on inconsistent settings.
    void validate() const;
};

/// m x m block of a resolvent; symmetric, with positive semidefinite
/// imaginary part in the upper half-plane.
struct MatrixGreens {
    Eigen::MatrixXcd value;

    double symmetry_defect() const { return (value - value.transpose()).cwiseAbs().maxCoeff(); }
    /// Smallest eigenvalue of (G - G^*)/(2i).
    double min_imag_eigenvalue() const;
};

/// Free Green's values Gamma^(label)_{z - a_j}, rows = labels, cols = j.
/// Uses the half-plane iteration for Im z > 0 and the cubic for Im z = 0.
Eigen::MatrixXcd free_label_table(int K, int L, const VerticalOperator& A, cplx z);

struct RecursionResult {
    MatrixGreens root;
    bool degenerate = false;
};

/// Bottom-up G^{(x|0)} = -(sum_children G^{(y|0)} + z - A - lambda V(x))^{-1}.
/// Children cut off by the truncation contribute 0 (zero boundary) or the
/// matching row of `free_values` (wired boundary).
RecursionResult forward_greens(const TruncatedTree& tree, const VerticalOperator& A, double lambda,
                               cplx z, const std::vector<Eigen::MatrixXd>& potentials,
                               Boundary boundary, const Eigen::MatrixXcd& free_values,
                               const SubstitutionMatrix& S);

/// One replica: fresh potentials on every node drawn from `rng` in node-id
/// order, then the forward recursion.
RecursionResult forward_greens_recursion(const SimulationConfig& cfg, Rng& rng);

/// Block operator on nodes x m: identity blocks on tree edges and
/// A + lambda V(x) on the diagonal.
Eigen::SparseMatrix<double> assemble_hamiltonian(const TruncatedTree& tree, const VerticalOperator& A,
                                                 double lambda,
                                                 const std::vector<Eigen::MatrixXd>& potentials);

/// Diagonal m x m block of (H - z)^{-1} at `node`.  Requires Im z > 0.
MatrixGreens direct_greens(const Eigen::SparseMatrix<double>& H, std::size_t m, cplx z,
                           std::size_t node);

enum class Estimand { G, AbsG2 };

struct McEstimate {
    Eigen::MatrixXcd mean;
    /// Per-entry standard errors of the mean, real and imaginary parts.
    Eigen::MatrixXd stderr_real;
    Eigen::MatrixXd stderr_imag;
    std::size_t samples_used = 0;
    std::size_t degenerate = 0;
};

/// Sample mean of G (or G^* G) at the root over independent replicas.
/// Replicas are distributed over `threads` workers; the result does not
/// depend on the thread count.
McEstimate monte_carlo_expectation(const SimulationConfig& cfg, Estimand which,
                                   unsigned threads = 1);

struct DosPoint {
    double E = 0.0;
    Eigen::MatrixXd density;
    Eigen::MatrixXd standard_error;
    std::size_t degenerate = 0;
};

/// (1/pi) Im E[G] at each grid energy (z = E + i eta with the configured eta).
std::vector<DosPoint> dos_estimate(const SimulationConfig& cfg, const std::vector<double>& grid,
                                   unsigned threads = 1);

}  // namespace conetree

#include "conetree/susy.hpp"

#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss.hpp>

#include "conetree/errors.hpp"

namespace conetree {

BranchedDeterminantRoot gaussian_branch_det(const Eigen::MatrixXcd& D) {
    if (D.rows() != D.cols() || D.rows() == 0) throw InvalidArgument("D must be square and nonempty");
    if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + D.cwiseAbs().maxCoeff()))
        throw InvalidArgument("D must be complex symmetric");
    const Eigen::MatrixXd A = D.real();
    const Eigen::MatrixXd B = D.imag();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> a_eig(A);
    if (a_eig.info() != Eigen::Success) throw NumericFailure("eigensolve of Re D failed");
    if (!(a_eig.eigenvalues().minCoeff() > 0.0))
        throw DomainRejection("Re D is not positive definite");

    const Eigen::VectorXd alpha = a_eig.eigenvalues();
    const Eigen::MatrixXd inv_sqrt_A =
        a_eig.eigenvectors() * alpha.cwiseSqrt().cwiseInverse().asDiagonal() * a_eig.eigenvectors().transpose();
    Eigen::MatrixXd M = inv_sqrt_A * B * inv_sqrt_A;
    M = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> m_eig(M, Eigen::EigenvaluesOnly);
    if (m_eig.info() != Eigen::Success) throw NumericFailure("eigensolve of A^-1/2 B A^-1/2 failed");

    cplx value = 1.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) value *= std::sqrt(alpha(i));
    // Each eigenvalue 1 + i mu has real part 1, so the principal root is continuous in mu.
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
        value *= std::sqrt(cplx(1.0, m_eig.eigenvalues()(i)));
    return BranchedDeterminantRoot{D, value};
}

cplx gaussian_integral_quadrature(const Eigen::MatrixXcd& D, double radius, int panels_per_unit) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto k = D.rows();
    if (k < 1 || k > 3 || D.cols() != k) throw InvalidArgument("quadrature supports 1 <= k <= 3");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> a_eig(Eigen::MatrixXd(D.real()), Eigen::EigenvaluesOnly);
    const double lmin = a_eig.eigenvalues().minCoeff();
    if (!(lmin > 0.0)) throw DomainRejection("Re D is not positive definite");
    const double half = radius / std::sqrt(lmin);
    const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * half * panels_per_unit)));
    const double width = 2.0 * half / panels;

    Eigen::VectorXd x(k);
    std::function<cplx(Eigen::Index)> integrate_dim = [&](Eigen::Index dim) -> cplx {
        const auto integrand = [&](double t) -> cplx {
            x(dim) = t;
            if (dim + 1 < k) return integrate_dim(dim + 1);
            const cplx q = x.transpose().cast<cplx>() * D * x.cast<cplx>();
            return std::exp(-0.5 * q);
        };
        cplx total = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double lo = -half + p * width;
            total += Rule::integrate(integrand, lo, lo + width);
        }
        return total;
    };
    return integrate_dim(0);
}

namespace {

struct Invertibility {
    bool ok = false;
    double sigma_min = 0.0;
    double condition = INFINITY;
};

Invertibility check_invertible(const Eigen::MatrixXd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    Invertibility out;
    out.sigma_min = s.minCoeff();
    out.condition = out.sigma_min > 0.0 ? s.maxCoeff() / out.sigma_min : INFINITY;
    out.ok = out.sigma_min > kSingularValueFloor && out.condition < kConditionLimit;
    return out;
}

}  // namespace

IteratedDMatrices iterated_D_matrices(const Eigen::MatrixXd& D, int L) {
    if (D.rows() != D.cols() || D.rows() == 0) throw InvalidArgument("D must be square and nonempty");
    if (L < 1) throw InvalidArgument("L must be >= 1");
    IteratedDMatrices out;
    for (int j = 1; j <= L; ++j) {
        const Eigen::MatrixXd M = j == 1 ? D : Eigen::MatrixXd(D + out.D.back());
        if (!check_invertible(M).ok) {
            out.failure_index = j;
            return out;
        }
        out.D.push_back(-M.inverse());
    }
    return out;
}

Eigen::MatrixXd block_tridiagonal(const Eigen::MatrixXd& diag, int j) {
    const auto k = diag.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(j * k, j * k);
    for (int b = 0; b < j; ++b) {
        out.block(b * k, b * k, k, k) = diag;
        if (b + 1 < j) {
            out.block(b * k, (b + 1) * k, k, k).setIdentity();
            out.block((b + 1) * k, b * k, k, k).setIdentity();
        }
    }
    return out;
}

Eigen::MatrixXd schur_complement_inverse(const Eigen::MatrixXd& Y, Eigen::Index k) {
    const auto n = Y.rows();
    if (n == k) return Y.inverse();
    const auto rest = n - k;
    const Eigen::MatrixXd X = Y.bottomRightCorner(rest, rest);
    const Eigen::MatrixXd schur =
        Y.topLeftCorner(k, k) - Y.topRightCorner(k, rest) * X.partialPivLu().solve(Y.bottomLeftCorner(rest, k));
    return schur.inverse();
}

double schur_equivalence_check(const Eigen::MatrixXd& D, int L) {
    const auto iterated = iterated_D_matrices(D, L);
    if (iterated.failure_index)
        throw DomainRejection("D_" + std::to_string(*iterated.failure_index) + " does not exist");
    double worst = 0.0;
    for (int j = 1; j <= L; ++j) {
        const Eigen::MatrixXd big = block_tridiagonal(-D, j);
        const Eigen::MatrixXd via_schur = schur_complement_inverse(big, D.rows());
        worst = std::max(worst, (iterated.D[static_cast<std::size_t>(j - 1)] - via_schur).cwiseAbs().maxCoeff());
    }
    return worst;
}

bool a_matrices_invertible(double E, const VerticalOperator& A, int L) {
    if (L < 1) throw InvalidArgument("L must be >= 1");
    const auto m = static_cast<Eigen::Index>(A.size());
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) diag(i, i) = A[static_cast<std::size_t>(i)] - E;
    for (int j = 1; j <= L; ++j)
        if (!check_invertible(block_tridiagonal(diag, j)).ok) return false;
    return true;
}

}  // namespace conetree

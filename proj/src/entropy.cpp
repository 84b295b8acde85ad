#include "markovscope/entropy.hpp"

#include <cmath>

namespace markovscope {

namespace {

// Squared overlap of each support eigenvector of rho with the kernel of
// sigma, tested against the support-leak tolerance for the +infinity branch.
constexpr double kSupportLeakTol = 1e-9;

}  // namespace

TripartiteState make_tripartite_state(CMatrix rho, std::array<int, 3> dims) {
    for (int d : dims) {
        if (d < 1) throw ValidationError("tripartite state: subsystem dimensions must be positive");
    }
    const Eigen::Index expected = static_cast<Eigen::Index>(dims[0]) * dims[1] * dims[2];
    if (rho.rows() != rho.cols() || rho.rows() != expected) {
        throw ValidationError("tripartite state: matrix is " + std::to_string(rho.rows()) + "x" +
                              std::to_string(rho.cols()) + " but dims imply " +
                              std::to_string(expected));
    }
    if (!all_finite(rho)) {
        throw ValidationError("tripartite state: matrix contains NaN or Inf entries");
    }
    const double scale = max_abs(rho);
    if (hermiticity_defect(rho) > 1e-10 * scale) {
        throw ValidationError("tripartite state: matrix is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (rho + rho.adjoint().eval()));
    if (solver.info() != Eigen::Success) {
        throw NumericError("tripartite state: eigensolver failed to converge");
    }
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -1e-10) {
        throw ValidationError("tripartite state: negative eigenvalue " + std::to_string(min_eig));
    }
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10) {
        throw ValidationError("tripartite state: trace " + std::to_string(tr) + " is not 1");
    }
    return TripartiteState{std::move(rho), dims};
}

void require_density_matrix(const CMatrix& m, const char* where, double trace_tol, double psd_tol) {
    const Complex tr = m.trace();
    if (std::abs(tr.real() - 1.0) > trace_tol || std::abs(tr.imag()) > trace_tol) {
        throw DomainError(std::string(where) + ": trace " + std::to_string(tr.real()) +
                          " differs from 1 beyond tolerance");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (m + m.adjoint().eval()));
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -psd_tol) {
        throw DomainError(std::string(where) + ": negative eigenvalue " + std::to_string(min_eig) +
                          " beyond tolerance");
    }
}

double von_neumann_entropy(const CMatrix& rho, const SupportPolicy& policy) {
    auto sd = spectral(rho, policy);
    const double tr = sd.eigenvalues.sum();
    if (std::abs(tr - 1.0) > 1e-8) {
        throw DomainError("von_neumann_entropy: trace " + std::to_string(tr) + " is not 1");
    }
    const double min_eig = sd.eigenvalues.minCoeff();
    if (min_eig < -1e-8) {
        throw DomainError("von_neumann_entropy: negative eigenvalue " + std::to_string(min_eig));
    }
    double s = 0.0;
    for (int i = 0; i < sd.dim(); ++i) {
        if (!sd.is_zero_mode(i) && sd.eigenvalues[i] > 0.0) {
            s -= sd.eigenvalues[i] * std::log2(sd.eigenvalues[i]);
        }
    }
    return s;
}

ExtendedReal relative_entropy(const CMatrix& rho, const CMatrix& sigma,
                              const SupportPolicy& policy) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw ShapeError("relative_entropy: operands must share a dimension");
    }
    auto sr = spectral(rho, policy);
    auto ss = spectral(sigma, policy);
    require_psd(sr, "relative_entropy(rho)");
    require_psd(ss, "relative_entropy(sigma)");

    const int n = sr.dim();
    std::vector<int> sigma_kernel;
    for (int j = 0; j < n; ++j) {
        if (ss.is_zero_mode(j)) sigma_kernel.push_back(j);
    }
    if (!sigma_kernel.empty()) {
        for (int i = 0; i < n; ++i) {
            if (sr.is_zero_mode(i)) continue;
            double leak = 0.0;
            for (int j : sigma_kernel) {
                leak += std::norm(ss.eigenvectors.col(j).dot(sr.eigenvectors.col(i)));
            }
            if (leak > kSupportLeakTol) return ExtendedReal::infinity();
        }
    }

    double s_rho = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!sr.is_zero_mode(i) && sr.eigenvalues[i] > 0.0) {
            s_rho += sr.eigenvalues[i] * std::log2(sr.eigenvalues[i]);
        }
    }
    double cross = 0.0;
    for (int j = 0; j < n; ++j) {
        if (ss.is_zero_mode(j)) continue;
        const double weight =
            (ss.eigenvectors.col(j).adjoint() * rho * ss.eigenvectors.col(j))(0).real();
        cross += weight * std::log2(ss.eigenvalues[j]);
    }
    double value = s_rho - cross;
    if (value < 0.0 && value >= -1e-9) value = 0.0;
    return ExtendedReal::finite(value);
}

double conditional_mutual_information(const TripartiteState& s, const SupportPolicy& policy) {
    const double s_ab = von_neumann_entropy(s.marginal_ab(), policy);
    const double s_bc = von_neumann_entropy(s.marginal_bc(), policy);
    const double s_abc = von_neumann_entropy(s.rho, policy);
    const double s_b = von_neumann_entropy(s.marginal_b(), policy);
    return s_ab + s_bc - s_abc - s_b;
}

double clamp_cmi(double raw) {
    return (raw < 0.0 && raw >= -1e-8) ? 0.0 : raw;
}

}  // namespace markovscope

#include "markovscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace markovscope {

namespace {

void require_square(const CMatrix& m, const char* where) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw ShapeError(std::string(where) + ": expected a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_finite(const CMatrix& m, const char* where) {
    if (!all_finite(m)) {
        throw DomainError(std::string(where) + ": matrix contains NaN or Inf entries");
    }
}

CMatrix matrix_power(CMatrix base, int n) {
    CMatrix acc = CMatrix::Identity(base.rows(), base.cols());
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return acc;
}

}  // namespace

double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix& m) {
    return m.allFinite();
}

double hermiticity_defect(const CMatrix& m) {
    return max_abs(0.5 * (m - m.adjoint().eval()));
}

CMatrix identity(int dim) {
    if (dim < 1) throw ShapeError("identity: dimension must be positive");
    return CMatrix::Identity(dim, dim);
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
    require_square(a, "tensor");
    require_square(b, "tensor");
    require_finite(a, "tensor");
    require_finite(b, "tensor");
    const Eigen::Index da = a.rows();
    const Eigen::Index db = b.rows();
    if (da * db > kMaxDim) {
        throw CapacityError("tensor: product dimension " + std::to_string(da * db) +
                            " exceeds the configured maximum " + std::to_string(kMaxDim));
    }
    CMatrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = a(i, j) * b;
        }
    }
    return out;
}

std::vector<Eigen::Index> factor_offsets(const std::vector<int>& dims, const std::vector<int>& factors) {
    const int n = static_cast<int>(dims.size());
    std::vector<Eigen::Index> strides(n, 1);
    for (int i = n - 2; i >= 0; --i) strides[i] = strides[i + 1] * dims[i + 1];

    Eigen::Index total = 1;
    for (int f : factors) total *= dims[f];

    std::vector<Eigen::Index> offsets(total, 0);
    Eigen::Index block = total;
    for (int f : factors) {
        block /= dims[f];
        for (Eigen::Index lin = 0; lin < total; ++lin) {
            offsets[lin] += ((lin / block) % dims[f]) * strides[f];
        }
    }
    return offsets;
}

CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims, const std::vector<int>& keep) {
    require_square(m, "partial_trace");
    require_finite(m, "partial_trace");
    if (dims.empty()) throw ShapeError("partial_trace: empty dimension list");
    Eigen::Index prod = 1;
    for (int d : dims) {
        if (d < 1) throw ShapeError("partial_trace: dimensions must be positive");
        prod *= d;
    }
    if (prod != m.rows()) {
        throw ShapeError("partial_trace: dimension list product " + std::to_string(prod) +
                         " does not match matrix dimension " + std::to_string(m.rows()));
    }

    std::vector<int> kept(keep);
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw ShapeError("partial_trace: duplicate factor index in keep set");
    }
    for (int k : kept) {
        if (k < 0 || k >= static_cast<int>(dims.size())) {
            throw ShapeError("partial_trace: keep index " + std::to_string(k) + " out of range");
        }
    }
    std::vector<int> traced;
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        if (!std::binary_search(kept.begin(), kept.end(), i)) traced.push_back(i);
    }

    const auto keep_off = factor_offsets(dims, kept);
    const auto tr_off = factor_offsets(dims, traced);
    const Eigen::Index dk = static_cast<Eigen::Index>(keep_off.size());

    CMatrix out = CMatrix::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r) {
        for (Eigen::Index c = 0; c < dk; ++c) {
            Complex acc(0.0, 0.0);
            for (Eigen::Index t : tr_off) {
                acc += m(keep_off[r] + t, keep_off[c] + t);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

CMatrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

CMatrix SpectralDecomposition::support_projector() const {
    CMatrix p = CMatrix::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        if (!is_zero_mode(i)) p += eigenvectors.col(i) * eigenvectors.col(i).adjoint();
    }
    return p;
}

CMatrix SpectralDecomposition::map_support(const std::function<Complex(double)>& f) const {
    Eigen::VectorXcd vals(dim());
    for (int i = 0; i < dim(); ++i) {
        vals[i] = is_zero_mode(i) ? Complex(0.0, 0.0) : f(eigenvalues[i]);
    }
    return eigenvectors * vals.asDiagonal() * eigenvectors.adjoint();
}

CMatrix SpectralDecomposition::map_all(const std::function<Complex(double)>& f) const {
    Eigen::VectorXcd vals(dim());
    for (int i = 0; i < dim(); ++i) vals[i] = f(eigenvalues[i]);
    return eigenvectors * vals.asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral(const CMatrix& h, const SupportPolicy& policy) {
    require_square(h, "spectral");
    require_finite(h, "spectral");
    const double scale = max_abs(h);
    const double defect = hermiticity_defect(h);
    if (defect > 1e-10 * scale) {
        throw DomainError("spectral: input is not Hermitian (defect " + std::to_string(defect) +
                          " exceeds tolerance at scale " + std::to_string(scale) + ")");
    }
    CMatrix sym = 0.5 * (h + h.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericError("spectral: eigensolver failed to converge");
    }

    const int n = static_cast<int>(h.rows());
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    const double lambda_max = out.eigenvalues.cwiseAbs().maxCoeff();
    out.cutoff = policy.cutoff(n, lambda_max);
    out.support_rank = 0;
    for (int i = 0; i < n; ++i) {
        if (!out.is_zero_mode(i)) ++out.support_rank;
    }
    return out;
}

void require_psd(const SpectralDecomposition& sd, const char* where) {
    const double min_eig = sd.eigenvalues.minCoeff();
    if (min_eig < -sd.cutoff) {
        throw DomainError(std::string(where) + ": negative eigenvalue " + std::to_string(min_eig) +
                          " below tolerance -" + std::to_string(sd.cutoff));
    }
}

CMatrix matrix_sqrt(const CMatrix& h, const SupportPolicy& policy) {
    auto sd = spectral(h, policy);
    require_psd(sd, "matrix_sqrt");
    return sd.map_support([](double x) { return Complex(std::sqrt(std::max(x, 0.0)), 0.0); });
}

CMatrix matrix_inv_sqrt(const CMatrix& h, const SupportPolicy& policy) {
    auto sd = spectral(h, policy);
    require_psd(sd, "matrix_inv_sqrt");
    return sd.map_support([](double x) { return Complex(1.0 / std::sqrt(x), 0.0); });
}

CMatrix matrix_log2(const CMatrix& h, const SupportPolicy& policy) {
    auto sd = spectral(h, policy);
    require_psd(sd, "matrix_log2");
    return sd.map_support([](double x) { return Complex(std::log2(x), 0.0); });
}

CMatrix matrix_imaginary_power(const CMatrix& h, double t, const SupportPolicy& policy) {
    auto sd = spectral(h, policy);
    require_psd(sd, "matrix_imaginary_power");
    return sd.map_support([t](double x) {
        const double phase = t * std::log(x);
        return Complex(std::cos(phase), std::sin(phase));
    });
}

CMatrix matrix_exp(const CMatrix& h, const SupportPolicy& policy) {
    auto sd = spectral(h, policy);
    return sd.map_all([](double x) { return Complex(std::exp(x), 0.0); });
}

double trace_norm(const CMatrix& m) {
    require_square(m, "trace_norm");
    require_finite(m, "trace_norm");
    if (m.rows() > 32) {
        Eigen::BDCSVD<CMatrix> svd(m);
        return svd.singularValues().sum();
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues().sum();
}

CMatrix lie_trotter(const CMatrix& a, const CMatrix& b, int n, bool symmetric) {
    if (n <= 0) throw DomainError("lie_trotter: step count must be positive");
    require_square(a, "lie_trotter");
    require_square(b, "lie_trotter");
    if (a.rows() != b.rows()) {
        throw ShapeError("lie_trotter: operands must share a dimension");
    }
    const double nn = static_cast<double>(n);
    CMatrix base;
    if (symmetric) {
        CMatrix half = matrix_exp(a / (2.0 * nn));
        base = half * matrix_exp(b / nn) * half;
    } else {
        base = matrix_exp(a / nn) * matrix_exp(b / nn);
    }
    return matrix_power(std::move(base), n);
}

}  // namespace markovscope

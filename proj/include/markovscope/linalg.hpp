#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "markovscope/errors.hpp"

namespace markovscope {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Hard cap on operator dimension; tensor() refuses to build anything larger.
inline constexpr int kMaxDim = 4096;

// Decides which eigenvalues count as support. An eigenvalue x of an
// operator with spectral radius r and dimension d is a zero mode iff
// |x| <= relative_cutoff * d * r. Scale-invariant and dimension-aware.
struct SupportPolicy {
    double relative_cutoff = 0x1p-40;

    double cutoff(int dim, double max_abs_eigenvalue) const {
        return relative_cutoff * static_cast<double>(dim) * max_abs_eigenvalue;
    }
};

// Tightened policy used when re-examining conjecture-violation candidates.
inline SupportPolicy tightened_support_policy() { return SupportPolicy{0x1p-52}; }

struct SpectralDecomposition {
    RVector eigenvalues;   // sorted descending
    CMatrix eigenvectors;  // column i pairs with eigenvalues[i], orthonormal
    int support_rank = 0;  // eigenvalues with |x| above the cutoff
    double cutoff = 0.0;   // absolute threshold used for support_rank

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    bool is_zero_mode(int i) const { return std::abs(eigenvalues[i]) <= cutoff; }

    // U diag(lambda) U^dagger
    CMatrix reconstruct() const;

    // Orthogonal projector onto the span of the support eigenvectors.
    CMatrix support_projector() const;

    // f applied to support eigenvalues, zero modes mapped to 0.
    CMatrix map_support(const std::function<Complex(double)>& f) const;

    // f applied to every eigenvalue, zero modes included.
    CMatrix map_all(const std::function<Complex(double)>& f) const;
};

double max_abs(const CMatrix& m);
bool all_finite(const CMatrix& m);

// Max-entry modulus of (m - m^dagger)/2.
double hermiticity_defect(const CMatrix& m);

CMatrix identity(int dim);

// Kronecker product; entry ((i*db+k),(j*db+l)) = a(i,j) * b(k,l).
CMatrix tensor(const CMatrix& a, const CMatrix& b);

// Linear row offsets contributed by the chosen factors of a tensor-product
// index, enumerated row-major over those factors with all other factors at 0.
// Shared index bookkeeping for partial traces and block embeddings.
std::vector<Eigen::Index> factor_offsets(const std::vector<int>& dims, const std::vector<int>& factors);

// Trace out every factor not listed in `keep` (sorted ascending, duplicates
// rejected). keep = {} returns the full trace as a 1x1 matrix.
CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims, const std::vector<int>& keep);

// Hermitian eigendecomposition. The input is symmetrized as (h + h^dagger)/2
// first and rejected if the correction exceeds 1e-10 of the entry scale.
SpectralDecomposition spectral(const CMatrix& h, const SupportPolicy& policy = {});

// Throws DomainError naming the offending eigenvalue if any eigenvalue lies
// below -cutoff.
void require_psd(const SpectralDecomposition& sd, const char* where);

// Spectral functions. sqrt/inv_sqrt/log2/imaginary_power act on the support
// only (zero modes map to 0) and require PSD input; exp acts on everything.
CMatrix matrix_sqrt(const CMatrix& h, const SupportPolicy& policy = {});
CMatrix matrix_inv_sqrt(const CMatrix& h, const SupportPolicy& policy = {});
CMatrix matrix_log2(const CMatrix& h, const SupportPolicy& policy = {});
CMatrix matrix_imaginary_power(const CMatrix& h, double t, const SupportPolicy& policy = {});
CMatrix matrix_exp(const CMatrix& h, const SupportPolicy& policy = {});

// Schatten-1 norm: sum of singular values.
double trace_norm(const CMatrix& m);

// [exp(a/n) exp(b/n)]^n, or [exp(a/2n) exp(b/n) exp(a/2n)]^n when symmetric.
CMatrix lie_trotter(const CMatrix& a, const CMatrix& b, int n, bool symmetric);

}  // namespace markovscope

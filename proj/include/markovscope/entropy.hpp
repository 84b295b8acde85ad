#pragma once

#include <array>

#include "markovscope/linalg.hpp"

namespace markovscope {

// Real line extended with +infinity, the codomain of relative entropy.
struct ExtendedReal {
    double value = 0.0;
    bool infinite = false;

    static ExtendedReal finite(double v) { return {v, false}; }
    static ExtendedReal infinity() { return {0.0, true}; }
};

// Density matrix on H_A (x) H_B (x) H_C with the index convention
// |a>|b>|c| -> row (a*dB + b)*dC + c.
struct TripartiteState {
    CMatrix rho;
    std::array<int, 3> dims{};  // (dA, dB, dC)

    int total_dim() const { return dims[0] * dims[1] * dims[2]; }
    std::vector<int> dim_list() const { return {dims[0], dims[1], dims[2]}; }

    CMatrix marginal_a() const { return partial_trace(rho, dim_list(), {0}); }
    CMatrix marginal_b() const { return partial_trace(rho, dim_list(), {1}); }
    CMatrix marginal_c() const { return partial_trace(rho, dim_list(), {2}); }
    CMatrix marginal_ab() const { return partial_trace(rho, dim_list(), {0, 1}); }
    CMatrix marginal_bc() const { return partial_trace(rho, dim_list(), {1, 2}); }
};

// Validating factory: Hermitian within 1e-10 of scale, min eigenvalue
// >= -1e-10, unit trace within 1e-10. Throws ValidationError otherwise.
TripartiteState make_tripartite_state(CMatrix rho, std::array<int, 3> dims);

// Density-matrix precondition shared by the entropy operations; looser than
// the state invariants to leave headroom for accumulated marginal error.
void require_density_matrix(const CMatrix& m, const char* where, double trace_tol = 1e-8,
                            double psd_tol = 1e-8);

// -sum lambda log2 lambda over support eigenvalues, in bits.
double von_neumann_entropy(const CMatrix& rho, const SupportPolicy& policy = {});

// Tr[rho (log2 rho - log2 sigma)] on supports, in bits; +infinity when some
// support eigenvector of rho leaks more than 1e-9 into the kernel of sigma.
// Finite results within -1e-9 of zero are clamped to 0 (Klein inequality).
ExtendedReal relative_entropy(const CMatrix& rho, const CMatrix& sigma,
                              const SupportPolicy& policy = {});

// I(A:C|B) = S(rho_AB) + S(rho_BC) - S(rho_ABC) - S(rho_B), in bits.
// Returns the raw value; tiny SSA-violating negatives are NOT clamped here
// so callers can see the numeric artifact (reports clamp separately).
double conditional_mutual_information(const TripartiteState& s, const SupportPolicy& policy = {});

// Report-side clamp: values in [-1e-8, 0) become 0.
double clamp_cmi(double raw);

}  // namespace markovscope

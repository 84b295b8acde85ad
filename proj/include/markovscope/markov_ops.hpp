#pragma once

#include <vector>

#include "markovscope/entropy.hpp"
#include "markovscope/linalg.hpp"

namespace markovscope {

// Completely positive trace-preserving map given by Kraus operators
// K_mu : H_in -> H_out with sum K_mu^dagger K_mu = 1.
struct KrausChannel {
    int input_dim = 0;
    int output_dim = 0;
    std::vector<CMatrix> kraus;

    CMatrix apply(const CMatrix& x) const;          // sum K x K^dagger
    CMatrix apply_adjoint(const CMatrix& y) const;  // sum K^dagger y K
};

// Validating factory; checks shapes and completeness within 1e-9 max-entry.
KrausChannel make_kraus_channel(std::vector<CMatrix> kraus_ops);

KrausChannel identity_channel(int dim);

// Partial trace over the factors NOT in `keep`, as an explicit Kraus channel.
KrausChannel partial_trace_channel(const std::vector<int>& dims, const std::vector<int>& keep);

// M = rho_AB^{1/2} rho_B^{-1/2} rho_BC^{1/2} (with identity lifts) together
// with its Gram forms and self-commutator.
struct MOperatorBundle {
    CMatrix m;
    CMatrix mm_dagger;
    CMatrix m_dagger_m;
    CMatrix commutator;  // mm_dagger - m_dagger_m
    double commutator_trace_norm = 0.0;
};

MOperatorBundle build_m_bundle(const TripartiteState& s, const SupportPolicy& policy = {});

// Transpose channel of phi with respect to sigma, applied to omega:
// sigma^{1/2} phi^dagger( phi(sigma)^{-1/2} omega phi(sigma)^{-1/2} ) sigma^{1/2},
// inverses taken on support.
CMatrix petz_map(const KrausChannel& phi, const CMatrix& sigma, const CMatrix& omega,
                 const SupportPolicy& policy = {});

// The three quantities whose simultaneous vanishing characterizes a quantum
// Markov chain: I(A:C|B), ||rho - MM^dagger||_1, ||rho - M^dagger M||_1.
struct SaturationResiduals {
    double cmi = 0.0;
    double dist_mm = 0.0;
    double dist_mdm = 0.0;
};

SaturationResiduals saturation_residuals(const TripartiteState& s, const MOperatorBundle& bundle,
                                        const SupportPolicy& policy = {});

}  // namespace markovscope

#pragma once

#include <string>
#include <vector>

#include "markovscope/entropy.hpp"
#include "markovscope/markov_ops.hpp"

namespace markovscope {

// One summand of the block decomposition H_B = (+)_k H_bL_k (x) H_bR_k:
// weight p_k, a density matrix on A (x) bL_k and one on bR_k (x) C.
struct MarkovBlock {
    double weight = 0.0;
    int dim_left = 0;   // dim of bL_k
    int dim_right = 0;  // dim of bR_k
    CMatrix rho_left;   // on A (x) bL_k
    CMatrix rho_right;  // on bR_k (x) C
};

struct MarkovBlockSpec {
    int dim_a = 0;
    int dim_c = 0;
    std::vector<MarkovBlock> blocks;

    int dim_b() const {
        int d = 0;
        for (const auto& b : blocks) d += b.dim_left * b.dim_right;
        return d;
    }
};

// Assembles (+)_k p_k rho_{A bL_k} (x) rho_{bR_k C} into a TripartiteState,
// blocks ordered by k and bL-major within each block sector of B.
TripartiteState build_markov_state(const MarkovBlockSpec& spec);

struct RuskaiResult {
    double residual = 0.0;
    // Set when supp(rho_ABC) is strictly smaller than
    // supp(rho_AB (x) 1_C) /\ supp(1_A (x) rho_BC); the projected log
    // condition loses information there.
    bool degraded_support = false;
};

// ||P (log2 rho_ABC + log2 rho_B - log2 rho_AB - log2 rho_BC) P||_1 with
// on-support logs, identity lifts, and P the support projector of rho_ABC.
RuskaiResult check_ruskai(const TripartiteState& s, const SupportPolicy& policy = {});

const std::vector<double>& default_t_grid();  // {±1/4, ±1/2, ±1, ±2}

// max over the grid of ||rho_ABC^{it} rho_BC^{-it} - rho_AB^{it} rho_B^{-it}||_1
// with identity lifts and on-support imaginary powers.
double check_petz_t(const TripartiteState& s, const std::vector<double>& t_grid,
                    const SupportPolicy& policy = {});

enum class StateClass { D1, D2, D3 };

std::string to_string(StateClass c);

struct ClassLabel {
    StateClass cls = StateClass::D1;
    double comm_norm = 0.0;  // ||[M, M^dagger]||_1
    double dist_mm = 0.0;    // ||rho - MM^dagger||_1
    double eta_comm = 0.0;
    double eta_state = 0.0;
};

// D3 iff comm_norm > eta_comm; else D1 iff dist_mm <= eta_state, else D2.
ClassLabel classify(const TripartiteState& s, const MOperatorBundle& bundle,
                    double eta_comm = 1e-6, double eta_state = 1e-6);

}  // namespace markovscope

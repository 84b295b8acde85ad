#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "markovscope/checkers.hpp"
#include "markovscope/sampling.hpp"

namespace markovscope {

// Pinsker-type constants in bits.
inline constexpr double kInvTwoLn2 = 1.0 / (2.0 * std::numbers::ln2);
inline constexpr double kInvEightLn2 = 1.0 / (8.0 * std::numbers::ln2);

enum class Measure { HsInduced, ClassicalDirichlet, MarkovPerturbed };

std::string to_string(Measure m);
std::optional<Measure> measure_from_string(const std::string& name);

struct SampleConfig {
    std::array<int, 3> dims{2, 2, 2};
    Measure measure = Measure::HsInduced;
    int env_dim = 0;           // 0 means dA*dB*dC
    double noise_scale = 0.0;  // markov_perturbed only
    long long count = 1;
    std::uint64_t seed = 0;
};

// Deterministic in (cfg.seed, index); each index owns its own RNG stream.
TripartiteState sample_state(const SampleConfig& cfg, long long index);

// Everything the conjecture scan records about one state.
struct DeficitRecord {
    std::string state_id;
    std::string source;  // measure name, or "search"
    std::uint64_t seed = 0;
    long long index = 0;

    double cmi = 0.0;      // clamped to 0 within [-1e-8, 0)
    double cmi_raw = 0.0;  // unclamped diagnostic
    double dist_mm = 0.0;
    double dist_mdm = 0.0;
    double comm_norm = 0.0;
    double deficit_conj = 0.0;  // cmi - 1/(2 ln 2) max(dist_mm^2, dist_mdm^2)
    double deficit_comm = 0.0;  // cmi - 1/(8 ln 2) comm_norm^2
    StateClass class_label = StateClass::D1;
};

DeficitRecord evaluate_deficits(const TripartiteState& s, const SupportPolicy& policy = {},
                                double eta_comm = 1e-6, double eta_state = 1e-6);

// Variant reusing an already-built bundle.
DeficitRecord evaluate_deficits(const TripartiteState& s, const MOperatorBundle& bundle,
                                const SupportPolicy& policy, double eta_comm, double eta_state);

struct PinskerCheck {
    bool commuting = false;
    bool applicable = false;     // identity only holds for commuting marginals
    bool support_escape = false; // S(rho||MM^dagger) was +infinity
    double identity_residual = 0.0;
    double max_marginal_comm_norm = 0.0;
};

// |I(A:C|B) - S(rho||MM^dagger)| when the lifted marginals pairwise commute.
PinskerCheck pinsker_identity_check(const TripartiteState& s, const MOperatorBundle& bundle,
                                    const SupportPolicy& policy = {});
PinskerCheck pinsker_identity_check(const TripartiteState& s, const SupportPolicy& policy = {});

struct MonotonicityGap {
    ExtendedReal dpi_gap;            // S(rho||sigma) - S(Phi rho||Phi sigma)
    ExtendedReal modified_residual;  // dpi_gap - 1/(2 ln 2) ||rho - recovery||_1^2
    double recovery_dist = 0.0;      // ||rho - Phi_sigma^dagger(Phi(rho))||_1
    bool support_escape = false;     // supp(rho) escaped supp(sigma)
};

// Probes the open modified-monotonicity inequality; records the residual
// whether or not it is negative.
MonotonicityGap monotonicity_gap(const CMatrix& rho, const CMatrix& sigma,
                                 const KrausChannel& phi, const SupportPolicy& policy = {});

struct SearchConfig {
    std::array<int, 3> dims{2, 2, 2};
    long long budget = 10000;
    int restarts = 10;
    std::uint64_t seed = 0;
    double step_init = 0.1;
    int stall_limit = 20;
    double step_floor = 1e-7;
    double eta_comm = 1e-6;
    double eta_state = 1e-6;
    SupportPolicy policy{};
};

struct SearchTrailPoint {
    long long evaluation = 0;  // global evaluation counter at the improvement
    int restart = 0;
    double deficit_conj = 0.0;
};

struct SearchResult {
    DeficitRecord best;
    TripartiteState best_state;
    std::vector<SearchTrailPoint> trail;
    long long evaluations = 0;
};

// Coordinate perturbation descent on deficit_conj over a complex
// lower-triangular factor L with rho = L L^dagger / tr(L L^dagger).
// Accept on strict decrease; halve the step after stall_limit consecutive
// rejections; stop at step_floor or when the restart budget runs out.
SearchResult search_min_deficit(const SearchConfig& cfg);

// Two-tier defense for candidate violations: re-evaluate from scratch at the
// tightened support cutoff 2^-52.
DeficitRecord reevaluate_tightened(const TripartiteState& s, const DeficitRecord& original,
                                   double eta_comm = 1e-6, double eta_state = 1e-6);

}  // namespace markovscope

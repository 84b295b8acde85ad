#include "markovscope/conjecture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace markovscope {

std::string to_string(Measure m) {
    switch (m) {
        case Measure::HsInduced: return "hs_induced";
        case Measure::ClassicalDirichlet: return "classical_dirichlet";
        case Measure::MarkovPerturbed: return "markov_perturbed";
    }
    return "?";
}

std::optional<Measure> measure_from_string(const std::string& name) {
    if (name == "hs_induced") return Measure::HsInduced;
    if (name == "classical_dirichlet") return Measure::ClassicalDirichlet;
    if (name == "markov_perturbed") return Measure::MarkovPerturbed;
    return std::nullopt;
}

TripartiteState sample_state(const SampleConfig& cfg, long long index) {
    if (index < 0 || index >= cfg.count) {
        throw DomainError("sample_state: index " + std::to_string(index) +
                          " outside [0, " + std::to_string(cfg.count) + ")");
    }
    RandomStream rng = make_stream(cfg.seed, static_cast<std::uint64_t>(index));
    const int d = cfg.dims[0] * cfg.dims[1] * cfg.dims[2];

    switch (cfg.measure) {
        case Measure::HsInduced: {
            const int env = cfg.env_dim > 0 ? cfg.env_dim : d;
            return make_tripartite_state(sample_density_hs(rng, d, env), cfg.dims);
        }
        case Measure::ClassicalDirichlet: {
            const auto p = sample_dirichlet_flat(rng, d);
            CMatrix rho = CMatrix::Zero(d, d);
            for (int i = 0; i < d; ++i) rho(i, i) = p[i];
            return make_tripartite_state(std::move(rho), cfg.dims);
        }
        case Measure::MarkovPerturbed: {
            const auto spec = sample_markov_spec(rng, cfg.dims);
            TripartiteState s = build_markov_state(spec);
            if (cfg.noise_scale <= 0.0) return s;
            CMatrix h = sample_gue_hermitian(rng, d);
            const double tn = trace_norm(h);
            if (tn > 0.0) {
                CMatrix rho = s.rho + (cfg.noise_scale / tn) * h;
                // Reproject onto the density-matrix set: clip negative
                // eigenvalues, renormalize the trace.
                auto sd = spectral(rho);
                RVector clipped = sd.eigenvalues.cwiseMax(0.0);
                rho = sd.eigenvectors * clipped.asDiagonal() * sd.eigenvectors.adjoint();
                rho /= rho.trace().real();
                return make_tripartite_state(std::move(rho), cfg.dims);
            }
            return s;
        }
    }
    throw DomainError("sample_state: unknown measure");
}

DeficitRecord evaluate_deficits(const TripartiteState& s, const SupportPolicy& policy,
                                double eta_comm, double eta_state) {
    return evaluate_deficits(s, build_m_bundle(s, policy), policy, eta_comm, eta_state);
}

DeficitRecord evaluate_deficits(const TripartiteState& s, const MOperatorBundle& bundle,
                                const SupportPolicy& policy, double eta_comm, double eta_state) {
    const SaturationResiduals t2 = saturation_residuals(s, bundle, policy);

    DeficitRecord r;
    r.cmi_raw = t2.cmi;
    r.cmi = clamp_cmi(t2.cmi);
    r.dist_mm = t2.dist_mm;
    r.dist_mdm = t2.dist_mdm;
    r.comm_norm = bundle.commutator_trace_norm;
    r.deficit_conj = r.cmi - kInvTwoLn2 * std::max(r.dist_mm * r.dist_mm, r.dist_mdm * r.dist_mdm);
    r.deficit_comm = r.cmi - kInvEightLn2 * r.comm_norm * r.comm_norm;
    r.class_label = classify(s, bundle, eta_comm, eta_state).cls;
    return r;
}

PinskerCheck pinsker_identity_check(const TripartiteState& s, const MOperatorBundle& bundle,
                                    const SupportPolicy& policy) {
    const int da = s.dims[0];
    const int dc = s.dims[2];
    const CMatrix lift_ab = tensor(s.marginal_ab(), identity(dc));
    const CMatrix lift_bc = tensor(identity(da), s.marginal_bc());
    const CMatrix lift_b = tensor(identity(da), tensor(s.marginal_b(), identity(dc)));

    PinskerCheck out;
    out.max_marginal_comm_norm =
        std::max({trace_norm(lift_ab * lift_bc - lift_bc * lift_ab),
                  trace_norm(lift_ab * lift_b - lift_b * lift_ab),
                  trace_norm(lift_bc * lift_b - lift_b * lift_bc)});
    out.commuting = out.max_marginal_comm_norm < 1e-8;
    if (!out.commuting) return out;

    out.applicable = true;
    const double cmi = conditional_mutual_information(s, policy);
    const ExtendedReal rel = relative_entropy(s.rho, bundle.mm_dagger, policy);
    if (rel.infinite) {
        out.support_escape = true;
        return out;
    }
    out.identity_residual = std::abs(cmi - rel.value);
    return out;
}

PinskerCheck pinsker_identity_check(const TripartiteState& s, const SupportPolicy& policy) {
    return pinsker_identity_check(s, build_m_bundle(s, policy), policy);
}

MonotonicityGap monotonicity_gap(const CMatrix& rho, const CMatrix& sigma,
                                 const KrausChannel& phi, const SupportPolicy& policy) {
    if (rho.rows() != phi.input_dim || sigma.rows() != phi.input_dim) {
        throw ShapeError("monotonicity_gap: states must live on the channel input space");
    }
    MonotonicityGap out;
    const ExtendedReal upstream = relative_entropy(rho, sigma, policy);
    if (upstream.infinite) {
        out.support_escape = true;
        out.dpi_gap = ExtendedReal::infinity();
        out.modified_residual = ExtendedReal::infinity();
        return out;
    }
    const ExtendedReal downstream = relative_entropy(phi.apply(rho), phi.apply(sigma), policy);
    if (downstream.infinite) {
        // Numerically possible for borderline supports even though
        // monotonicity forbids it exactly; report as escape.
        out.support_escape = true;
        out.dpi_gap = ExtendedReal::infinity();
        out.modified_residual = ExtendedReal::infinity();
        return out;
    }
    const CMatrix recovered = petz_map(phi, sigma, phi.apply(rho), policy);
    out.recovery_dist = trace_norm(rho - recovered);
    out.dpi_gap = ExtendedReal::finite(upstream.value - downstream.value);
    out.modified_residual = ExtendedReal::finite(out.dpi_gap.value -
                                                 kInvTwoLn2 * out.recovery_dist * out.recovery_dist);
    return out;
}

namespace {

struct FactorState {
    CMatrix l;  // complex lower-triangular factor

    TripartiteState to_state(const std::array<int, 3>& dims) const {
        CMatrix rho = l * l.adjoint();
        rho /= rho.trace().real();
        return make_tripartite_state(std::move(rho), dims);
    }
};

CMatrix random_lower_triangular(RandomStream& rng, int dim) {
    CMatrix l = CMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) l(i, j) = rng.complex_normal();
    }
    return l;
}

}  // namespace

SearchResult search_min_deficit(const SearchConfig& cfg) {
    if (cfg.restarts < 1) throw DomainError("search_min_deficit: restarts must be >= 1");
    if (cfg.budget < cfg.restarts) {
        throw DomainError("search_min_deficit: budget must cover at least one evaluation per restart");
    }
    const int d = cfg.dims[0] * cfg.dims[1] * cfg.dims[2];

    SearchResult result;
    result.best.deficit_conj = std::numeric_limits<double>::infinity();
    long long eval_counter = 0;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        long long restart_budget = cfg.budget / cfg.restarts;
        if (restart < static_cast<int>(cfg.budget % cfg.restarts)) ++restart_budget;
        if (restart_budget < 1) continue;

        RandomStream rng = make_stream(cfg.seed, static_cast<std::uint64_t>(restart));
        FactorState current{random_lower_triangular(rng, d)};

        auto evaluate = [&](const FactorState& f) {
            TripartiteState s = f.to_state(cfg.dims);
            DeficitRecord r = evaluate_deficits(s, cfg.policy, cfg.eta_comm, cfg.eta_state);
            ++eval_counter;
            r.state_id = "search-" + std::to_string(cfg.seed) + "-" + std::to_string(restart) +
                         "-" + std::to_string(eval_counter);
            r.source = "search";
            r.seed = cfg.seed;
            r.index = eval_counter;
            return std::make_pair(std::move(s), std::move(r));
        };

        auto [state, record] = evaluate(current);
        long long used = 1;
        double current_deficit = record.deficit_conj;
        if (record.deficit_conj < result.best.deficit_conj) {
            result.best = record;
            result.best_state = state;
            result.trail.push_back({eval_counter, restart, record.deficit_conj});
        }

        double step = cfg.step_init;
        int stall = 0;
        while (used < restart_budget && step >= cfg.step_floor) {
            const int row = rng.uniform_int(0, d - 1);
            const int col = rng.uniform_int(0, row);
            const Complex delta = step * rng.complex_normal();

            FactorState proposal = current;
            proposal.l(row, col) += delta;
            auto [prop_state, prop_record] = evaluate(proposal);
            ++used;

            if (prop_record.deficit_conj < current_deficit) {
                current = std::move(proposal);
                current_deficit = prop_record.deficit_conj;
                stall = 0;
                if (prop_record.deficit_conj < result.best.deficit_conj) {
                    result.best = prop_record;
                    result.best_state = prop_state;
                    result.trail.push_back({eval_counter, restart, prop_record.deficit_conj});
                }
            } else {
                if (++stall >= cfg.stall_limit) {
                    step *= 0.5;
                    stall = 0;
                }
            }
        }
    }
    result.evaluations = eval_counter;
    return result;
}

DeficitRecord reevaluate_tightened(const TripartiteState& s, const DeficitRecord& original,
                                   double eta_comm, double eta_state) {
    // Marginals, bundle, and norms are all recomputed from the raw matrix.
    TripartiteState fresh = make_tripartite_state(s.rho, s.dims);
    DeficitRecord r = evaluate_deficits(fresh, tightened_support_policy(), eta_comm, eta_state);
    r.state_id = original.state_id + "-tightened";
    r.source = original.source;
    r.seed = original.seed;
    r.index = original.index;
    return r;
}

}  // namespace markovscope

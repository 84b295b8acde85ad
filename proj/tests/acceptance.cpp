// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Thresholds are pinned in code; nothing is deferred to runtime
// configuration.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "markovscope/cli.hpp"
#include "test_support.hpp"

#ifndef MARKOVSCOPE_BIN_PATH
#error "MARKOVSCOPE_BIN_PATH must be defined"
#endif

using namespace markovscope;

namespace {

int g_failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& name, bool pass, const std::string& detail, double secs) {
    std::printf("[%s] criterion %2d  %-24s  %s  (%.1fs)\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

std::filesystem::path work_dir() {
    auto dir = std::filesystem::temp_directory_path() / "markovscope-acceptance";
    std::filesystem::create_directories(dir);
    return dir;
}

// 100 random Markov specs shaped per criterion 2: two blocks, dA = dC = 2,
// square B-sectors of side 1 or 2.
std::vector<TripartiteState> criterion_markov_states() {
    std::vector<TripartiteState> states;
    for (int rep = 0; rep < 100; ++rep) {
        RandomStream rng = make_stream(20260811, static_cast<std::uint64_t>(rep));
        MarkovBlockSpec spec;
        spec.dim_a = spec.dim_c = 2;
        const auto weights = sample_dirichlet_flat(rng, 2);
        for (int k = 0; k < 2; ++k) {
            MarkovBlock blk;
            blk.weight = weights[static_cast<std::size_t>(k)];
            blk.dim_left = blk.dim_right = rng.uniform_int(1, 2);
            blk.rho_left = sample_density_full_rank(rng, 2 * blk.dim_left);
            blk.rho_right = sample_density_full_rank(rng, blk.dim_right * 2);
            spec.blocks.push_back(std::move(blk));
        }
        states.push_back(build_markov_state(spec));
    }
    return states;
}

void criterion_1_ssa() {
    Timer timer;
    double min_cmi = 1e9;
    long long bad = 0;

    SampleConfig small;
    small.dims = {2, 2, 2};
    small.count = 10000;
    small.seed = 1;
    for (long long i = 0; i < small.count; ++i) {
        const double cmi = conditional_mutual_information(sample_state(small, i));
        min_cmi = std::min(min_cmi, cmi);
        if (cmi < -1e-8) ++bad;
    }
    SampleConfig large;
    large.dims = {3, 2, 3};
    large.count = 1000;
    large.seed = 2;
    for (long long i = 0; i < large.count; ++i) {
        const double cmi = conditional_mutual_information(sample_state(large, i));
        min_cmi = std::min(min_cmi, cmi);
        if (cmi < -1e-8) ++bad;
    }
    report(1, "ssa-nonnegativity", bad == 0,
           fmt("min cmi %.3e over 10^4 (2,2,2) + 10^3 (3,2,3) samples, violations %lld", min_cmi,
               bad),
           timer.seconds());
}

void criterion_2_3_markov_saturation(const std::vector<TripartiteState>& markov_states) {
    Timer timer;
    double worst = 0.0;
    for (const auto& s : markov_states) {
        const auto bundle = build_m_bundle(s);
        const auto t2 = saturation_residuals(s, bundle);
        worst = std::max({worst, std::abs(t2.cmi), t2.dist_mm, t2.dist_mdm,
                          check_ruskai(s).residual, check_petz_t(s, default_t_grid())});
    }
    report(2, "markov-saturation", worst < 1e-7,
           fmt("max residual %.3e over 100 markov states (bound 1e-7)", worst), timer.seconds());

    Timer timer3;
    double worst_comm = 0.0;
    for (const auto& s : markov_states) {
        worst_comm = std::max(worst_comm, build_m_bundle(s).commutator_trace_norm);
    }

    double min_residual = 1e9;
    int tested = 0;
    long long index = 0;
    SampleConfig haar;
    haar.dims = {2, 2, 2};
    haar.count = 1000;
    haar.seed = 3;
    while (tested < 100 && index < haar.count) {
        const auto s = sample_state(haar, index++);
        const auto bundle = build_m_bundle(s);
        const auto t2 = saturation_residuals(s, bundle);
        if (t2.cmi <= 0.01) continue;
        ++tested;
        min_residual = std::min({min_residual, t2.cmi, t2.dist_mm, t2.dist_mdm,
                                 check_ruskai(s).residual, check_petz_t(s, default_t_grid())});
    }
    const bool pass = worst_comm < 1e-8 && tested == 100 && min_residual > 1e-3;
    report(3, "commutator-necessity", pass,
           fmt("max markov comm %.3e (<1e-8); min residual %.3e on %d correlated haar states "
               "(>1e-3)",
               worst_comm, min_residual, tested),
           timer3.seconds());
}

void criterion_4_classical() {
    Timer timer;
    SampleConfig cfg;
    cfg.dims = {2, 2, 2};
    cfg.measure = Measure::ClassicalDirichlet;
    cfg.count = 1000;
    cfg.seed = 4;
    double worst_formula = 0.0;
    double worst_comm = 0.0;
    double worst_pinsker = 0.0;
    for (long long i = 0; i < cfg.count; ++i) {
        const auto s = sample_state(cfg, i);
        std::vector<double> p(8);
        for (int k = 0; k < 8; ++k) p[static_cast<std::size_t>(k)] = s.rho(k, k).real();
        const auto bundle = build_m_bundle(s);
        worst_formula = std::max(
            worst_formula,
            mstest::max_entry_diff(bundle.mm_dagger, mstest::oracle_classical_mm_dagger(p, 2, 2, 2)));
        worst_comm = std::max(worst_comm, bundle.commutator_trace_norm);
        const auto pin = pinsker_identity_check(s, bundle);
        const double residual =
            (pin.applicable && !pin.support_escape) ? pin.identity_residual : 1.0;
        worst_pinsker = std::max(worst_pinsker, residual);
    }
    const bool pass = worst_formula < 1e-10 && worst_comm < 1e-10 && worst_pinsker < 1e-8;
    report(4, "classical-formula", pass,
           fmt("max |MM^dag - formula| %.3e (<1e-10), max comm %.3e (<1e-10), max pinsker "
               "residual %.3e (<1e-8)",
               worst_formula, worst_comm, worst_pinsker),
           timer.seconds());
}

void criterion_5_ghz() {
    Timer timer;
    const auto ghz = mstest::ghz_state();
    RunConfig cfg;
    const auto first = analyze_state(ghz, cfg, "ghz");
    const auto second = analyze_state(ghz, cfg, "ghz");

    const bool cmi_ok = std::abs(first.record.cmi - 1.0) < 1e-9;
    const bool class_ok = first.record.class_label == StateClass::D2 ||
                          first.record.class_label == StateClass::D3;
    // The decision is driven by the computed commutator; GHZ's M is diagonal,
    // so the label must be D2 and bit-for-bit reproducible.
    const bool reproducible = first.record.class_label == second.record.class_label &&
                              first.record.cmi == second.record.cmi &&
                              first.record.dist_mm == second.record.dist_mm &&
                              first.record.comm_norm == second.record.comm_norm;
    const bool pass =
        cmi_ok && class_ok && reproducible && first.record.class_label == StateClass::D2;
    report(5, "ghz-anchor", pass,
           fmt("cmi %.12f, comm %.3e, class %s, reproducible %s", first.record.cmi,
               first.record.comm_norm, to_string(first.record.class_label).c_str(),
               reproducible ? "yes" : "no"),
           timer.seconds());
}

void criterion_6_conjecture_scan() {
    Timer timer;
    double min_conj = 1e9;
    double min_comm = 1e9;
    std::size_t candidates = 0;
    std::size_t confirmed = 0;
    long long triangle_failures = 0;
    for (const std::string measure :
         {"hs_induced", "classical_dirichlet", "markov_perturbed"}) {
        RunConfig cfg;
        cfg.dims = {2, 2, 2};
        cfg.count = 10000;
        cfg.seed = 6;
        cfg.measure = measure;
        cfg.noise_scale = 0.01;
        const auto out = run_scan(cfg, 0);
        min_conj = std::min(min_conj, out.summary["min_deficit_conj"].get<double>());
        min_comm = std::min(min_comm, out.summary["min_deficit_comm"].get<double>());
        candidates += out.candidates.size();
        for (const auto& r : out.records) {
            // [M,M^dag] norm is bounded through rho_ABC by the triangle
            // inequality; this chain links the two conjectured bounds.
            if (r.comm_norm > r.dist_mm + r.dist_mdm + 1e-9) ++triangle_failures;
        }
        for (const auto& c : out.candidates) {
            // Two-tier protocol: every candidate carries the tightened
            // re-evaluation and the full-precision state artifact.
            if (!c.artifact.contains("state") || !c.artifact.contains("tightened")) {
                ++confirmed;  // malformed artifact counts as failure below
            } else if (c.confirmed) {
                ++confirmed;
                const auto path = work_dir() / ("confirmed-violation-" +
                                                std::to_string(confirmed) + ".json");
                write_text_file(path.string(), c.artifact.dump(2) + "\n");
            }
        }
    }
    const bool pass =
        min_conj >= -1e-6 && min_comm >= -1e-6 && confirmed == 0 && triangle_failures == 0;
    report(6, "conjecture-scan", pass,
           fmt("min deficit_conj %.3e, min deficit_comm %.3e over 3x10^4 states; candidates %zu, "
               "confirmed %zu, triangle failures %lld",
               min_conj, min_comm, candidates, confirmed, triangle_failures),
           timer.seconds());
}

void criterion_7_petz_fixed_point() {
    Timer timer;
    double worst_random = 0.0;
    RandomStream rng(7);
    int tested = 0;
    while (tested < 100) {
        const int in_dim = rng.uniform_int(2, 4);
        const int out_dim = rng.uniform_int(2, 4);
        const int env_dim = rng.uniform_int(2, 3);
        if (out_dim * env_dim < in_dim) continue;
        ++tested;
        const auto phi = sample_channel(rng, in_dim, out_dim, env_dim);
        const CMatrix sigma = sample_density_hs(rng, in_dim, in_dim);
        worst_random = std::max(worst_random,
                                trace_norm(petz_map(phi, sigma, phi.apply(sigma)) - sigma));
    }
    double worst_identity = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const CMatrix sigma = sample_density_hs(rng, 4, 4);
        const auto id = identity_channel(4);
        worst_identity = std::max(worst_identity,
                                  trace_norm(petz_map(id, sigma, id.apply(sigma)) - sigma));
    }
    const bool pass = worst_random < 1e-8 && worst_identity < 1e-10;
    report(7, "petz-fixed-point", pass,
           fmt("max recovery error %.3e on random channels (<1e-8), %.3e on identity (<1e-10)",
               worst_random, worst_identity),
           timer.seconds());
}

void criterion_8_marginal_recovery() {
    Timer timer;
    SampleConfig cfg;
    cfg.dims = {2, 2, 2};
    cfg.count = 1000;
    cfg.seed = 8;
    double worst = 0.0;
    for (long long i = 0; i < cfg.count; ++i) {
        const auto s = sample_state(cfg, i);
        const auto bundle = build_m_bundle(s);
        worst = std::max(worst, trace_norm(partial_trace(bundle.mm_dagger, s.dim_list(), {0, 1}) -
                                           s.marginal_ab()));
        worst = std::max(worst, trace_norm(partial_trace(bundle.m_dagger_m, s.dim_list(), {1, 2}) -
                                           s.marginal_bc()));
    }
    report(8, "marginal-recovery", worst < 1e-8,
           fmt("max trace-norm error %.3e over 10^3 states (bound 1e-8)", worst), timer.seconds());
}

void criterion_9_lie_trotter() {
    Timer timer;
    int plain_improves = 0;
    int symmetric_wins = 0;
    const int trials = 50;
    for (int rep = 0; rep < trials; ++rep) {
        RandomStream rng = make_stream(909, static_cast<std::uint64_t>(rep));
        const CMatrix a = sample_gue_hermitian(rng, 4);
        const CMatrix b = sample_gue_hermitian(rng, 4);
        const CMatrix exact = matrix_exp(a + b);
        const double plain8 = mstest::max_entry_diff(lie_trotter(a, b, 8, false), exact);
        const double plain64 = mstest::max_entry_diff(lie_trotter(a, b, 64, false), exact);
        const double sym64 = mstest::max_entry_diff(lie_trotter(a, b, 64, true), exact);
        if (plain64 < plain8) ++plain_improves;
        if (sym64 <= plain64) ++symmetric_wins;
    }
    const bool pass = plain_improves >= 45 && symmetric_wins >= 45;
    report(9, "lie-trotter", pass,
           fmt("n=64 beats n=8 in %d/50, symmetric beats plain in %d/50 (need >=45)",
               plain_improves, symmetric_wins),
           timer.seconds());
}

void criterion_10_determinism() {
    Timer timer;
    const auto dir = work_dir();
    const std::string prefix = (dir / "det").string();

    RunConfig cfg;
    cfg.dims = {2, 2, 2};
    cfg.count = 500;
    cfg.seed = 10;
    cfg.measure = "hs_induced";
    cfg.out = prefix;
    const auto serial_a = run_scan(cfg, 1);
    const auto serial_b = run_scan(cfg, 1);
    const auto parallel = run_scan(cfg, 8);
    const bool library_ok =
        serial_a.jsonl == serial_b.jsonl && serial_a.jsonl == parallel.jsonl &&
        serial_a.csv == parallel.csv;

    // Same through the binary with identical config; only the
    // MARKOVSCOPE_THREADS cap changes between runs.
    const std::string base_cmd = std::string(MARKOVSCOPE_BIN_PATH) +
                                 " scan --dims 2,2,2 --count 500 --seed 10 --measure hs_induced" +
                                 " --out " + prefix + " >/dev/null";
    const int rc1 = std::system(("MARKOVSCOPE_THREADS=1 " + base_cmd).c_str());
    bool cli_ok = rc1 == 0;
    std::string serial_jsonl, serial_csv;
    if (cli_ok) {
        serial_jsonl = read_text_file(prefix + ".jsonl");
        serial_csv = read_text_file(prefix + ".csv");
        const int rc2 = std::system(("MARKOVSCOPE_THREADS=8 " + base_cmd).c_str());
        cli_ok = rc2 == 0 && read_text_file(prefix + ".jsonl") == serial_jsonl &&
                 read_text_file(prefix + ".csv") == serial_csv;
        cli_ok = cli_ok && serial_jsonl == serial_a.jsonl;
    }
    report(10, "scan-determinism", library_ok && cli_ok,
           fmt("library serial==repeat==8-thread: %s; cli env-capped serial==parallel: %s",
               library_ok ? "yes" : "no", cli_ok ? "yes" : "no"),
           timer.seconds());
}

}  // namespace

int main() {
    std::printf("markovscope acceptance suite\n");
    Timer total;

    criterion_1_ssa();
    const auto markov_states = criterion_markov_states();
    criterion_2_3_markov_saturation(markov_states);
    criterion_4_classical();
    criterion_5_ghz();
    criterion_6_conjecture_scan();
    criterion_7_petz_fixed_point();
    criterion_8_marginal_recovery();
    criterion_9_lie_trotter();
    criterion_10_determinism();

    std::printf("%d/10 criteria passed (%.1fs total)\n", 10 - g_failures, total.seconds());
    return g_failures == 0 ? 0 : 1;
}

#include "markovscope/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

namespace markovscope {

namespace {

std::string now_iso8601() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Shortest decimal that round-trips, same policy as the JSON writer.
std::string number_str(double x) {
    return json(x).dump();
}

void require_valid_dims(const std::array<int, 3>& dims) {
    for (int d : dims) {
        if (d < 1) throw ValidationError("dims must be positive integers");
    }
    const long long total = 1LL * dims[0] * dims[1] * dims[2];
    if (total > kMaxDim) {
        throw ValidationError("total dimension " + std::to_string(total) + " exceeds " +
                              std::to_string(kMaxDim));
    }
}

Measure require_measure(const std::string& name) {
    const auto m = measure_from_string(name);
    if (!m) throw ValidationError("unknown measure \"" + name + "\"");
    return *m;
}

}  // namespace

ordered_json run_config_to_json(const RunConfig& cfg) {
    ordered_json j;
    j["dims"] = cfg.dims;
    j["seed"] = cfg.seed;
    j["count"] = cfg.count;
    j["measure"] = cfg.measure;
    j["env_dim"] = cfg.env_dim;
    j["noise_scale"] = cfg.noise_scale;
    j["blocks"] = cfg.blocks;
    j["t_grid"] = cfg.t_grid;
    j["tol_support"] = cfg.tol_support;
    j["tol_check"] = cfg.tol_check;
    j["eta_comm"] = cfg.eta_comm;
    j["eta_state"] = cfg.eta_state;
    j["violation_tol"] = cfg.violation_tol;
    j["budget"] = cfg.budget;
    j["restarts"] = cfg.restarts;
    j["step_init"] = cfg.step_init;
    j["stall_limit"] = cfg.stall_limit;
    j["step_floor"] = cfg.step_floor;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("config: expected a JSON object");
    RunConfig cfg;
    try {
        if (j.contains("dims")) {
            const auto v = j["dims"].get<std::vector<int>>();
            if (v.size() != 3) throw ValidationError("config: dims must have three entries");
            cfg.dims = {v[0], v[1], v[2]};
        }
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("count")) cfg.count = j["count"].get<long long>();
        if (j.contains("measure")) cfg.measure = j["measure"].get<std::string>();
        if (j.contains("env_dim")) cfg.env_dim = j["env_dim"].get<int>();
        if (j.contains("noise_scale")) cfg.noise_scale = j["noise_scale"].get<double>();
        if (j.contains("blocks")) cfg.blocks = j["blocks"].get<int>();
        if (j.contains("t_grid")) cfg.t_grid = j["t_grid"].get<std::vector<double>>();
        if (j.contains("tol_support")) cfg.tol_support = j["tol_support"].get<double>();
        if (j.contains("tol_check")) cfg.tol_check = j["tol_check"].get<double>();
        if (j.contains("eta_comm")) cfg.eta_comm = j["eta_comm"].get<double>();
        if (j.contains("eta_state")) cfg.eta_state = j["eta_state"].get<double>();
        if (j.contains("violation_tol")) cfg.violation_tol = j["violation_tol"].get<double>();
        if (j.contains("budget")) cfg.budget = j["budget"].get<long long>();
        if (j.contains("restarts")) cfg.restarts = j["restarts"].get<int>();
        if (j.contains("step_init")) cfg.step_init = j["step_init"].get<double>();
        if (j.contains("stall_limit")) cfg.stall_limit = j["stall_limit"].get<int>();
        if (j.contains("step_floor")) cfg.step_floor = j["step_floor"].get<double>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    for (double tol : {cfg.tol_support, cfg.tol_check, cfg.eta_comm, cfg.eta_state,
                       cfg.violation_tol, cfg.step_init, cfg.step_floor}) {
        if (!(tol > 0.0)) throw ValidationError("config: tolerances must be positive");
    }
    if (cfg.tol_support >= 1.0) throw ValidationError("config: tol_support must be below 1");
    if (cfg.noise_scale < 0.0) throw ValidationError("config: noise_scale must be >= 0");
    if (cfg.env_dim < 0) throw ValidationError("config: env_dim must be >= 0 (0 = default)");
    return cfg;
}

SupportPolicy support_policy(const RunConfig& cfg) {
    return SupportPolicy{cfg.tol_support};
}

SampleConfig sample_config(const RunConfig& cfg) {
    if (cfg.noise_scale < 0.0) throw ValidationError("noise_scale must be >= 0");
    if (cfg.env_dim < 0) throw ValidationError("env_dim must be >= 0 (0 = default)");
    SampleConfig sc;
    sc.dims = cfg.dims;
    sc.measure = require_measure(cfg.measure);
    sc.env_dim = cfg.env_dim;
    sc.noise_scale = cfg.noise_scale;
    sc.count = cfg.count;
    sc.seed = cfg.seed;
    return sc;
}

SearchConfig search_config(const RunConfig& cfg) {
    SearchConfig sc;
    sc.dims = cfg.dims;
    sc.budget = cfg.budget;
    sc.restarts = cfg.restarts;
    sc.seed = cfg.seed;
    sc.step_init = cfg.step_init;
    sc.stall_limit = cfg.stall_limit;
    sc.step_floor = cfg.step_floor;
    sc.eta_comm = cfg.eta_comm;
    sc.eta_state = cfg.eta_state;
    sc.policy = support_policy(cfg);
    return sc;
}

int resolve_thread_count(int requested, long long count) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("MARKOVSCOPE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    if (count < n) n = static_cast<int>(count);
    return std::max(n, 1);
}

std::string deficit_csv_header() {
    return "state_id,cmi,dist_mm,dist_mdm,comm_norm,deficit_conj,deficit_comm,class_label\n";
}

std::string deficit_csv_row(const DeficitRecord& r) {
    std::string row = r.state_id;
    for (double x : {r.cmi, r.dist_mm, r.dist_mdm, r.comm_norm, r.deficit_conj, r.deficit_comm}) {
        row += "," + number_str(x);
    }
    row += "," + to_string(r.class_label) + "\n";
    return row;
}

ordered_json deficit_record_to_json(const DeficitRecord& r) {
    ordered_json j;
    j["state_id"] = r.state_id;
    j["source"] = r.source;
    j["seed"] = r.seed;
    j["index"] = r.index;
    j["cmi"] = r.cmi;
    j["cmi_raw"] = r.cmi_raw;
    j["dist_mm"] = r.dist_mm;
    j["dist_mdm"] = r.dist_mdm;
    j["comm_norm"] = r.comm_norm;
    j["deficit_conj"] = r.deficit_conj;
    j["deficit_comm"] = r.deficit_comm;
    j["class_label"] = to_string(r.class_label);
    return j;
}

AnalysisReport analyze_state(const TripartiteState& s, const RunConfig& cfg,
                             const std::string& state_id) {
    require_valid_dims(s.dims);
    const SupportPolicy policy = support_policy(cfg);

    AnalysisReport out;
    const MOperatorBundle bundle = build_m_bundle(s, policy);
    out.record = evaluate_deficits(s, bundle, policy, cfg.eta_comm, cfg.eta_state);
    out.record.state_id = state_id;
    out.record.source = "analyze";
    out.ruskai = check_ruskai(s, policy);
    out.petz_residual = check_petz_t(s, cfg.t_grid, policy);
    out.pinsker = pinsker_identity_check(s, bundle, policy);

    ordered_json j;
    j["kind"] = "analysis_report";
    j["format_version"] = kFormatVersion;
    j["generated_at"] = now_iso8601();
    j["config"] = run_config_to_json(cfg);
    j["state_id"] = state_id;
    j["dims"] = s.dims;
    j["entropies_bits"] = {{"abc", von_neumann_entropy(s.rho, policy)},
                           {"ab", von_neumann_entropy(s.marginal_ab(), policy)},
                           {"bc", von_neumann_entropy(s.marginal_bc(), policy)},
                           {"b", von_neumann_entropy(s.marginal_b(), policy)}};
    j["cmi_bits"] = out.record.cmi;
    j["cmi_raw_bits"] = out.record.cmi_raw;
    j["dist_mm"] = out.record.dist_mm;
    j["dist_mdm"] = out.record.dist_mdm;
    j["comm_norm"] = out.record.comm_norm;
    j["deficit_conj"] = out.record.deficit_conj;
    j["deficit_comm"] = out.record.deficit_comm;
    j["class_label"] = to_string(out.record.class_label);
    j["ruskai"] = {{"residual", out.ruskai.residual},
                   {"degraded_support", out.ruskai.degraded_support},
                   {"saturated", out.ruskai.residual < cfg.tol_check}};
    j["petz"] = {{"residual", out.petz_residual},
                 {"t_grid", cfg.t_grid},
                 {"saturated", out.petz_residual < cfg.tol_check}};
    j["saturation"] = {{"cmi", out.record.cmi},
                     {"dist_mm", out.record.dist_mm},
                     {"dist_mdm", out.record.dist_mdm},
                     {"saturated", out.record.cmi < cfg.tol_check &&
                                       out.record.dist_mm < cfg.tol_check &&
                                       out.record.dist_mdm < cfg.tol_check}};
    ordered_json jp;
    jp["commuting"] = out.pinsker.commuting;
    jp["applicable"] = out.pinsker.applicable;
    jp["support_escape"] = out.pinsker.support_escape;
    jp["max_marginal_comm_norm"] = out.pinsker.max_marginal_comm_norm;
    if (out.pinsker.applicable && !out.pinsker.support_escape) {
        jp["identity_residual"] = out.pinsker.identity_residual;
    } else {
        jp["identity_residual"] = nullptr;
    }
    j["pinsker"] = std::move(jp);
    j["thresholds"] = {{"tol_support", cfg.tol_support},
                       {"tol_check", cfg.tol_check},
                       {"eta_comm", cfg.eta_comm},
                       {"eta_state", cfg.eta_state},
                       {"violation_tol", cfg.violation_tol}};
    out.report = std::move(j);
    return out;
}

namespace {

ViolationCandidate make_candidate(const TripartiteState& s, const DeficitRecord& original,
                                  const RunConfig& cfg) {
    ViolationCandidate c;
    c.index = original.index;
    c.original = original;
    c.tightened = reevaluate_tightened(s, original, cfg.eta_comm, cfg.eta_state);
    c.confirmed = c.tightened.deficit_conj < -cfg.violation_tol ||
                  c.tightened.deficit_comm < -cfg.violation_tol;
    c.artifact["kind"] = "violation_candidate";
    c.artifact["format_version"] = kFormatVersion;
    c.artifact["config"] = run_config_to_json(cfg);
    c.artifact["original"] = deficit_record_to_json(c.original);
    c.artifact["tightened"] = deficit_record_to_json(c.tightened);
    c.artifact["confirmed"] = c.confirmed;
    c.artifact["state"] = state_to_json(s);
    return c;
}

}  // namespace

ScanOutput run_scan(const RunConfig& cfg, int threads) {
    require_valid_dims(cfg.dims);
    if (cfg.count < 1) throw ValidationError("scan: count must be >= 1");
    const SampleConfig sc = sample_config(cfg);
    const SupportPolicy policy = support_policy(cfg);

    ScanOutput out;
    out.threads_used = resolve_thread_count(threads, cfg.count);
    out.records.resize(static_cast<std::size_t>(cfg.count));

    std::atomic<long long> cursor{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto worker = [&]() {
        try {
            while (true) {
                const long long i = cursor.fetch_add(1);
                if (i >= cfg.count) break;
                const TripartiteState s = sample_state(sc, i);
                DeficitRecord r = evaluate_deficits(s, policy, cfg.eta_comm, cfg.eta_state);
                r.state_id = cfg.measure + "-" + std::to_string(cfg.seed) + "-" + std::to_string(i);
                r.source = cfg.measure;
                r.seed = cfg.seed;
                r.index = i;
                out.records[static_cast<std::size_t>(i)] = std::move(r);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (out.threads_used <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(out.threads_used));
        for (int t = 0; t < out.threads_used; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Two-tier violation protocol: flagged records are re-sampled and
    // re-evaluated from scratch at the tightened cutoff before being reported.
    for (const auto& r : out.records) {
        if (r.deficit_conj < -cfg.violation_tol || r.deficit_comm < -cfg.violation_tol) {
            const TripartiteState s = sample_state(sc, r.index);
            out.candidates.push_back(make_candidate(s, r, cfg));
        }
    }

    ordered_json header;
    header["kind"] = "scan_header";
    header["format_version"] = kFormatVersion;
    header["config"] = run_config_to_json(cfg);
    out.jsonl = header.dump() + "\n";
    out.csv = deficit_csv_header();

    double min_conj = std::numeric_limits<double>::infinity();
    double min_comm = std::numeric_limits<double>::infinity();
    std::array<long long, 3> histogram{0, 0, 0};
    for (const auto& r : out.records) {
        out.jsonl += deficit_record_to_json(r).dump() + "\n";
        out.csv += deficit_csv_row(r);
        min_conj = std::min(min_conj, r.deficit_conj);
        min_comm = std::min(min_comm, r.deficit_comm);
        ++histogram[static_cast<std::size_t>(r.class_label)];
    }

    long long confirmed = 0;
    for (const auto& c : out.candidates) confirmed += c.confirmed ? 1 : 0;

    ordered_json summary;
    summary["kind"] = "scan_summary";
    summary["format_version"] = kFormatVersion;
    summary["generated_at"] = now_iso8601();
    summary["config"] = run_config_to_json(cfg);
    summary["count"] = cfg.count;
    summary["threads"] = out.threads_used;
    summary["min_deficit_conj"] = min_conj;
    summary["min_deficit_comm"] = min_comm;
    summary["class_histogram"] = {{"D1", histogram[0]}, {"D2", histogram[1]}, {"D3", histogram[2]}};
    summary["violation_candidates"] = out.candidates.size();
    summary["confirmed_violations"] = confirmed;
    out.summary = std::move(summary);
    return out;
}

SearchOutput run_search(const RunConfig& cfg) {
    require_valid_dims(cfg.dims);
    SearchOutput out;
    out.result = search_min_deficit(search_config(cfg));

    if (out.result.best.deficit_conj < -cfg.violation_tol ||
        out.result.best.deficit_comm < -cfg.violation_tol) {
        out.candidates.push_back(make_candidate(out.result.best_state, out.result.best, cfg));
    }

    ordered_json header;
    header["kind"] = "search_trail_header";
    header["format_version"] = kFormatVersion;
    header["config"] = run_config_to_json(cfg);
    out.trail_jsonl = header.dump() + "\n";
    for (const auto& p : out.result.trail) {
        ordered_json line;
        line["evaluation"] = p.evaluation;
        line["restart"] = p.restart;
        line["deficit_conj"] = p.deficit_conj;
        out.trail_jsonl += line.dump() + "\n";
    }

    ordered_json j;
    j["kind"] = "search_report";
    j["format_version"] = kFormatVersion;
    j["generated_at"] = now_iso8601();
    j["config"] = run_config_to_json(cfg);
    j["evaluations"] = out.result.evaluations;
    j["improvements"] = out.result.trail.size();
    j["best"] = deficit_record_to_json(out.result.best);
    j["violation_candidate"] = !out.candidates.empty();
    out.best_report = std::move(j);
    return out;
}

namespace {

int cmd_analyze(const RunConfig& cfg, const std::string& state_path) {
    const TripartiteState s = read_state_file(state_path);
    const AnalysisReport rep = analyze_state(s, cfg, state_path);
    std::cout << rep.report.dump(2) << "\n";
    if (!cfg.out.empty()) {
        if (cfg.format == "csv") {
            write_text_file(cfg.out, deficit_csv_header() + deficit_csv_row(rep.record));
        } else if (cfg.format == "jsonl") {
            write_text_file(cfg.out, deficit_record_to_json(rep.record).dump() + "\n");
        } else {
            write_text_file(cfg.out, rep.report.dump(2) + "\n");
        }
    }
    return kExitOk;
}

int cmd_generate(const RunConfig& cfg, const std::string& kind, const std::string& spec_path,
                 const std::string& emit_spec_path) {
    require_valid_dims(cfg.dims);
    if (cfg.out.empty()) throw ValidationError("generate: --out path is required");

    TripartiteState s;
    if (kind == "markov") {
        MarkovBlockSpec spec;
        if (!spec_path.empty()) {
            spec = read_markov_spec_file(spec_path);
        } else {
            RandomStream rng = make_stream(cfg.seed, 0);
            spec = sample_markov_spec(rng, cfg.dims, cfg.blocks);
        }
        if (!emit_spec_path.empty()) write_markov_spec_file(emit_spec_path, spec);
        s = build_markov_state(spec);
    } else {
        SampleConfig sc = sample_config(cfg);
        sc.count = 1;
        sc.measure = (kind == "classical") ? Measure::ClassicalDirichlet : Measure::HsInduced;
        if (kind == "classical") sc.noise_scale = 0.0;
        s = sample_state(sc, 0);
    }
    write_state_file(cfg.out, s);

    ordered_json j;
    j["kind"] = "generate_report";
    j["format_version"] = kFormatVersion;
    j["generated_at"] = now_iso8601();
    j["config"] = run_config_to_json(cfg);
    j["state_kind"] = kind;
    j["dims"] = s.dims;
    j["seed"] = cfg.seed;
    j["written"] = cfg.out;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_scan(const RunConfig& cfg) {
    ScanOutput out = run_scan(cfg, 0);
    const std::string base = cfg.out.empty() ? "scan" : cfg.out;
    write_text_file(base + ".jsonl", out.jsonl);
    write_text_file(base + ".csv", out.csv);
    std::vector<std::string> candidate_paths;
    for (std::size_t i = 0; i < out.candidates.size(); ++i) {
        std::string path = base + ".candidate-" + std::to_string(i) + ".json";
        write_text_file(path, out.candidates[i].artifact.dump(2) + "\n");
        candidate_paths.push_back(std::move(path));
    }
    out.summary["outputs"] = {{"jsonl", base + ".jsonl"},
                              {"csv", base + ".csv"},
                              {"candidates", candidate_paths}};
    std::cout << out.summary.dump(2) << "\n";
    return kExitOk;
}

int cmd_search(const RunConfig& cfg) {
    SearchOutput out = run_search(cfg);
    const std::string base = cfg.out.empty() ? "search" : cfg.out;
    write_text_file(base + ".best.json", out.best_report.dump(2) + "\n");
    write_text_file(base + ".trail.jsonl", out.trail_jsonl);
    std::vector<std::string> candidate_paths;
    for (std::size_t i = 0; i < out.candidates.size(); ++i) {
        std::string path = base + ".candidate-" + std::to_string(i) + ".json";
        write_text_file(path, out.candidates[i].artifact.dump(2) + "\n");
        candidate_paths.push_back(std::move(path));
    }
    out.best_report["outputs"] = {{"best", base + ".best.json"},
                                  {"trail", base + ".trail.jsonl"},
                                  {"candidates", candidate_paths}};
    std::cout << out.best_report.dump(2) << "\n";
    return kExitOk;
}

int cmd_check(const RunConfig& cfg, const std::string& checker, const std::string& state_path) {
    const TripartiteState s = read_state_file(state_path);
    const SupportPolicy policy = support_policy(cfg);

    ordered_json j;
    j["kind"] = "check_report";
    j["format_version"] = kFormatVersion;
    j["generated_at"] = now_iso8601();
    j["config"] = run_config_to_json(cfg);
    j["checker"] = checker;
    j["state"] = state_path;
    if (checker == "ruskai") {
        const RuskaiResult r = check_ruskai(s, policy);
        j["residual"] = r.residual;
        j["degraded_support"] = r.degraded_support;
        j["saturated"] = r.residual < cfg.tol_check;
    } else if (checker == "petz") {
        const double r = check_petz_t(s, cfg.t_grid, policy);
        j["residual"] = r;
        j["t_grid"] = cfg.t_grid;
        j["saturated"] = r < cfg.tol_check;
    } else if (checker == "saturation") {
        const MOperatorBundle bundle = build_m_bundle(s, policy);
        const SaturationResiduals r = saturation_residuals(s, bundle, policy);
        j["cmi"] = r.cmi;
        j["dist_mm"] = r.dist_mm;
        j["dist_mdm"] = r.dist_mdm;
        j["comm_norm"] = bundle.commutator_trace_norm;
        j["saturated"] =
            r.cmi < cfg.tol_check && r.dist_mm < cfg.tol_check && r.dist_mdm < cfg.tol_check;
    } else if (checker == "pinsker") {
        const PinskerCheck p = pinsker_identity_check(s, policy);
        j["commuting"] = p.commuting;
        j["applicable"] = p.applicable;
        j["support_escape"] = p.support_escape;
        j["max_marginal_comm_norm"] = p.max_marginal_comm_norm;
        if (p.applicable && !p.support_escape) {
            j["identity_residual"] = p.identity_residual;
        } else {
            j["identity_residual"] = nullptr;
        }
    } else {
        throw ValidationError("unknown checker \"" + checker + "\"");
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string token = text.substr(pos, comma - pos);
        if (!token.empty()) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(token, &used));
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw ValidationError(std::string(what) + ": cannot parse \"" + token + "\"");
            }
        }
        pos = comma + 1;
    }
    return out;
}

std::array<int, 3> parse_dims(const std::string& text) {
    const auto values = parse_double_list(text, "--dims");
    if (values.size() != 3) {
        throw ValidationError("--dims needs exactly three entries, got " +
                              std::to_string(values.size()));
    }
    std::array<int, 3> dims{};
    for (int i = 0; i < 3; ++i) {
        if (values[i] != static_cast<int>(values[i])) {
            throw ValidationError("--dims entries must be integers");
        }
        dims[i] = static_cast<int>(values[i]);
    }
    return dims;
}

void add_common_options(CLI::App* sub, RunConfig& cfg, std::string& dims_opt,
                        std::string& t_grid_opt, std::string& config_path) {
    sub->add_option("--config", config_path, "JSON config file with the same keys; flags override");
    sub->add_option("--dims", dims_opt, "subsystem dimensions dA,dB,dC");
    sub->add_option("--seed", cfg.seed, "64-bit RNG seed");
    sub->add_option("--count", cfg.count, "number of samples");
    sub->add_option("--measure", cfg.measure, "sampling measure")
        ->check(CLI::IsMember({"hs_induced", "classical_dirichlet", "markov_perturbed"}));
    sub->add_option("--env-dim", cfg.env_dim, "environment dimension (0 = dA*dB*dC)");
    sub->add_option("--noise-scale", cfg.noise_scale, "perturbation trace norm");
    sub->add_option("--t-grid", t_grid_opt, "imaginary-power grid, e.g. --t-grid=-2,-1,1,2");
    sub->add_option("--tol-support", cfg.tol_support, "relative support cutoff");
    sub->add_option("--tol-check", cfg.tol_check, "checker saturation threshold");
    sub->add_option("--eta-comm", cfg.eta_comm, "D3 commutator threshold");
    sub->add_option("--eta-state", cfg.eta_state, "D1/D2 reconstruction threshold");
    sub->add_option("--out", cfg.out, "output path (scan/search: path prefix)");
    sub->add_option("--format", cfg.format, "extra analyze output format")
        ->check(CLI::IsMember({"json", "csv", "jsonl"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    // Pass 1: locate --config so file values become defaults for the flags.
    RunConfig cfg;
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) {
                cfg = run_config_from_json(parse_json_text(read_text_file(argv[i + 1]), argv[i + 1]));
            } else if (arg.rfind("--config=", 0) == 0) {
                const std::string path = arg.substr(9);
                cfg = run_config_from_json(parse_json_text(read_text_file(path), path));
            }
        }

        CLI::App app{"conditional mutual information, Markov structure checkers, and "
                     "trace-norm conjecture scans for tripartite quantum states"};
        app.require_subcommand(1);

        std::string dims_opt;
        std::string t_grid_opt;
        std::string config_path;
        std::string state_path;
        std::string kind;
        std::string checker;
        std::string spec_path;
        std::string emit_spec_path;

        auto* analyze = app.add_subcommand("analyze", "full report for one state file");
        add_common_options(analyze, cfg, dims_opt, t_grid_opt, config_path);
        analyze->add_option("state", state_path, "state JSON file")->required();

        auto* generate = app.add_subcommand("generate", "write a state file");
        add_common_options(generate, cfg, dims_opt, t_grid_opt, config_path);
        generate->add_option("kind", kind, "state family")
            ->required()
            ->check(CLI::IsMember({"markov", "classical", "random"}));
        generate->add_option("--blocks", cfg.blocks, "markov: number of blocks (0 = random)");
        generate->add_option("--spec", spec_path, "markov: explicit block-spec JSON file");
        generate->add_option("--emit-spec", emit_spec_path, "markov: also write the sampled spec");

        auto* scan = app.add_subcommand("scan", "randomized conjecture scan -> JSONL + CSV");
        add_common_options(scan, cfg, dims_opt, t_grid_opt, config_path);

        auto* search = app.add_subcommand("search", "deficit-minimization search");
        add_common_options(search, cfg, dims_opt, t_grid_opt, config_path);
        search->add_option("--budget", cfg.budget, "total state evaluations");
        search->add_option("--restarts", cfg.restarts, "independent restarts");

        auto* check = app.add_subcommand("check", "run a single named checker");
        add_common_options(check, cfg, dims_opt, t_grid_opt, config_path);
        check->add_option("checker", checker, "ruskai | petz | saturation | pinsker")->required();
        check->add_option("state", state_path, "state JSON file")->required();

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? kExitOk : kExitParse;
        }

        if (!dims_opt.empty()) cfg.dims = parse_dims(dims_opt);
        if (!t_grid_opt.empty()) cfg.t_grid = parse_double_list(t_grid_opt, "--t-grid");

        if (analyze->parsed()) return cmd_analyze(cfg, state_path);
        if (generate->parsed()) return cmd_generate(cfg, kind, spec_path, emit_spec_path);
        if (scan->parsed()) return cmd_scan(cfg);
        if (search->parsed()) return cmd_search(cfg);
        if (check->parsed()) return cmd_check(cfg, checker, state_path);
        return kExitParse;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ShapeError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const CapacityError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace markovscope

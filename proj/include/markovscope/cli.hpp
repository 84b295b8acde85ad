#pragma once

#include <string>
#include <vector>

#include "markovscope/conjecture.hpp"
#include "markovscope/state_io.hpp"

namespace markovscope {

// Exit-code contract: 0 success, 2 parse, 3 validation, 4 I/O.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitIo = 4;

// Full tolerance/sampler/output surface shared by every subcommand, so one
// threshold set governs all checkers in a run. Serializable and
// round-trippable; a report always embeds the config that produced it.
struct RunConfig {
    std::array<int, 3> dims{2, 2, 2};
    std::uint64_t seed = 0;
    long long count = 1000;
    std::string measure = "hs_induced";
    int env_dim = 0;           // 0 means dA*dB*dC
    double noise_scale = 0.01; // markov_perturbed
    int blocks = 2;            // generate kind=markov
    std::vector<double> t_grid = default_t_grid();

    double tol_support = 0x1p-40;
    double tol_check = 1e-7;       // residual level reported as saturated
    double eta_comm = 1e-6;
    double eta_state = 1e-6;
    double violation_tol = 1e-6;   // deficits below -violation_tol become candidates

    long long budget = 10000;
    int restarts = 10;
    double step_init = 0.1;
    int stall_limit = 20;
    double step_floor = 1e-7;

    std::string out;
    std::string format = "json";  // json | csv | jsonl
};

ordered_json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const json& j);

SupportPolicy support_policy(const RunConfig& cfg);
SampleConfig sample_config(const RunConfig& cfg);
SearchConfig search_config(const RunConfig& cfg);

// Worker count for scans: explicit request, else MARKOVSCOPE_THREADS, else
// hardware concurrency; never more than the sample count.
int resolve_thread_count(int requested, long long count);

struct AnalysisReport {
    DeficitRecord record;
    RuskaiResult ruskai;
    double petz_residual = 0.0;
    PinskerCheck pinsker;
    ordered_json report;  // the full self-describing JSON document
};

AnalysisReport analyze_state(const TripartiteState& s, const RunConfig& cfg,
                             const std::string& state_id = "analyze");

struct ViolationCandidate {
    long long index = 0;
    DeficitRecord original;
    DeficitRecord tightened;
    bool confirmed = false;
    ordered_json artifact;  // full-precision state plus both records
};

struct ScanOutput {
    std::vector<DeficitRecord> records;
    std::vector<ViolationCandidate> candidates;
    std::string jsonl;  // header line + one record per line; timestamp-free
    std::string csv;    // fixed 8-column summary table
    ordered_json summary;
    int threads_used = 1;
};

// Deterministic in (cfg, threads irrelevant): per-index RNG streams, records
// merged in index order by a single writer.
ScanOutput run_scan(const RunConfig& cfg, int threads);

struct SearchOutput {
    SearchResult result;
    ordered_json best_report;
    std::string trail_jsonl;
    std::vector<ViolationCandidate> candidates;
};

SearchOutput run_search(const RunConfig& cfg);

// CSV row/record serialization shared by scan, search, and analyze.
std::string deficit_csv_header();
std::string deficit_csv_row(const DeficitRecord& r);
ordered_json deficit_record_to_json(const DeficitRecord& r);

// Entry point used by the markovscope binary: parses argv (subcommands
// analyze/generate/scan/search/check), runs, returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace markovscope

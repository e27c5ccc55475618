#ifndef JSSCL_HARNESS_HPP
#define JSSCL_HARNESS_HPP

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "jsscl/agent.hpp"
#include "jsscl/curriculum.hpp"
#include "jsscl/exact.hpp"
#include "jsscl/instance.hpp"

namespace jsscl {

struct TrainConfig {
    std::filesystem::path dataset_path;
    std::filesystem::path curriculum_path;
    std::filesystem::path test_path;
    std::filesystem::path test_optima_path;
    int validation_every = 2000;
    AgentConfig agent;
    int eval_workers = 1;
    std::filesystem::path out_dir = ".";

    void validate() const;
};

struct EvalRecord {
    long long instances_seen = 0;
    double mean_gap = 0.0;      // over test instances with proved optima
    double mean_makespan = 0.0; // over all test instances
    int excluded = 0;           // test instances without a proved optimum
};

struct RunManifest {
    std::string run_id;
    std::string status; // "complete" or "nan_abort"
    std::string curriculum_first;
    std::string curriculum_second;
    std::uint64_t dataset_seed = 0;
    std::uint64_t init_seed = 0;
    nlohmann::ordered_json config;
    std::vector<EvalRecord> evals;
    std::uint64_t updates = 0;
    std::string checkpoint_file;
    std::string evals_file;
    double wall_clock_s = 0.0;
    std::string code_version;
};

// Identifier derived from content hashes and constants only (never from
// filesystem paths), so reruns from different directories collide by design.
std::string compute_run_id(const std::string& dataset_hash, const std::string& curriculum_hash,
                           const std::string& test_hash, int validation_every,
                           const AgentConfig& agent);

// One full training run: iterates the curriculum order once, one sampled
// episode per instance, PPO update per batch, greedy evaluation on the test
// set every validation_every instances. Skips (returns the stored manifest)
// when a complete run with the same run_id already sits in out_dir.
RunManifest train_run(const TrainConfig& cfg);

// Manifest JSON with volatile fields (wall clock) removed; byte-stable
// across reruns of the same config.
nlohmann::ordered_json manifest_core(const nlohmann::ordered_json& manifest_json);

RunManifest read_manifest(const std::filesystem::path& path);
std::vector<RunManifest> load_runs(const std::filesystem::path& dir);

std::string evals_csv(const RunManifest& manifest);

struct GridConfig {
    std::vector<std::filesystem::path> dataset_paths;
    std::filesystem::path test_path;
    std::filesystem::path test_optima_path;
    int validation_every = 2000;
    AgentConfig agent;
    int baseline_runs = 3;
    std::filesystem::path out_dir = ".";
    int parallel_runs = 1;
    int eval_workers = 1;
};

// The full protocol: per dataset, DTS -> 16 curricula + shuffled baselines,
// one training run each. Completed runs are skipped by run_id, so the grid
// is resumable and a second invocation is a no-op.
std::vector<RunManifest> experiment_grid(const GridConfig& cfg);

struct DipPoint {
    int index = 0;
    long long instances_seen = 0;
    double gap = 0.0;
};

// Earliest record whose gap is <= both existing neighbors; on a strictly
// decreasing curve that is the last record. Requires >= 3 records.
DipPoint detect_first_dip(const std::vector<EvalRecord>& curve);

// gap(halfway + one validation interval) - gap(halfway); negative = drop.
// The interval is taken from the curve's own spacing.
double second_half_impact(const std::vector<EvalRecord>& curve, long long halfway_instances);

using DeltaKey = std::tuple<std::string, std::string, std::string>; // dataset, first, second

struct RankAnalysis {
    int groups = 0;
    // Per second-CE name: how often it took rank 1..4 (rank 1 = largest drop;
    // ties share the lower rank), plus sign counts of its delta.
    std::map<std::string, std::array<int, 4>> rank_counts;
    std::map<std::string, int> drops, rises, zeros;
};

RankAnalysis rank_analysis(const std::map<DeltaKey, double>& deltas);

std::string rank_analysis_csv(const RankAnalysis& ra);

struct CurveStats {
    std::string run_id;
    std::string dataset_label;
    std::string first, second;
    std::uint64_t init_seed = 0;
    double best_gap = 0.0;
    double final_gap = 0.0;
    DipPoint dip;
    bool min_at_dip = false;
};

struct Summary {
    std::vector<CurveStats> runs;
    bool has_baseline = false;
    double baseline_best_gap = 0.0;
    double curriculum_best_gap = 0.0;
    double improvement_rel = 0.0; // (baseline - curriculum) / baseline
    double improvement_pp = 0.0;  // percentage points
    bool has_hr = false;
    double baseline_dip_gap = 0.0;
    double hr_dip_gap = 0.0;
    double dip_improvement_rel = 0.0;
    double dip_improvement_pp = 0.0;
    double frac_global_min_in_first_dip = 0.0;
};

Summary summarize(const std::vector<RunManifest>& runs);

std::string summary_runs_csv(const Summary& s);
std::string summary_stats_csv(const Summary& s);

// Matplotlib script reading the per-run eval CSVs; emitted next to reports so
// the core stays free of plotting dependencies.
std::string plot_script(const std::string& evals_glob);

} // namespace jsscl

#endif

#ifndef JSSCL_INSTANCE_HPP
#define JSSCL_INSTANCE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "jsscl/common.hpp"

namespace jsscl {

// Processing-time distribution. Both kinds produce integers in [low, high];
// the normal variant truncates by redrawing and rounds to nearest.
struct TimeDist {
    enum class Kind { uniform, normal };

    Kind kind = Kind::uniform;
    int low = 1;
    int high = 99;
    double mean = 50.0;   // normal only
    double stddev = 25.0; // normal only

    void validate() const;
    nlohmann::ordered_json to_json() const;
    static TimeDist from_json(const nlohmann::json& j);

    friend bool operator==(const TimeDist&, const TimeDist&) = default;
};

struct GenConfig {
    int n_jobs = 6;
    int n_machines = 6;
    TimeDist time_dist;
    std::uint64_t seed = 1;

    void validate() const;

    friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

struct JsspInstance {
    int id = 0;
    int n_jobs = 0;
    int n_machines = 0;
    // machine_order[j][k]: machine of the k-th task of job j.
    std::vector<std::vector<int>> machine_order;
    // proc_time[j][k]: duration of the k-th task of job j (>= 1).
    std::vector<std::vector<int>> proc_time;

    int n_tasks() const { return n_jobs * n_machines; }
    int total_proc(int job) const;

    // Throws ValidationError (naming the instance id) if any invariant fails:
    // permutation rows, positive durations, consistent dimensions.
    void validate() const;

    friend bool operator==(const JsspInstance&, const JsspInstance&) = default;
};

using Dataset = std::vector<JsspInstance>;

// Pure function of (cfg.seed, index); the instance gets id == index.
JsspInstance generate_instance(const GenConfig& cfg, int index);

Dataset generate_dataset(const GenConfig& cfg, int count, int workers = 1);

// Line-delimited UTF-8: one JSON header {version, n_jobs, n_machines,
// time_dist, seed, count}, then one {id, machine_order, proc_time} per line.
void write_dataset(const Dataset& dataset, const GenConfig& cfg,
                   const std::filesystem::path& path);

struct LoadedDataset {
    GenConfig cfg;
    Dataset instances;
};

LoadedDataset read_dataset(const std::filesystem::path& path);

// Content fingerprint (hex); independent of file formatting.
std::string dataset_hash(const Dataset& dataset);

} // namespace jsscl

#endif

#ifndef JSSCL_EXACT_HPP
#define JSSCL_EXACT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "jsscl/instance.hpp"

namespace jsscl {

struct ExactLimits {
    std::uint64_t node_limit = 10'000'000;
    double time_limit_s = 60.0;
};

struct ExactResult {
    int optimum = 0;                // best makespan found (the optimum iff proved)
    bool proved = false;            // search tree exhausted within limits
    std::uint64_t nodes_explored = 0;
    // start_times[j][k] of the best schedule found.
    std::optional<std::vector<std::vector<int>>> schedule;
};

// Branch-and-bound over active schedules: branch on the conflict set at the
// earliest-completion machine, bound by job/machine remaining work, incumbent
// warm-started from the best deterministic PDR rollout. Never throws on
// exhausted limits; returns proved=false with the incumbent instead.
ExactResult solve_optimal(const JsspInstance& instance, const ExactLimits& limits = {});

// Exhaustive enumeration of all left-shifting action sequences. Test oracle;
// guarded to n_jobs * n_machines <= 9.
int brute_force_small(const JsspInstance& instance);

// (makespan - optimum) / optimum. Throws on optimum < 1; makespan < optimum
// signals a solver or rollout bug and throws as well.
double gap(int makespan, int optimum);

struct OptimaRecord {
    int id = 0;
    int optimum = 0;
    bool proved = false;
    std::uint64_t nodes = 0;
};

std::vector<OptimaRecord> solve_dataset(const Dataset& dataset, const ExactLimits& limits = {},
                                        int workers = 1);

// Cache file: one JSON object {id, optimum, proved, nodes} per line.
void write_optima(const std::vector<OptimaRecord>& records, const std::filesystem::path& path);
std::vector<OptimaRecord> read_optima(const std::filesystem::path& path);

} // namespace jsscl

#endif

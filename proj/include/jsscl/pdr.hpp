#ifndef JSSCL_PDR_HPP
#define JSSCL_PDR_HPP

#include <array>
#include <string>
#include <vector>

#include "jsscl/env.hpp"
#include "jsscl/rng.hpp"

namespace jsscl {

// Priority dispatching rules. Higher priority wins; exact job-index ties go
// to the lower index. RANDOM is the seeded baseline, not one of the six
// deterministic rules.
enum class PdrKind { SPT, LPT, MTR, LRPT, LOUM, MPTLOM, RANDOM };

inline constexpr std::array<PdrKind, 7> kAllPdrKinds = {
    PdrKind::SPT,  PdrKind::LPT,    PdrKind::MTR,   PdrKind::LRPT,
    PdrKind::LOUM, PdrKind::MPTLOM, PdrKind::RANDOM};

std::string to_string(PdrKind kind);
PdrKind pdr_from_string(const std::string& name);

// Priority of an eligible job under `kind`. rng is consulted only by RANDOM.
// Throws ValidationError if the job has no unscheduled task left.
double priority(PdrKind kind, const ScheduleState& state, int job, Rng* rng = nullptr);

struct PdrRollout {
    ScheduleState state;
    int makespan = 0;
};

// Full left-shifting rollout picking argmax priority each step. Deterministic
// for every kind; RANDOM derives its stream from (seed, instance id).
PdrRollout solve_with_pdr(const JsspInstance& instance, PdrKind kind, std::uint64_t seed = 0);

struct SuiteRow {
    PdrKind kind;
    double mean_gap = 0.0;
    double mean_makespan = 0.0;
    int n_instances = 0;
};

struct SuiteResult {
    std::vector<SuiteRow> rows; // one per PdrKind, enum order
    PdrKind best;               // lowest mean gap (first on ties)
};

// Mean optimality gap of every rule over the dataset. optima[i] must be the
// optimal makespan of dataset[i].
SuiteResult evaluate_suite(const Dataset& dataset, const std::vector<int>& optima,
                           std::uint64_t seed = 0, int workers = 1);

// CSV with header: kind,mean_gap,mean_makespan,n_instances
std::string suite_csv(const SuiteResult& suite);

} // namespace jsscl

#endif

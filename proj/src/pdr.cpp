#include "jsscl/pdr.hpp"

#include <cstdio>

#include "jsscl/exact.hpp"
#include "jsscl/parallel.hpp"

namespace jsscl {

std::string to_string(PdrKind kind) {
    switch (kind) {
        case PdrKind::SPT: return "SPT";
        case PdrKind::LPT: return "LPT";
        case PdrKind::MTR: return "MTR";
        case PdrKind::LRPT: return "LRPT";
        case PdrKind::LOUM: return "LOUM";
        case PdrKind::MPTLOM: return "MPTLOM";
        case PdrKind::RANDOM: return "RANDOM";
    }
    throw std::logic_error("unknown PdrKind");
}

PdrKind pdr_from_string(const std::string& name) {
    for (PdrKind k : kAllPdrKinds)
        if (to_string(k) == name) return k;
    throw ValidationError("unknown PDR kind '" + name + "'");
}

namespace {

// Sum of durations of all unscheduled tasks that need `machine`.
int machine_remaining_work(const ScheduleState& state, int machine) {
    const JsspInstance& inst = state.instance();
    int total = 0;
    for (int j = 0; j < inst.n_jobs; ++j) {
        for (int k = state.next_pos(j); k < inst.n_machines; ++k) {
            if (inst.machine_order[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] ==
                machine)
                total += inst.proc_time[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        }
    }
    return total;
}

} // namespace

double priority(PdrKind kind, const ScheduleState& state, int job, Rng* rng) {
    const JsspInstance& inst = state.instance();
    if (job < 0 || job >= inst.n_jobs || state.next_pos(job) >= inst.n_machines)
        throw ValidationError("priority: job " + std::to_string(job) + " is not eligible");
    int k = state.next_pos(job);
    int p = inst.proc_time[static_cast<std::size_t>(job)][static_cast<std::size_t>(k)];
    switch (kind) {
        case PdrKind::SPT: return -static_cast<double>(p);
        case PdrKind::LPT: return static_cast<double>(p);
        case PdrKind::MTR: return static_cast<double>(inst.n_machines - k);
        case PdrKind::LRPT: {
            // Longest remaining processing time first (Pinedo's LRPT): the
            // job with the most outstanding work wins.
            int remaining = 0;
            for (int q = k; q < inst.n_machines; ++q)
                remaining +=
                    inst.proc_time[static_cast<std::size_t>(job)][static_cast<std::size_t>(q)];
            return static_cast<double>(remaining);
        }
        case PdrKind::MPTLOM: {
            int machine =
                inst.machine_order[static_cast<std::size_t>(job)][static_cast<std::size_t>(k)];
            return static_cast<double>(machine_remaining_work(state, machine));
        }
        case PdrKind::LOUM: {
            int machine =
                inst.machine_order[static_cast<std::size_t>(job)][static_cast<std::size_t>(k)];
            return -static_cast<double>(machine_remaining_work(state, machine));
        }
        case PdrKind::RANDOM: {
            if (rng == nullptr) throw ValidationError("priority: RANDOM needs an rng");
            return rng->uniform01();
        }
    }
    throw std::logic_error("unknown PdrKind");
}

PdrRollout solve_with_pdr(const JsspInstance& instance, PdrKind kind, std::uint64_t seed) {
    ScheduleState state(instance);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(instance.id)));
    Rng* rng_ptr = kind == PdrKind::RANDOM ? &rng : nullptr;
    while (!state.done()) {
        int best_job = -1;
        double best_score = 0.0;
        for (int job : state.eligible_actions()) {
            double score = priority(kind, state, job, rng_ptr);
            if (best_job < 0 || score > best_score) {
                best_job = job;
                best_score = score;
            }
        }
        state.step(best_job);
    }
    int ms = state.makespan();
    return PdrRollout{std::move(state), ms};
}

SuiteResult evaluate_suite(const Dataset& dataset, const std::vector<int>& optima,
                           std::uint64_t seed, int workers) {
    if (dataset.size() != optima.size())
        throw ValidationError("evaluate_suite: dataset has " + std::to_string(dataset.size()) +
                              " instances but " + std::to_string(optima.size()) + " optima");
    if (dataset.empty()) throw ValidationError("evaluate_suite: empty dataset");

    int n = static_cast<int>(dataset.size());
    int n_kinds = static_cast<int>(kAllPdrKinds.size());
    std::vector<int> makespans(static_cast<std::size_t>(n) * static_cast<std::size_t>(n_kinds));
    parallel_for(n, workers, [&](int i) {
        for (int ki = 0; ki < n_kinds; ++ki) {
            PdrKind kind = kAllPdrKinds[static_cast<std::size_t>(ki)];
            makespans[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_kinds) +
                      static_cast<std::size_t>(ki)] =
                solve_with_pdr(dataset[static_cast<std::size_t>(i)], kind, seed).makespan;
        }
    });

    SuiteResult result;
    result.rows.reserve(static_cast<std::size_t>(n_kinds));
    for (int ki = 0; ki < n_kinds; ++ki) {
        SuiteRow row;
        row.kind = kAllPdrKinds[static_cast<std::size_t>(ki)];
        double gap_sum = 0.0;
        double ms_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            int ms = makespans[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_kinds) +
                               static_cast<std::size_t>(ki)];
            gap_sum += gap(ms, optima[static_cast<std::size_t>(i)]);
            ms_sum += ms;
        }
        row.mean_gap = gap_sum / n;
        row.mean_makespan = ms_sum / n;
        row.n_instances = n;
        result.rows.push_back(row);
    }
    result.best = result.rows[0].kind;
    double best_gap = result.rows[0].mean_gap;
    for (const SuiteRow& row : result.rows) {
        if (row.mean_gap < best_gap) {
            best_gap = row.mean_gap;
            result.best = row.kind;
        }
    }
    return result;
}

std::string suite_csv(const SuiteResult& suite) {
    std::string out = "kind,mean_gap,mean_makespan,n_instances\n";
    char buf[128];
    for (const SuiteRow& row : suite.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%d\n", to_string(row.kind).c_str(),
                      row.mean_gap, row.mean_makespan, row.n_instances);
        out += buf;
    }
    return out;
}

} // namespace jsscl

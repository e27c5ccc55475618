#include "jsscl/exact.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>

#include "jsscl/env.hpp"
#include "jsscl/parallel.hpp"
#include "jsscl/pdr.hpp"

namespace jsscl {

double gap(int makespan, int optimum) {
    if (optimum < 1) throw ValidationError("gap: optimum must be >= 1");
    if (makespan < optimum)
        throw ValidationError("gap: makespan " + std::to_string(makespan) + " below optimum " +
                              std::to_string(optimum) + " (solver or rollout bug)");
    return static_cast<double>(makespan - optimum) / static_cast<double>(optimum);
}

namespace {

// DFS over Giffler-Thompson conflict sets. Partial schedules stay active by
// construction, so the optimal (active) schedule is always in the tree.
class BnbSearch {
  public:
    BnbSearch(const JsspInstance& inst, const ExactLimits& limits)
        : inst_(inst), limits_(limits), n_jobs_(inst.n_jobs), n_machines_(inst.n_machines) {
        std::size_t n = static_cast<std::size_t>(inst.n_tasks());
        proc_.resize(n);
        machine_.resize(n);
        suffix_.resize(n);
        for (int j = 0; j < n_jobs_; ++j) {
            int acc = 0;
            for (int k = n_machines_ - 1; k >= 0; --k) {
                acc += inst.proc_time[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                suffix_[flat(j, k)] = acc;
                proc_[flat(j, k)] = inst.proc_time[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                machine_[flat(j, k)] = inst.machine_order[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            }
        }
        next_.assign(static_cast<std::size_t>(n_jobs_), 0);
        job_ready_.assign(static_cast<std::size_t>(n_jobs_), 0);
        mach_ready_.assign(static_cast<std::size_t>(n_machines_), 0);
        starts_.assign(n, 0);
        best_starts_.assign(n, 0);
    }

    ExactResult run() {
        // Warm start: best deterministic PDR rollout is the initial incumbent.
        incumbent_ = std::numeric_limits<int>::max();
        for (PdrKind kind : kAllPdrKinds) {
            if (kind == PdrKind::RANDOM) continue;
            PdrRollout rollout = solve_with_pdr(inst_, kind);
            if (rollout.makespan < incumbent_) {
                incumbent_ = rollout.makespan;
                for (int j = 0; j < n_jobs_; ++j)
                    for (int k = 0; k < n_machines_; ++k)
                        best_starts_[flat(j, k)] = rollout.state.start_time({j, k});
            }
        }

        deadline_ = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(limits_.time_limit_s));
        aborted_ = false;
        nodes_ = 0;
        dfs(0, 0);

        ExactResult result;
        result.optimum = incumbent_;
        result.proved = !aborted_;
        result.nodes_explored = nodes_;
        std::vector<std::vector<int>> schedule(static_cast<std::size_t>(n_jobs_),
                                               std::vector<int>(static_cast<std::size_t>(n_machines_)));
        for (int j = 0; j < n_jobs_; ++j)
            for (int k = 0; k < n_machines_; ++k)
                schedule[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    best_starts_[flat(j, k)];
        result.schedule = std::move(schedule);
        return result;
    }

  private:
    std::size_t flat(int j, int k) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_machines_) +
               static_cast<std::size_t>(k);
    }

    // Admissible makespan lower bound for the current partial schedule.
    int bound(int current_max_end) const {
        int lb = current_max_end;
        for (int j = 0; j < n_jobs_; ++j) {
            int k = next_[static_cast<std::size_t>(j)];
            if (k < n_machines_)
                lb = std::max(lb, job_ready_[static_cast<std::size_t>(j)] + suffix_[flat(j, k)]);
        }
        // One-machine relaxation: min head + total work + min tail per machine.
        thread_local std::vector<int> m_min_head, m_work, m_min_tail;
        m_min_head.assign(static_cast<std::size_t>(n_machines_), std::numeric_limits<int>::max());
        m_work.assign(static_cast<std::size_t>(n_machines_), 0);
        m_min_tail.assign(static_cast<std::size_t>(n_machines_), std::numeric_limits<int>::max());
        for (int j = 0; j < n_jobs_; ++j) {
            int head = job_ready_[static_cast<std::size_t>(j)];
            for (int k = next_[static_cast<std::size_t>(j)]; k < n_machines_; ++k) {
                std::size_t f = flat(j, k);
                std::size_t m = static_cast<std::size_t>(machine_[f]);
                m_min_head[m] = std::min(m_min_head[m], head);
                m_work[m] += proc_[f];
                int tail = suffix_[f] - proc_[f];
                m_min_tail[m] = std::min(m_min_tail[m], tail);
                head += proc_[f];
            }
        }
        for (int m = 0; m < n_machines_; ++m) {
            std::size_t mi = static_cast<std::size_t>(m);
            if (m_work[mi] == 0) continue;
            int start = std::max(mach_ready_[mi], m_min_head[mi]);
            lb = std::max(lb, start + m_work[mi] + m_min_tail[mi]);
        }
        return lb;
    }

    void dfs(int depth, int current_max_end) {
        if (aborted_) return;
        ++nodes_;
        if ((nodes_ & 0xfff) == 0 && std::chrono::steady_clock::now() >= deadline_) {
            aborted_ = true;
            return;
        }
        if (nodes_ >= limits_.node_limit) {
            aborted_ = true;
            return;
        }
        if (depth == n_jobs_ * n_machines_) {
            if (current_max_end < incumbent_) {
                incumbent_ = current_max_end;
                best_starts_ = starts_;
            }
            return;
        }

        // Earliest completion over eligible operations picks the conflict machine.
        int best_ect = std::numeric_limits<int>::max();
        int conflict_machine = -1;
        for (int j = 0; j < n_jobs_; ++j) {
            int k = next_[static_cast<std::size_t>(j)];
            if (k >= n_machines_) continue;
            std::size_t f = flat(j, k);
            int est = std::max(job_ready_[static_cast<std::size_t>(j)],
                               mach_ready_[static_cast<std::size_t>(machine_[f])]);
            int ect = est + proc_[f];
            if (ect < best_ect) {
                best_ect = ect;
                conflict_machine = machine_[f];
            }
        }

        struct Child {
            int job;
            int bound;
        };
        std::vector<Child> kids;
        for (int j = 0; j < n_jobs_; ++j) {
            int k = next_[static_cast<std::size_t>(j)];
            if (k >= n_machines_) continue;
            std::size_t f = flat(j, k);
            if (machine_[f] != conflict_machine) continue;
            int est = std::max(job_ready_[static_cast<std::size_t>(j)],
                               mach_ready_[static_cast<std::size_t>(conflict_machine)]);
            if (est >= best_ect) continue;
            // Tentatively schedule to evaluate the child bound.
            int end = est + proc_[f];
            int saved_job_ready = job_ready_[static_cast<std::size_t>(j)];
            int saved_mach_ready = mach_ready_[static_cast<std::size_t>(conflict_machine)];
            next_[static_cast<std::size_t>(j)] = k + 1;
            job_ready_[static_cast<std::size_t>(j)] = end;
            mach_ready_[static_cast<std::size_t>(conflict_machine)] = end;
            int child_bound = bound(std::max(current_max_end, end));
            next_[static_cast<std::size_t>(j)] = k;
            job_ready_[static_cast<std::size_t>(j)] = saved_job_ready;
            mach_ready_[static_cast<std::size_t>(conflict_machine)] = saved_mach_ready;
            if (child_bound < incumbent_) kids.push_back({j, child_bound});
        }
        std::sort(kids.begin(), kids.end(), [](const Child& a, const Child& b) {
            return a.bound != b.bound ? a.bound < b.bound : a.job < b.job;
        });

        for (const Child& c : kids) {
            if (aborted_) return;
            if (c.bound >= incumbent_) continue; // incumbent may have improved
            int j = c.job;
            int k = next_[static_cast<std::size_t>(j)];
            std::size_t f = flat(j, k);
            int est = std::max(job_ready_[static_cast<std::size_t>(j)],
                               mach_ready_[static_cast<std::size_t>(conflict_machine)]);
            int end = est + proc_[f];
            int saved_job_ready = job_ready_[static_cast<std::size_t>(j)];
            int saved_mach_ready = mach_ready_[static_cast<std::size_t>(conflict_machine)];
            starts_[f] = est;
            next_[static_cast<std::size_t>(j)] = k + 1;
            job_ready_[static_cast<std::size_t>(j)] = end;
            mach_ready_[static_cast<std::size_t>(conflict_machine)] = end;
            dfs(depth + 1, std::max(current_max_end, end));
            next_[static_cast<std::size_t>(j)] = k;
            job_ready_[static_cast<std::size_t>(j)] = saved_job_ready;
            mach_ready_[static_cast<std::size_t>(conflict_machine)] = saved_mach_ready;
        }
    }

    const JsspInstance& inst_;
    ExactLimits limits_;
    int n_jobs_;
    int n_machines_;
    std::vector<int> proc_, machine_, suffix_;
    std::vector<int> next_, job_ready_, mach_ready_;
    std::vector<int> starts_, best_starts_;
    int incumbent_ = 0;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    std::chrono::steady_clock::time_point deadline_;
};

} // namespace

ExactResult solve_optimal(const JsspInstance& instance, const ExactLimits& limits) {
    instance.validate();
    BnbSearch search(instance, limits);
    return search.run();
}

namespace {

void brute_force_dfs(const ScheduleState& state, int& best) {
    if (state.done()) {
        best = std::min(best, state.makespan());
        return;
    }
    for (int job : state.eligible_actions()) {
        ScheduleState child = state;
        child.step(job);
        brute_force_dfs(child, best);
    }
}

} // namespace

int brute_force_small(const JsspInstance& instance) {
    instance.validate();
    if (instance.n_tasks() > 9)
        throw ValidationError("brute_force_small: instance has " +
                              std::to_string(instance.n_tasks()) + " tasks, limit is 9");
    ScheduleState root(instance);
    int best = std::numeric_limits<int>::max();
    brute_force_dfs(root, best);
    return best;
}

std::vector<OptimaRecord> solve_dataset(const Dataset& dataset, const ExactLimits& limits,
                                        int workers) {
    std::vector<OptimaRecord> records(dataset.size());
    parallel_for(static_cast<int>(dataset.size()), workers, [&](int i) {
        const JsspInstance& inst = dataset[static_cast<std::size_t>(i)];
        ExactResult r = solve_optimal(inst, limits);
        records[static_cast<std::size_t>(i)] = {inst.id, r.optimum, r.proved, r.nodes_explored};
    });
    return records;
}

void write_optima(const std::vector<OptimaRecord>& records, const std::filesystem::path& path) {
    std::string out;
    for (const OptimaRecord& r : records) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["optimum"] = r.optimum;
        j["proved"] = r.proved;
        j["nodes"] = r.nodes;
        out += j.dump();
        out.push_back('\n');
    }
    write_file_atomic(path, out);
}

std::vector<OptimaRecord> read_optima(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open optima cache: " + path.string());
    std::vector<OptimaRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            OptimaRecord r;
            r.id = j.at("id").get<int>();
            r.optimum = j.at("optimum").get<int>();
            r.proved = j.at("proved").get<bool>();
            r.nodes = j.at("nodes").get<std::uint64_t>();
            records.push_back(r);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": parse error: " + e.what());
        }
    }
    return records;
}

} // namespace jsscl

#ifndef JSSCL_ENV_HPP
#define JSSCL_ENV_HPP

#include <vector>

#include "json.hpp"

#include "jsscl/common.hpp"
#include "jsscl/instance.hpp"

namespace jsscl {

// How a newly selected task is placed on its machine. left_shift inserts into
// the earliest idle gap that fits; append always goes after the last
// reservation. append exists for the paired dominance comparison.
enum class InsertionMode { left_shift, append };

struct StepOutcome {
    int reward = 0; // LB_before - LB_after, always <= 0
    bool done = false;
};

// Partial schedule built by repeated job selection. Construction is the
// episode reset. One state has a single writer (step); distinct episodes are
// independent.
class ScheduleState {
  public:
    explicit ScheduleState(const JsspInstance& instance);

    const JsspInstance& instance() const { return *inst_; }
    int n_jobs() const { return inst_->n_jobs; }
    int n_machines() const { return inst_->n_machines; }

    bool scheduled(TaskId t) const { return t.pos < next_pos_[static_cast<std::size_t>(t.job)]; }
    int start_time(TaskId t) const { return start_[flat(t)]; }
    int end_time(TaskId t) const { return end_[flat(t)]; }
    int next_pos(int job) const { return next_pos_[static_cast<std::size_t>(job)]; }
    const std::vector<std::vector<TaskId>>& machine_seq() const { return machine_seq_; }
    int steps_taken() const { return steps_taken_; }
    bool done() const { return steps_taken_ == inst_->n_tasks(); }

    // Completion lower bound per task: end time once scheduled, job-chain
    // propagation (predecessor clb + own duration) while unscheduled.
    int clb(TaskId t) const { return clb_[flat(t)]; }
    const std::vector<int>& clb_flat() const { return clb_; }

    // Makespan lower bound of the partial schedule: max clb over all tasks.
    int lower_bound() const;

    // Jobs with at least one unscheduled task; empty iff done.
    std::vector<int> eligible_actions() const;

    // Earliest feasible start for the job's next task under left-shifting.
    // Precondition: t is the next unscheduled task of its job.
    int find_insertion_start(TaskId t) const;

    // Schedules the next task of `job`. Throws ValidationError if the job is
    // finished or out of range.
    StepOutcome step(int job, InsertionMode mode = InsertionMode::left_shift);

    // Max end time; only valid on a completed schedule.
    int makespan() const;

    // Debug export: [{job, pos, machine, start, end}, ...] sorted by machine
    // then start.
    nlohmann::ordered_json schedule_json() const;

    // Throws std::logic_error on any broken schedule invariant (overlap,
    // precedence, duration mismatch, step count). Test support.
    void check_invariants() const;

  private:
    std::size_t flat(TaskId t) const {
        return static_cast<std::size_t>(t.job) * static_cast<std::size_t>(inst_->n_machines) +
               static_cast<std::size_t>(t.pos);
    }

    const JsspInstance* inst_;
    std::vector<int> next_pos_;
    std::vector<int> start_;
    std::vector<int> end_;
    std::vector<int> clb_;
    std::vector<std::vector<TaskId>> machine_seq_;
    int steps_taken_ = 0;
};

} // namespace jsscl

#endif

#include "jsscl/env.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace jsscl {

ScheduleState::ScheduleState(const JsspInstance& instance) : inst_(&instance) {
    instance.validate();
    std::size_t n = static_cast<std::size_t>(instance.n_tasks());
    next_pos_.assign(static_cast<std::size_t>(instance.n_jobs), 0);
    start_.assign(n, 0);
    end_.assign(n, 0);
    clb_.assign(n, 0);
    machine_seq_.assign(static_cast<std::size_t>(instance.n_machines), {});
    for (int j = 0; j < instance.n_jobs; ++j) {
        int acc = 0;
        for (int k = 0; k < instance.n_machines; ++k) {
            acc += instance.proc_time[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            clb_[flat({j, k})] = acc;
        }
    }
}

int ScheduleState::lower_bound() const {
    int lb = 0;
    int last = inst_->n_machines - 1;
    for (int j = 0; j < inst_->n_jobs; ++j) lb = std::max(lb, clb_[flat({j, last})]);
    return lb;
}

std::vector<int> ScheduleState::eligible_actions() const {
    std::vector<int> jobs;
    for (int j = 0; j < inst_->n_jobs; ++j)
        if (next_pos_[static_cast<std::size_t>(j)] < inst_->n_machines) jobs.push_back(j);
    return jobs;
}

int ScheduleState::find_insertion_start(TaskId t) const {
    int k = t.pos;
    int job_ready = k > 0 ? end_[flat({t.job, k - 1})] : 0;
    int p = inst_->proc_time[static_cast<std::size_t>(t.job)][static_cast<std::size_t>(k)];
    int machine = inst_->machine_order[static_cast<std::size_t>(t.job)][static_cast<std::size_t>(k)];
    int prev_end = 0;
    for (const TaskId& other : machine_seq_[static_cast<std::size_t>(machine)]) {
        int s = std::max(prev_end, job_ready);
        if (s + p <= start_[flat(other)]) return s;
        prev_end = end_[flat(other)];
    }
    return std::max(prev_end, job_ready);
}

StepOutcome ScheduleState::step(int job, InsertionMode mode) {
    if (job < 0 || job >= inst_->n_jobs)
        throw ValidationError("step: job " + std::to_string(job) + " out of range");
    int k = next_pos_[static_cast<std::size_t>(job)];
    if (k >= inst_->n_machines)
        throw ValidationError("step: job " + std::to_string(job) + " is already finished");

    int lb_before = lower_bound();
    TaskId t{job, k};
    int p = inst_->proc_time[static_cast<std::size_t>(job)][static_cast<std::size_t>(k)];
    int machine = inst_->machine_order[static_cast<std::size_t>(job)][static_cast<std::size_t>(k)];
    auto& seq = machine_seq_[static_cast<std::size_t>(machine)];

    int s;
    if (mode == InsertionMode::left_shift) {
        s = find_insertion_start(t);
    } else {
        int job_ready = k > 0 ? end_[flat({job, k - 1})] : 0;
        int machine_ready = seq.empty() ? 0 : end_[flat(seq.back())];
        s = std::max(job_ready, machine_ready);
    }

    start_[flat(t)] = s;
    end_[flat(t)] = s + p;
    auto it = std::find_if(seq.begin(), seq.end(),
                           [&](const TaskId& o) { return start_[flat(o)] > s; });
    seq.insert(it, t);
    next_pos_[static_cast<std::size_t>(job)] = k + 1;
    ++steps_taken_;

    // Only the chosen job's chain changes, and clb never decreases.
    clb_[flat(t)] = s + p;
    for (int q = k + 1; q < inst_->n_machines; ++q)
        clb_[flat({job, q})] =
            clb_[flat({job, q - 1})] +
            inst_->proc_time[static_cast<std::size_t>(job)][static_cast<std::size_t>(q)];

    int lb_after = lower_bound();
    return StepOutcome{lb_before - lb_after, done()};
}

int ScheduleState::makespan() const {
    if (!done())
        throw ValidationError("makespan: schedule incomplete (" + std::to_string(steps_taken_) +
                              " of " + std::to_string(inst_->n_tasks()) + " tasks scheduled)");
    int ms = 0;
    for (std::size_t i = 0; i < end_.size(); ++i) ms = std::max(ms, end_[i]);
    return ms;
}

nlohmann::ordered_json ScheduleState::schedule_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (int m = 0; m < inst_->n_machines; ++m) {
        for (const TaskId& t : machine_seq_[static_cast<std::size_t>(m)]) {
            nlohmann::ordered_json rec;
            rec["job"] = t.job;
            rec["pos"] = t.pos;
            rec["machine"] = m;
            rec["start"] = start_[flat(t)];
            rec["end"] = end_[flat(t)];
            arr.push_back(std::move(rec));
        }
    }
    return arr;
}

void ScheduleState::check_invariants() const {
    auto fail = [](const std::string& what) { throw std::logic_error("schedule invariant: " + what); };
    int scheduled_count = 0;
    for (int j = 0; j < inst_->n_jobs; ++j) {
        int np = next_pos_[static_cast<std::size_t>(j)];
        if (np < 0 || np > inst_->n_machines) fail("next_pos out of range");
        scheduled_count += np;
        for (int k = 0; k < np; ++k) {
            TaskId t{j, k};
            int p = inst_->proc_time[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            if (end_[flat(t)] != start_[flat(t)] + p) fail("end != start + proc");
            if (k > 0 && start_[flat(t)] < end_[flat({j, k - 1})])
                fail("job precedence violated");
            if (clb_[flat(t)] != end_[flat(t)]) fail("clb of scheduled task != end");
        }
    }
    if (scheduled_count != steps_taken_) fail("steps_taken != scheduled task count");
    std::vector<char> listed(start_.size(), 0);
    int listed_count = 0;
    for (int m = 0; m < inst_->n_machines; ++m) {
        const auto& seq = machine_seq_[static_cast<std::size_t>(m)];
        int prev_end = 0;
        for (const TaskId& t : seq) {
            if (!scheduled(t)) fail("unscheduled task in machine_seq");
            if (inst_->machine_order[static_cast<std::size_t>(t.job)][static_cast<std::size_t>(t.pos)] != m)
                fail("task listed on wrong machine");
            if (start_[flat(t)] < prev_end) fail("machine overlap");
            prev_end = end_[flat(t)];
            if (listed[flat(t)]) fail("task listed twice");
            listed[flat(t)] = 1;
            ++listed_count;
        }
    }
    if (listed_count != steps_taken_) fail("machine_seq entries != scheduled task count");
}

} // namespace jsscl

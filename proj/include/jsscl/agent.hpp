#ifndef JSSCL_AGENT_HPP
#define JSSCL_AGENT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jsscl/env.hpp"
#include "jsscl/rng.hpp"

namespace jsscl {

// Network architecture and PPO constants. Everything that the training loop
// may vary lives here; nothing is hard-coded in the update math.
struct AgentConfig {
    int layers = 2;          // message-passing rounds
    int hidden = 64;         // embedding width
    double clb_scale = 594.0; // divisor for the clb feature, fixed per dataset
    std::uint64_t seed = 1;  // parameter init + action sampling stream

    double lr = 2e-4;
    double clip = 0.2;
    double gamma = 1.0; // episodic; rewards already telescope to the makespan
    double gae_lambda = 0.98;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    int epochs = 1;
    int batch_episodes = 1;
    bool normalize_advantages = true;

    void validate() const;
};

// Default feature scale for a dataset: n_machines * max processing time.
double default_clb_scale(int n_machines, const TimeDist& dist);

// Frozen view of a ScheduleState for the network: two features per task
// (done flag, scaled clb), symmetric neighbor lists (job chain + scheduled
// machine chain), and the eligible jobs with their next-task node ids.
struct Observation {
    int n_nodes = 0;
    std::vector<double> feat;               // n_nodes x 2, row-major
    std::vector<std::vector<int>> in_nbrs;  // per node, excluding the self-loop
    std::vector<int> eligible_jobs;
    std::vector<int> eligible_nodes;        // node id of each eligible job's next task
};

Observation observe(const ScheduleState& state, double clb_scale);

struct PolicyOutput {
    std::vector<double> probs; // aligned with Observation::eligible_jobs
    double value = 0.0;
};

// Message-passing policy/value network with sum aggregation: input projection
// to width H, `layers` rounds of perceptron(sum of neighbors + self), graph
// embedding = sum over nodes, actor head on [node || graph], critic head on
// graph. Parameters live in one flat vector (double precision).
class Policy {
  public:
    Policy(int layers, int hidden, double clb_scale, std::uint64_t init_seed);

    int layers() const { return layers_; }
    int hidden() const { return hidden_; }
    double clb_scale() const { return clb_scale_; }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    std::size_t param_count() const { return params_.size(); }

    struct Embedding {
        std::vector<double> node;  // n_nodes x H
        std::vector<double> graph; // H
    };
    Embedding embed(const Observation& obs) const;

    // Masked distribution over eligible jobs plus the value estimate.
    // Ineligible jobs never appear (probability exactly zero by omission).
    // Throws ValidationError on a terminal observation.
    PolicyOutput forward(const Observation& obs) const;

    bool params_finite() const;

    void save(const std::filesystem::path& path, std::uint64_t step,
              const std::string& rng_state) const;

  private:
    friend class PpoTrainer;
    int layers_;
    int hidden_;
    double clb_scale_;
    std::vector<double> params_;
};

struct LoadedPolicy {
    Policy policy;
    std::uint64_t step = 0;
    std::string rng_state;
};

// Round-trip counterpart of Policy::save.
LoadedPolicy load_policy(const std::filesystem::path& path);

enum class SelectMode { sample, greedy };

// greedy: argmax probability, lowest index on exact ties. sample: seeded draw.
int select_action_index(const std::vector<double>& probs, SelectMode mode, Rng& rng);

struct StepSample {
    Observation obs;
    int action_index = 0; // into obs.eligible_jobs
    double logp = 0.0;
    double value = 0.0;
    double reward = 0.0;
};

struct Trajectory {
    std::vector<StepSample> steps;
    int lb0 = 0;     // lower bound of the reset state
    int makespan = 0;
};

// One full training episode. Rewards sum to lb0 - makespan by construction.
Trajectory rollout(const JsspInstance& instance, const Policy& policy, SelectMode mode, Rng& rng);

// Evaluation path: greedy actions, no trajectory is ever produced, so eval
// episodes cannot leak into updates.
int greedy_makespan(const JsspInstance& instance, const Policy& policy);

struct UpdateStats {
    double total_loss = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
};

// Clipped-surrogate PPO with GAE advantages and an Adam step. Owns the
// optimizer state; single writer to the policy parameters.
class PpoTrainer {
  public:
    PpoTrainer(Policy policy, const AgentConfig& cfg);

    Policy& policy() { return policy_; }
    const Policy& policy() const { return policy_; }
    const AgentConfig& config() const { return cfg_; }
    std::uint64_t updates_done() const { return updates_done_; }

    // Throws ValidationError with a batch dump path on NaN/Inf loss.
    UpdateStats update(const std::vector<Trajectory>& batch);

    // Total PPO loss and its analytic gradient at the current parameters,
    // holding the stored logp/value/reward constant. Exposed for the
    // finite-difference check.
    double loss_and_grad(const std::vector<Trajectory>& batch, std::vector<double>* grad,
                         UpdateStats* stats = nullptr) const;

  private:
    Policy policy_;
    AgentConfig cfg_;
    std::vector<double> adam_m_;
    std::vector<double> adam_v_;
    std::uint64_t adam_t_ = 0;
    std::uint64_t updates_done_ = 0;
};

} // namespace jsscl

#endif

#include "jsscl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "json.hpp"

namespace jsscl {

using nlohmann::json;
using nlohmann::ordered_json;

void AgentConfig::validate() const {
    if (layers < 0) throw ValidationError("agent config: layers must be >= 0");
    if (hidden < 1) throw ValidationError("agent config: hidden must be >= 1");
    if (clb_scale <= 0.0) throw ValidationError("agent config: clb_scale must be > 0");
    if (lr < 0.0) throw ValidationError("agent config: lr must be >= 0");
    if (clip <= 0.0) throw ValidationError("agent config: clip must be > 0");
    if (epochs < 1) throw ValidationError("agent config: epochs must be >= 1");
    if (batch_episodes < 1) throw ValidationError("agent config: batch_episodes must be >= 1");
}

double default_clb_scale(int n_machines, const TimeDist& dist) {
    return static_cast<double>(n_machines) * static_cast<double>(dist.high);
}

Observation observe(const ScheduleState& state, double clb_scale) {
    const JsspInstance& inst = state.instance();
    int m = inst.n_machines;
    Observation obs;
    obs.n_nodes = inst.n_tasks();
    obs.feat.resize(static_cast<std::size_t>(obs.n_nodes) * 2);
    obs.in_nbrs.assign(static_cast<std::size_t>(obs.n_nodes), {});
    for (int j = 0; j < inst.n_jobs; ++j) {
        for (int k = 0; k < m; ++k) {
            int v = j * m + k;
            obs.feat[static_cast<std::size_t>(v) * 2] = state.scheduled({j, k}) ? 1.0 : 0.0;
            obs.feat[static_cast<std::size_t>(v) * 2 + 1] =
                static_cast<double>(state.clb({j, k})) / clb_scale;
            if (k > 0) obs.in_nbrs[static_cast<std::size_t>(v)].push_back(v - 1);
            if (k + 1 < m) obs.in_nbrs[static_cast<std::size_t>(v)].push_back(v + 1);
        }
    }
    for (const auto& seq : state.machine_seq()) {
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            int a = seq[i].job * m + seq[i].pos;
            int b = seq[i + 1].job * m + seq[i + 1].pos;
            obs.in_nbrs[static_cast<std::size_t>(a)].push_back(b);
            obs.in_nbrs[static_cast<std::size_t>(b)].push_back(a);
        }
    }
    for (int job : state.eligible_actions()) {
        obs.eligible_jobs.push_back(job);
        obs.eligible_nodes.push_back(job * m + state.next_pos(job));
    }
    return obs;
}

namespace {

constexpr int kInDim = 2;

// Offsets into the flat parameter vector.
struct Layout {
    int hidden = 0;
    int layers = 0;
    std::size_t w_in = 0, b_in = 0;
    struct Layer {
        std::size_t w1, b1, w2, b2;
    };
    std::vector<Layer> layer;
    std::size_t a1_w = 0, a1_b = 0, a2_w = 0, a2_b = 0;
    std::size_t c1_w = 0, c1_b = 0, c2_w = 0, c2_b = 0;
    std::size_t total = 0;

    Layout(int n_layers, int n_hidden) : hidden(n_hidden), layers(n_layers) {
        std::size_t h = static_cast<std::size_t>(n_hidden);
        std::size_t off = 0;
        auto take = [&off](std::size_t count) {
            std::size_t at = off;
            off += count;
            return at;
        };
        w_in = take(h * kInDim);
        b_in = take(h);
        layer.resize(static_cast<std::size_t>(n_layers));
        for (auto& l : layer) {
            l.w1 = take(h * h);
            l.b1 = take(h);
            l.w2 = take(h * h);
            l.b2 = take(h);
        }
        a1_w = take(h * 2 * h);
        a1_b = take(h);
        a2_w = take(h);
        a2_b = take(1);
        c1_w = take(h * h);
        c1_b = take(h);
        c2_w = take(h);
        c2_b = take(1);
        total = off;
    }
};

// y = W x + b, W row-major out x in.
inline void affine(const double* w, const double* b, const double* x, double* y, int out, int in) {
    for (int o = 0; o < out; ++o) {
        double acc = b[o];
        const double* row = w + static_cast<std::size_t>(o) * static_cast<std::size_t>(in);
        for (int i = 0; i < in; ++i) acc += row[i] * x[i];
        y[o] = acc;
    }
}

// Accumulates dW += dy x^T, db += dy, dx += W^T dy (dx may be null).
inline void affine_back(const double* w, const double* x, const double* dy, double* dw, double* db,
                        double* dx, int out, int in) {
    for (int o = 0; o < out; ++o) {
        double g = dy[o];
        if (g == 0.0) continue;
        const double* row = w + static_cast<std::size_t>(o) * static_cast<std::size_t>(in);
        double* drow = dw + static_cast<std::size_t>(o) * static_cast<std::size_t>(in);
        db[o] += g;
        for (int i = 0; i < in; ++i) {
            drow[i] += g * x[i];
            if (dx != nullptr) dx[i] += row[i] * g;
        }
    }
}

struct ForwardCache {
    // levels[k]: node embeddings after k message-passing rounds, n x H.
    std::vector<std::vector<double>> levels;
    // z1[k]: hidden pre-activations of round k's perceptron, n x H.
    std::vector<std::vector<double>> z1;
    std::vector<double> graph;    // H
    std::vector<double> actor_z;  // E x H pre-activations
    std::vector<double> critic_z; // H pre-activations
    std::vector<double> logits;   // E
    std::vector<double> probs;    // E
    double logz = 0.0;            // log partition of the softmax
    double value = 0.0;
};

} // namespace

Policy::Policy(int layers, int hidden, double clb_scale, std::uint64_t init_seed)
    : layers_(layers), hidden_(hidden), clb_scale_(clb_scale) {
    if (layers < 0 || hidden < 1 || clb_scale <= 0.0)
        throw ValidationError("policy: bad architecture constants");
    Layout layout(layers, hidden);
    params_.assign(layout.total, 0.0);
    Rng rng(derive_seed(init_seed, 0xa9e1ull));
    auto init_block = [&](std::size_t off, std::size_t count, int fan_in) {
        double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (std::size_t i = 0; i < count; ++i)
            params_[off + i] = (rng.uniform01() * 2.0 - 1.0) * bound;
    };
    std::size_t h = static_cast<std::size_t>(hidden);
    init_block(layout.w_in, h * kInDim, kInDim);
    init_block(layout.b_in, h, kInDim);
    for (const auto& l : layout.layer) {
        init_block(l.w1, h * h, hidden);
        init_block(l.b1, h, hidden);
        init_block(l.w2, h * h, hidden);
        init_block(l.b2, h, hidden);
    }
    init_block(layout.a1_w, h * 2 * h, 2 * hidden);
    init_block(layout.a1_b, h, 2 * hidden);
    init_block(layout.a2_w, h, hidden);
    init_block(layout.a2_b, 1, hidden);
    init_block(layout.c1_w, h * h, hidden);
    init_block(layout.c1_b, h, hidden);
    init_block(layout.c2_w, h, hidden);
    init_block(layout.c2_b, 1, hidden);
}

namespace {

void embed_forward(const Layout& layout, const std::vector<double>& params, const Observation& obs,
                   ForwardCache& cache) {
    int h = layout.hidden;
    int n = obs.n_nodes;
    std::size_t nh = static_cast<std::size_t>(n) * static_cast<std::size_t>(h);
    cache.levels.assign(static_cast<std::size_t>(layout.layers) + 1, std::vector<double>(nh));
    cache.z1.assign(static_cast<std::size_t>(layout.layers), std::vector<double>(nh));

    const double* p = params.data();
    for (int v = 0; v < n; ++v)
        affine(p + layout.w_in, p + layout.b_in, obs.feat.data() + static_cast<std::size_t>(v) * 2,
               cache.levels[0].data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h),
               h, kInDim);

    std::vector<double> agg(static_cast<std::size_t>(h));
    std::vector<double> hidden(static_cast<std::size_t>(h));
    for (int k = 0; k < layout.layers; ++k) {
        const auto& prev = cache.levels[static_cast<std::size_t>(k)];
        auto& next = cache.levels[static_cast<std::size_t>(k) + 1];
        auto& z1 = cache.z1[static_cast<std::size_t>(k)];
        const Layout::Layer& lay = layout.layer[static_cast<std::size_t>(k)];
        for (int v = 0; v < n; ++v) {
            const double* hv = prev.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
            std::copy(hv, hv + h, agg.begin());
            for (int u : obs.in_nbrs[static_cast<std::size_t>(v)]) {
                const double* hu =
                    prev.data() + static_cast<std::size_t>(u) * static_cast<std::size_t>(h);
                for (int i = 0; i < h; ++i) agg[static_cast<std::size_t>(i)] += hu[i];
            }
            double* zv = z1.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
            affine(p + lay.w1, p + lay.b1, agg.data(), zv, h, h);
            for (int i = 0; i < h; ++i)
                hidden[static_cast<std::size_t>(i)] = zv[i] > 0.0 ? zv[i] : 0.0;
            affine(p + lay.w2, p + lay.b2, hidden.data(),
                   next.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h), h, h);
        }
    }

    cache.graph.assign(static_cast<std::size_t>(h), 0.0);
    const auto& top = cache.levels.back();
    for (int v = 0; v < n; ++v) {
        const double* hv = top.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
        for (int i = 0; i < h; ++i) cache.graph[static_cast<std::size_t>(i)] += hv[i];
    }
}

void heads_forward(const Layout& layout, const std::vector<double>& params, const Observation& obs,
                   ForwardCache& cache) {
    int h = layout.hidden;
    int n_elig = static_cast<int>(obs.eligible_nodes.size());
    const double* p = params.data();
    const auto& top = cache.levels.back();

    cache.actor_z.resize(static_cast<std::size_t>(n_elig) * static_cast<std::size_t>(h));
    cache.logits.resize(static_cast<std::size_t>(n_elig));
    std::vector<double> cat(static_cast<std::size_t>(2 * h));
    std::vector<double> hidden(static_cast<std::size_t>(h));
    for (int e = 0; e < n_elig; ++e) {
        int v = obs.eligible_nodes[static_cast<std::size_t>(e)];
        const double* hv = top.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
        std::copy(hv, hv + h, cat.begin());
        std::copy(cache.graph.begin(), cache.graph.end(), cat.begin() + h);
        double* za = cache.actor_z.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(h);
        affine(p + layout.a1_w, p + layout.a1_b, cat.data(), za, h, 2 * h);
        for (int i = 0; i < h; ++i)
            hidden[static_cast<std::size_t>(i)] = za[i] > 0.0 ? za[i] : 0.0;
        double logit = p[layout.a2_b];
        const double* w2 = p + layout.a2_w;
        for (int i = 0; i < h; ++i) logit += w2[i] * hidden[static_cast<std::size_t>(i)];
        cache.logits[static_cast<std::size_t>(e)] = logit;
    }

    double max_logit = *std::max_element(cache.logits.begin(), cache.logits.end());
    double z = 0.0;
    cache.probs.resize(static_cast<std::size_t>(n_elig));
    for (int e = 0; e < n_elig; ++e) {
        double ex = std::exp(cache.logits[static_cast<std::size_t>(e)] - max_logit);
        cache.probs[static_cast<std::size_t>(e)] = ex;
        z += ex;
    }
    for (double& pr : cache.probs) pr /= z;
    cache.logz = max_logit + std::log(z);

    cache.critic_z.resize(static_cast<std::size_t>(h));
    affine(p + layout.c1_w, p + layout.c1_b, cache.graph.data(), cache.critic_z.data(), h, h);
    for (int i = 0; i < h; ++i)
        hidden[static_cast<std::size_t>(i)] =
            cache.critic_z[static_cast<std::size_t>(i)] > 0.0
                ? cache.critic_z[static_cast<std::size_t>(i)]
                : 0.0;
    double value = p[layout.c2_b];
    const double* cw2 = p + layout.c2_w;
    for (int i = 0; i < h; ++i) value += cw2[i] * hidden[static_cast<std::size_t>(i)];
    cache.value = value;
}

// Accumulates parameter gradients for one observation given the gradients on
// the eligible logits and the value output.
void backward(const Layout& layout, const std::vector<double>& params, const Observation& obs,
              const ForwardCache& cache, const std::vector<double>& dlogits, double dvalue,
              std::vector<double>& grad) {
    int h = layout.hidden;
    int n = obs.n_nodes;
    const double* p = params.data();
    double* g = grad.data();
    std::size_t nh = static_cast<std::size_t>(n) * static_cast<std::size_t>(h);

    std::vector<double> dgraph(static_cast<std::size_t>(h), 0.0);
    std::vector<double> dtop(nh, 0.0);
    std::vector<double> scratch_h(static_cast<std::size_t>(h));
    std::vector<double> relu_buf(static_cast<std::size_t>(h));

    // Critic head.
    if (dvalue != 0.0) {
        for (int i = 0; i < h; ++i) {
            double zc = cache.critic_z[static_cast<std::size_t>(i)];
            double act = zc > 0.0 ? zc : 0.0;
            g[layout.c2_w + static_cast<std::size_t>(i)] += dvalue * act;
            scratch_h[static_cast<std::size_t>(i)] =
                zc > 0.0 ? p[layout.c2_w + static_cast<std::size_t>(i)] * dvalue : 0.0;
        }
        g[layout.c2_b] += dvalue;
        affine_back(p + layout.c1_w, cache.graph.data(), scratch_h.data(), g + layout.c1_w,
                    g + layout.c1_b, dgraph.data(), h, h);
    }

    // Actor head per eligible job.
    std::vector<double> cat(static_cast<std::size_t>(2 * h));
    std::vector<double> dcat(static_cast<std::size_t>(2 * h));
    const auto& top = cache.levels.back();
    for (std::size_t e = 0; e < dlogits.size(); ++e) {
        double dl = dlogits[e];
        if (dl == 0.0) continue;
        int v = obs.eligible_nodes[e];
        const double* za = cache.actor_z.data() + e * static_cast<std::size_t>(h);
        for (int i = 0; i < h; ++i) {
            double act = za[i] > 0.0 ? za[i] : 0.0;
            g[layout.a2_w + static_cast<std::size_t>(i)] += dl * act;
            scratch_h[static_cast<std::size_t>(i)] =
                za[i] > 0.0 ? p[layout.a2_w + static_cast<std::size_t>(i)] * dl : 0.0;
        }
        g[layout.a2_b] += dl;
        const double* hv = top.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
        std::copy(hv, hv + h, cat.begin());
        std::copy(cache.graph.begin(), cache.graph.end(), cat.begin() + h);
        std::fill(dcat.begin(), dcat.end(), 0.0);
        affine_back(p + layout.a1_w, cat.data(), scratch_h.data(), g + layout.a1_w,
                    g + layout.a1_b, dcat.data(), h, 2 * h);
        double* dtv = dtop.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
        for (int i = 0; i < h; ++i) {
            dtv[i] += dcat[static_cast<std::size_t>(i)];
            dgraph[static_cast<std::size_t>(i)] += dcat[static_cast<std::size_t>(h + i)];
        }
    }

    // Graph embedding is a plain sum: broadcast its gradient to every node.
    for (int v = 0; v < n; ++v) {
        double* dtv = dtop.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
        for (int i = 0; i < h; ++i) dtv[i] += dgraph[static_cast<std::size_t>(i)];
    }

    // Message-passing rounds, reversed.
    std::vector<double> dprev(nh);
    std::vector<double> agg(static_cast<std::size_t>(h));
    std::vector<double> dz1(static_cast<std::size_t>(h));
    std::vector<double> dagg(static_cast<std::size_t>(h));
    for (int k = layout.layers - 1; k >= 0; --k) {
        const Layout::Layer& lay = layout.layer[static_cast<std::size_t>(k)];
        const auto& prev = cache.levels[static_cast<std::size_t>(k)];
        const auto& z1 = cache.z1[static_cast<std::size_t>(k)];
        std::fill(dprev.begin(), dprev.end(), 0.0);
        for (int v = 0; v < n; ++v) {
            const double* dhv = dtop.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
            bool all_zero = true;
            for (int i = 0; i < h; ++i)
                if (dhv[i] != 0.0) {
                    all_zero = false;
                    break;
                }
            if (all_zero) continue;
            const double* zv = z1.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
            for (int i = 0; i < h; ++i) relu_buf[static_cast<std::size_t>(i)] = zv[i] > 0.0 ? zv[i] : 0.0;
            // h_next = W2 relu(z1) + b2
            std::fill(dz1.begin(), dz1.end(), 0.0);
            affine_back(p + lay.w2, relu_buf.data(), dhv, g + lay.w2, g + lay.b2, dz1.data(), h, h);
            for (int i = 0; i < h; ++i)
                if (zv[i] <= 0.0) dz1[static_cast<std::size_t>(i)] = 0.0;
            // z1 = W1 agg + b1; rebuild agg from the stored level below.
            const double* hv = prev.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
            std::copy(hv, hv + h, agg.begin());
            for (int u : obs.in_nbrs[static_cast<std::size_t>(v)]) {
                const double* hu =
                    prev.data() + static_cast<std::size_t>(u) * static_cast<std::size_t>(h);
                for (int i = 0; i < h; ++i) agg[static_cast<std::size_t>(i)] += hu[i];
            }
            std::fill(dagg.begin(), dagg.end(), 0.0);
            affine_back(p + lay.w1, agg.data(), dz1.data(), g + lay.w1, g + lay.b1, dagg.data(), h,
                        h);
            // Scatter the aggregation gradient to self and in-neighbors.
            double* dpv = dprev.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
            for (int i = 0; i < h; ++i) dpv[i] += dagg[static_cast<std::size_t>(i)];
            for (int u : obs.in_nbrs[static_cast<std::size_t>(v)]) {
                double* dpu = dprev.data() + static_cast<std::size_t>(u) * static_cast<std::size_t>(h);
                for (int i = 0; i < h; ++i) dpu[i] += dagg[static_cast<std::size_t>(i)];
            }
        }
        std::swap(dtop, dprev);
    }

    // Input projection.
    for (int v = 0; v < n; ++v) {
        const double* dhv = dtop.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(h);
        affine_back(p + layout.w_in, obs.feat.data() + static_cast<std::size_t>(v) * 2, dhv,
                    g + layout.w_in, g + layout.b_in, nullptr, h, kInDim);
    }
}

} // namespace

Policy::Embedding Policy::embed(const Observation& obs) const {
    Layout layout(layers_, hidden_);
    ForwardCache cache;
    embed_forward(layout, params_, obs, cache);
    Embedding out;
    out.node = cache.levels.back();
    out.graph = cache.graph;
    return out;
}

PolicyOutput Policy::forward(const Observation& obs) const {
    if (obs.eligible_jobs.empty())
        throw ValidationError("policy forward: no eligible jobs (terminal state)");
    Layout layout(layers_, hidden_);
    ForwardCache cache;
    embed_forward(layout, params_, obs, cache);
    heads_forward(layout, params_, obs, cache);
    PolicyOutput out;
    out.probs = cache.probs;
    out.value = cache.value;
    return out;
}

bool Policy::params_finite() const {
    for (double v : params_)
        if (!std::isfinite(v)) return false;
    return true;
}

void Policy::save(const std::filesystem::path& path, std::uint64_t step,
                  const std::string& rng_state) const {
    ordered_json j;
    j["version"] = 1;
    j["layers"] = layers_;
    j["hidden"] = hidden_;
    j["clb_scale"] = clb_scale_;
    j["step"] = step;
    j["rng_state"] = rng_state;
    j["params"] = params_;
    std::string out = j.dump();
    out.push_back('\n');
    write_file_atomic(path, out);
}

LoadedPolicy load_policy(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": parse error: " + std::string(e.what()));
    }
    try {
        Policy p(j.at("layers").get<int>(), j.at("hidden").get<int>(),
                 j.at("clb_scale").get<double>(), 0);
        auto params = j.at("params").get<std::vector<double>>();
        if (params.size() != p.param_count())
            throw ValidationError(path.string() + ": checkpoint has " +
                                  std::to_string(params.size()) + " params, expected " +
                                  std::to_string(p.param_count()));
        p.params() = std::move(params);
        LoadedPolicy out{std::move(p), j.at("step").get<std::uint64_t>(),
                         j.at("rng_state").get<std::string>()};
        return out;
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": bad checkpoint: " + std::string(e.what()));
    }
}

int select_action_index(const std::vector<double>& probs, SelectMode mode, Rng& rng) {
    if (probs.empty()) throw ValidationError("select_action: empty distribution");
    if (mode == SelectMode::greedy) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(probs.size()); ++i)
            if (probs[static_cast<std::size_t>(i)] > probs[static_cast<std::size_t>(best)]) best = i;
        return best;
    }
    double u = rng.uniform01();
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
        acc += probs[static_cast<std::size_t>(i)];
        if (u < acc) return i;
    }
    return static_cast<int>(probs.size()) - 1;
}

Trajectory rollout(const JsspInstance& instance, const Policy& policy, SelectMode mode, Rng& rng) {
    ScheduleState state(instance);
    Trajectory traj;
    traj.lb0 = state.lower_bound();
    while (!state.done()) {
        StepSample sample;
        sample.obs = observe(state, policy.clb_scale());
        PolicyOutput out = policy.forward(sample.obs);
        sample.value = out.value;
        sample.action_index = select_action_index(out.probs, mode, rng);
        sample.logp = std::log(out.probs[static_cast<std::size_t>(sample.action_index)]);
        int job = sample.obs.eligible_jobs[static_cast<std::size_t>(sample.action_index)];
        StepOutcome outcome = state.step(job);
        sample.reward = static_cast<double>(outcome.reward);
        traj.steps.push_back(std::move(sample));
    }
    traj.makespan = state.makespan();
    return traj;
}

int greedy_makespan(const JsspInstance& instance, const Policy& policy) {
    ScheduleState state(instance);
    while (!state.done()) {
        Observation obs = observe(state, policy.clb_scale());
        PolicyOutput out = policy.forward(obs);
        int best = 0;
        for (int i = 1; i < static_cast<int>(out.probs.size()); ++i)
            if (out.probs[static_cast<std::size_t>(i)] > out.probs[static_cast<std::size_t>(best)])
                best = i;
        state.step(obs.eligible_jobs[static_cast<std::size_t>(best)]);
    }
    return state.makespan();
}

PpoTrainer::PpoTrainer(Policy policy, const AgentConfig& cfg) : policy_(std::move(policy)), cfg_(cfg) {
    cfg_.validate();
    adam_m_.assign(policy_.param_count(), 0.0);
    adam_v_.assign(policy_.param_count(), 0.0);
}

namespace {

struct StepTarget {
    double advantage = 0.0;
    double ret = 0.0;
};

// GAE over each episode from the stored value estimates; independent of the
// current parameters, so repeated epochs and finite-difference probes see the
// same targets.
std::vector<std::vector<StepTarget>> compute_targets(const std::vector<Trajectory>& batch,
                                                     const AgentConfig& cfg) {
    std::vector<std::vector<StepTarget>> targets;
    targets.reserve(batch.size());
    for (const Trajectory& traj : batch) {
        std::vector<StepTarget> t(traj.steps.size());
        double next_value = 0.0;
        double acc = 0.0;
        for (int i = static_cast<int>(traj.steps.size()) - 1; i >= 0; --i) {
            const StepSample& s = traj.steps[static_cast<std::size_t>(i)];
            double delta = s.reward + cfg.gamma * next_value - s.value;
            acc = delta + cfg.gamma * cfg.gae_lambda * acc;
            t[static_cast<std::size_t>(i)].advantage = acc;
            t[static_cast<std::size_t>(i)].ret = acc + s.value;
            next_value = s.value;
        }
        targets.push_back(std::move(t));
    }
    if (cfg.normalize_advantages) {
        double sum = 0.0;
        long long count = 0;
        for (const auto& t : targets)
            for (const StepTarget& s : t) {
                sum += s.advantage;
                ++count;
            }
        if (count > 0) {
            double mean = sum / static_cast<double>(count);
            double var = 0.0;
            for (const auto& t : targets)
                for (const StepTarget& s : t) var += (s.advantage - mean) * (s.advantage - mean);
            double stddev = std::sqrt(var / static_cast<double>(count));
            for (auto& t : targets)
                for (StepTarget& s : t) s.advantage = (s.advantage - mean) / (stddev + 1e-8);
        }
    }
    return targets;
}

} // namespace

double PpoTrainer::loss_and_grad(const std::vector<Trajectory>& batch, std::vector<double>* grad,
                                 UpdateStats* stats) const {
    if (batch.empty()) throw ValidationError("ppo update: empty batch");
    Layout layout(policy_.layers_, policy_.hidden_);
    if (grad != nullptr) grad->assign(layout.total, 0.0);

    auto targets = compute_targets(batch, cfg_);

    long long total_steps = 0;
    for (const Trajectory& traj : batch) total_steps += static_cast<long long>(traj.steps.size());
    if (total_steps == 0) throw ValidationError("ppo update: batch has no steps");
    double inv_t = 1.0 / static_cast<double>(total_steps);

    double loss = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy_sum = 0.0;
    long long clipped = 0;

    ForwardCache cache;
    std::vector<double> dlogits;
    for (std::size_t bi = 0; bi < batch.size(); ++bi) {
        const Trajectory& traj = batch[bi];
        for (std::size_t si = 0; si < traj.steps.size(); ++si) {
            const StepSample& s = traj.steps[si];
            const StepTarget& tgt = targets[bi][si];
            embed_forward(layout, policy_.params_, s.obs, cache);
            heads_forward(layout, policy_.params_, s.obs, cache);

            std::size_t a = static_cast<std::size_t>(s.action_index);
            double logp_new = cache.logits[a] - cache.logz;
            double ratio = std::exp(logp_new - s.logp);
            double r_lo = 1.0 - cfg_.clip;
            double r_hi = 1.0 + cfg_.clip;
            double surr1 = ratio * tgt.advantage;
            double surr2 = std::clamp(ratio, r_lo, r_hi) * tgt.advantage;
            double surr = std::min(surr1, surr2);
            if (ratio < r_lo || ratio > r_hi) ++clipped;

            double entropy = 0.0;
            for (double pr : cache.probs)
                if (pr > 0.0) entropy -= pr * std::log(pr);

            double v_err = cache.value - tgt.ret;
            loss += inv_t * (-surr + cfg_.value_coef * v_err * v_err - cfg_.entropy_coef * entropy);
            policy_loss += inv_t * -surr;
            value_loss += inv_t * v_err * v_err;
            entropy_sum += inv_t * entropy;

            if (grad != nullptr) {
                // d(-surr)/dlogp_new: zero when the clipped branch is active.
                double dsurr_dratio = surr1 <= surr2 ? tgt.advantage : 0.0;
                double dloss_dlogp = -inv_t * dsurr_dratio * ratio;
                dlogits.assign(cache.probs.size(), 0.0);
                for (std::size_t e = 0; e < cache.probs.size(); ++e) {
                    double indicator = e == a ? 1.0 : 0.0;
                    dlogits[e] += dloss_dlogp * (indicator - cache.probs[e]);
                    // d(-c_e * H)/dlogit_e = c_e * p_e * (log p_e + H)
                    if (cache.probs[e] > 0.0)
                        dlogits[e] += inv_t * cfg_.entropy_coef * cache.probs[e] *
                                      (std::log(cache.probs[e]) + entropy);
                }
                double dvalue = inv_t * cfg_.value_coef * 2.0 * v_err;
                backward(layout, policy_.params_, s.obs, cache, dlogits, dvalue, *grad);
            }
        }
    }

    if (stats != nullptr) {
        stats->total_loss = loss;
        stats->policy_loss = policy_loss;
        stats->value_loss = value_loss;
        stats->entropy = entropy_sum;
        stats->clip_fraction = static_cast<double>(clipped) / static_cast<double>(total_steps);
    }
    return loss;
}

namespace {

void dump_batch(const std::vector<Trajectory>& batch, const std::filesystem::path& path) {
    ordered_json dump = ordered_json::array();
    for (const Trajectory& traj : batch) {
        ordered_json t;
        t["lb0"] = traj.lb0;
        t["makespan"] = traj.makespan;
        ordered_json steps = ordered_json::array();
        for (const StepSample& s : traj.steps) {
            ordered_json st;
            st["action_index"] = s.action_index;
            st["logp"] = s.logp;
            st["value"] = s.value;
            st["reward"] = s.reward;
            steps.push_back(std::move(st));
        }
        t["steps"] = std::move(steps);
        dump.push_back(std::move(t));
    }
    write_file_atomic(path, dump.dump());
}

} // namespace

UpdateStats PpoTrainer::update(const std::vector<Trajectory>& batch) {
    UpdateStats avg;
    std::vector<double> grad;
    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
        UpdateStats stats;
        double loss = loss_and_grad(batch, &grad, &stats);
        bool finite = std::isfinite(loss);
        for (double gv : grad)
            if (!std::isfinite(gv)) {
                finite = false;
                break;
            }
        if (!finite) {
            std::filesystem::path dump_path = "ppo_nan_dump.json";
            dump_batch(batch, dump_path);
            throw ValidationError("ppo update: non-finite loss or gradient; batch dumped to " +
                                  dump_path.string());
        }

        ++adam_t_;
        double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        double bc1 = 1.0 - std::pow(b1, static_cast<double>(adam_t_));
        double bc2 = 1.0 - std::pow(b2, static_cast<double>(adam_t_));
        auto& params = policy_.params_;
        for (std::size_t i = 0; i < params.size(); ++i) {
            adam_m_[i] = b1 * adam_m_[i] + (1.0 - b1) * grad[i];
            adam_v_[i] = b2 * adam_v_[i] + (1.0 - b2) * grad[i] * grad[i];
            double mh = adam_m_[i] / bc1;
            double vh = adam_v_[i] / bc2;
            params[i] -= cfg_.lr * mh / (std::sqrt(vh) + eps);
        }

        avg.total_loss += stats.total_loss / cfg_.epochs;
        avg.policy_loss += stats.policy_loss / cfg_.epochs;
        avg.value_loss += stats.value_loss / cfg_.epochs;
        avg.entropy += stats.entropy / cfg_.epochs;
        avg.clip_fraction += stats.clip_fraction / cfg_.epochs;
    }
    if (!policy_.params_finite()) {
        std::filesystem::path dump_path = "ppo_nan_dump.json";
        dump_batch(batch, dump_path);
        throw ValidationError("ppo update: parameters became non-finite; batch dumped to " +
                              dump_path.string());
    }
    ++updates_done_;
    return avg;
}

} // namespace jsscl

#include "jsscl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "jsscl/parallel.hpp"

namespace jsscl {

using nlohmann::json;
using nlohmann::ordered_json;

void TrainConfig::validate() const {
    if (validation_every < 1) throw ValidationError("train config: validation_every must be >= 1");
    if (eval_workers < 1) throw ValidationError("train config: eval_workers must be >= 1");
    agent.validate();
}

namespace {

ordered_json agent_config_json(const AgentConfig& a) {
    ordered_json j;
    j["layers"] = a.layers;
    j["hidden"] = a.hidden;
    j["clb_scale"] = a.clb_scale;
    j["seed"] = a.seed;
    j["lr"] = a.lr;
    j["clip"] = a.clip;
    j["gamma"] = a.gamma;
    j["gae_lambda"] = a.gae_lambda;
    j["entropy_coef"] = a.entropy_coef;
    j["value_coef"] = a.value_coef;
    j["epochs"] = a.epochs;
    j["batch_episodes"] = a.batch_episodes;
    j["normalize_advantages"] = a.normalize_advantages;
    return j;
}

std::string curriculum_content_hash(const Curriculum& cur, const std::string& dataset_hash) {
    std::string buf = dataset_hash + "|" + cur.first + "|" + cur.second + "|";
    for (int id : cur.order) {
        buf += std::to_string(id);
        buf.push_back(',');
    }
    return to_hex(fnv1a64(buf));
}

struct EvalSetup {
    Dataset instances;
    std::unordered_map<int, int> proved_optimum; // id -> optimum
};

EvalRecord evaluate_policy(const Policy& policy, const EvalSetup& test, long long seen,
                           int workers) {
    int n = static_cast<int>(test.instances.size());
    std::vector<int> makespans(static_cast<std::size_t>(n));
    parallel_for(n, workers, [&](int i) {
        makespans[static_cast<std::size_t>(i)] =
            greedy_makespan(test.instances[static_cast<std::size_t>(i)], policy);
    });
    EvalRecord rec;
    rec.instances_seen = seen;
    double gap_sum = 0.0;
    long long gap_count = 0;
    double ms_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        int ms = makespans[static_cast<std::size_t>(i)];
        ms_sum += ms;
        auto it = test.proved_optimum.find(test.instances[static_cast<std::size_t>(i)].id);
        if (it == test.proved_optimum.end()) {
            ++rec.excluded;
            continue;
        }
        gap_sum += gap(ms, it->second);
        ++gap_count;
    }
    if (gap_count == 0)
        throw ValidationError("evaluation: no test instance has a proved optimum");
    rec.mean_gap = gap_sum / static_cast<double>(gap_count);
    rec.mean_makespan = ms_sum / static_cast<double>(n);
    return rec;
}

ordered_json manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["version"] = 1;
    j["run_id"] = m.run_id;
    j["status"] = m.status;
    j["curriculum_first"] = m.curriculum_first;
    j["curriculum_second"] = m.curriculum_second;
    j["dataset_seed"] = m.dataset_seed;
    j["init_seed"] = m.init_seed;
    j["config"] = m.config;
    ordered_json evals = ordered_json::array();
    for (const EvalRecord& e : m.evals) {
        ordered_json rec;
        rec["instances_seen"] = e.instances_seen;
        rec["mean_gap"] = e.mean_gap;
        rec["mean_makespan"] = e.mean_makespan;
        rec["excluded"] = e.excluded;
        evals.push_back(std::move(rec));
    }
    j["evals"] = std::move(evals);
    j["updates"] = m.updates;
    j["checkpoint_file"] = m.checkpoint_file;
    j["evals_file"] = m.evals_file;
    j["code_version"] = m.code_version;
    j["wall_clock_s"] = m.wall_clock_s;
    return j;
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.status = j.at("status").get<std::string>();
    m.curriculum_first = j.at("curriculum_first").get<std::string>();
    m.curriculum_second = j.at("curriculum_second").get<std::string>();
    m.dataset_seed = j.at("dataset_seed").get<std::uint64_t>();
    m.init_seed = j.at("init_seed").get<std::uint64_t>();
    m.config = j.at("config");
    for (const auto& rec : j.at("evals")) {
        EvalRecord e;
        e.instances_seen = rec.at("instances_seen").get<long long>();
        e.mean_gap = rec.at("mean_gap").get<double>();
        e.mean_makespan = rec.at("mean_makespan").get<double>();
        e.excluded = rec.at("excluded").get<int>();
        m.evals.push_back(e);
    }
    m.updates = j.at("updates").get<std::uint64_t>();
    m.checkpoint_file = j.at("checkpoint_file").get<std::string>();
    m.evals_file = j.at("evals_file").get<std::string>();
    m.code_version = j.at("code_version").get<std::string>();
    m.wall_clock_s = j.at("wall_clock_s").get<double>();
    return m;
}

} // namespace

std::string compute_run_id(const std::string& dataset_hash, const std::string& curriculum_hash,
                           const std::string& test_hash, int validation_every,
                           const AgentConfig& agent) {
    ordered_json key;
    key["dataset_hash"] = dataset_hash;
    key["curriculum_hash"] = curriculum_hash;
    key["test_hash"] = test_hash;
    key["validation_every"] = validation_every;
    key["agent"] = agent_config_json(agent);
    return to_hex(fnv1a64(key.dump()));
}

nlohmann::ordered_json manifest_core(const ordered_json& manifest_json) {
    ordered_json core = manifest_json;
    core.erase("wall_clock_s");
    return core;
}

RunManifest read_manifest(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": parse error: " + std::string(e.what()));
    }
    try {
        return manifest_from_json(j);
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": bad manifest: " + std::string(e.what()));
    }
}

std::vector<RunManifest> load_runs(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() &&
            entry.path().filename().string().ends_with(".manifest.json"))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunManifest> runs;
    runs.reserve(files.size());
    for (const auto& f : files) runs.push_back(read_manifest(f));
    return runs;
}

std::string evals_csv(const RunManifest& m) {
    std::string out =
        "run_id,curriculum_first,curriculum_second,dataset_seed,init_seed,instances_seen,"
        "mean_gap,mean_makespan\n";
    char buf[256];
    for (const EvalRecord& e : m.evals) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%s,%llu,%llu,%lld,%.6f,%.6f\n", m.run_id.c_str(),
                      m.curriculum_first.c_str(), m.curriculum_second.c_str(),
                      static_cast<unsigned long long>(m.dataset_seed),
                      static_cast<unsigned long long>(m.init_seed), e.instances_seen, e.mean_gap,
                      e.mean_makespan);
        out += buf;
    }
    return out;
}

RunManifest train_run(const TrainConfig& cfg) {
    cfg.validate();
    auto t0 = std::chrono::steady_clock::now();

    LoadedDataset train = read_dataset(cfg.dataset_path);
    if (train.instances.empty()) throw ValidationError("train_run: empty training dataset");
    std::string train_hash = dataset_hash(train.instances);

    LoadedCurriculum cur = read_curriculum(cfg.curriculum_path);
    if (cur.dataset_hash != train_hash)
        throw ValidationError("train_run: curriculum was built for dataset " + cur.dataset_hash +
                              " but the dataset hashes to " + train_hash);
    if (cur.cur.order.empty()) throw ValidationError("train_run: curriculum order is empty");

    LoadedDataset test = read_dataset(cfg.test_path);
    if (test.instances.empty()) throw ValidationError("train_run: empty test dataset");
    std::string test_hash = dataset_hash(test.instances);
    if (test_hash == train_hash)
        throw ValidationError("train_run: test dataset is identical to the training dataset");

    EvalSetup eval_setup;
    eval_setup.instances = test.instances;
    for (const OptimaRecord& r : read_optima(cfg.test_optima_path))
        if (r.proved) eval_setup.proved_optimum[r.id] = r.optimum;

    std::unordered_map<int, std::size_t> index_by_id;
    for (std::size_t i = 0; i < train.instances.size(); ++i)
        index_by_id[train.instances[i].id] = i;
    for (int id : cur.cur.order)
        if (index_by_id.find(id) == index_by_id.end())
            throw ValidationError("train_run: curriculum references unknown instance id " +
                                  std::to_string(id));

    std::string cur_hash = curriculum_content_hash(cur.cur, cur.dataset_hash);
    std::string run_id =
        compute_run_id(train_hash, cur_hash, test_hash, cfg.validation_every, cfg.agent);

    std::filesystem::create_directories(cfg.out_dir);
    std::filesystem::path manifest_path = cfg.out_dir / (run_id + ".manifest.json");
    if (std::filesystem::exists(manifest_path)) {
        RunManifest existing = read_manifest(manifest_path);
        if (existing.status == "complete") return existing;
    }

    RunManifest manifest;
    manifest.run_id = run_id;
    manifest.curriculum_first = cur.cur.first;
    manifest.curriculum_second = cur.cur.second;
    manifest.dataset_seed = train.cfg.seed;
    manifest.init_seed = cfg.agent.seed;
    manifest.code_version = JSSCL_VERSION;
    manifest.config["dataset_hash"] = train_hash;
    manifest.config["curriculum_hash"] = cur_hash;
    manifest.config["test_hash"] = test_hash;
    manifest.config["validation_every"] = cfg.validation_every;
    manifest.config["agent"] = agent_config_json(cfg.agent);
    manifest.config["dataset_path"] = cfg.dataset_path.string();
    manifest.config["curriculum_path"] = cfg.curriculum_path.string();
    manifest.config["test_path"] = cfg.test_path.string();

    Policy policy(cfg.agent.layers, cfg.agent.hidden, cfg.agent.clb_scale, cfg.agent.seed);
    PpoTrainer trainer(std::move(policy), cfg.agent);
    Rng action_rng(derive_seed(cfg.agent.seed, 0xac10ull));

    manifest.status = "complete";
    std::vector<Trajectory> batch;
    std::vector<double> last_good_params = trainer.policy().params();
    long long seen = 0;
    for (int id : cur.cur.order) {
        const JsspInstance& inst = train.instances[index_by_id[id]];
        batch.push_back(rollout(inst, trainer.policy(), SelectMode::sample, action_rng));
        if (static_cast<int>(batch.size()) == cfg.agent.batch_episodes) {
            last_good_params = trainer.policy().params();
            try {
                trainer.update(batch);
            } catch (const ValidationError&) {
                trainer.policy().params() = last_good_params;
                manifest.status = "nan_abort";
            }
            batch.clear();
        }
        if (manifest.status == "nan_abort") break;
        ++seen;
        if (seen % cfg.validation_every == 0)
            manifest.evals.push_back(
                evaluate_policy(trainer.policy(), eval_setup, seen, cfg.eval_workers));
    }
    if (manifest.status != "nan_abort" && !batch.empty()) {
        last_good_params = trainer.policy().params();
        try {
            trainer.update(batch);
        } catch (const ValidationError&) {
            trainer.policy().params() = last_good_params;
            manifest.status = "nan_abort";
        }
    }
    manifest.updates = trainer.updates_done();

    manifest.checkpoint_file = run_id + ".checkpoint.json";
    manifest.evals_file = run_id + ".evals.csv";
    trainer.policy().save(cfg.out_dir / manifest.checkpoint_file, trainer.updates_done(),
                          action_rng.save_state());
    write_file_atomic(cfg.out_dir / manifest.evals_file, evals_csv(manifest));

    manifest.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string text = manifest_to_json(manifest).dump(2);
    text.push_back('\n');
    write_file_atomic(manifest_path, text);
    return manifest;
}

std::vector<RunManifest> experiment_grid(const GridConfig& cfg) {
    if (cfg.dataset_paths.empty()) throw ValidationError("grid: no datasets given");
    std::filesystem::create_directories(cfg.out_dir);

    struct PlannedRun {
        TrainConfig train;
    };
    std::vector<PlannedRun> plan;

    for (const auto& ds_path : cfg.dataset_paths) {
        LoadedDataset ds = read_dataset(ds_path);
        if (ds.instances.size() % 2 != 0)
            throw ValidationError("grid: dataset " + ds_path.string() + " has odd size");
        std::string ds_hash = dataset_hash(ds.instances);

        // DTS and curricula are cached per dataset content.
        std::filesystem::path dts_path = cfg.out_dir / ("dts_" + ds_hash + ".json");
        DtsResult dts;
        if (std::filesystem::exists(dts_path)) {
            dts = read_dts(dts_path).dts;
        } else {
            dts = compute_dts(ds.instances, nullptr, cfg.eval_workers);
            write_dts(dts, ds_hash, dts_path);
        }
        auto elements = build_elements(dts.records);

        auto plan_one = [&](const Curriculum& cur, std::uint64_t init_seed,
                            std::optional<std::uint64_t> shuffle_seed) {
            std::filesystem::path cur_path =
                cfg.out_dir /
                ("cur_" + ds_hash + "_" + cur.first + "_" + cur.second +
                 (shuffle_seed ? "_" + std::to_string(*shuffle_seed) : "") + ".json");
            if (!std::filesystem::exists(cur_path))
                write_curriculum(cur, ds_hash, to_string(dts.best), cur_path, shuffle_seed);
            TrainConfig tc;
            tc.dataset_path = ds_path;
            tc.curriculum_path = cur_path;
            tc.test_path = cfg.test_path;
            tc.test_optima_path = cfg.test_optima_path;
            tc.validation_every = cfg.validation_every;
            tc.agent = cfg.agent;
            tc.agent.seed = init_seed;
            tc.eval_workers = cfg.parallel_runs > 1 ? 1 : cfg.eval_workers;
            tc.out_dir = cfg.out_dir;
            plan.push_back({std::move(tc)});
        };

        for (const Curriculum& cur : all_curricula(elements)) plan_one(cur, cfg.agent.seed, {});
        for (int b = 0; b < cfg.baseline_runs; ++b) {
            std::uint64_t shuffle_seed = derive_seed(ds.cfg.seed, 1000 + static_cast<std::uint64_t>(b));
            Curriculum baseline = shuffled_baseline(static_cast<int>(ds.instances.size()), shuffle_seed);
            plan_one(baseline, cfg.agent.seed + static_cast<std::uint64_t>(b), shuffle_seed);
        }
    }

    std::vector<RunManifest> manifests(plan.size());
    parallel_for(static_cast<int>(plan.size()), cfg.parallel_runs,
                 [&](int i) { manifests[static_cast<std::size_t>(i)] = train_run(plan[static_cast<std::size_t>(i)].train); });

    // Combined eval log, rebuilt in plan order on every invocation.
    std::string combined =
        "run_id,curriculum_first,curriculum_second,dataset_seed,init_seed,instances_seen,"
        "mean_gap,mean_makespan\n";
    for (const RunManifest& m : manifests) {
        std::string csv = evals_csv(m);
        combined += csv.substr(csv.find('\n') + 1);
    }
    write_file_atomic(cfg.out_dir / "grid_evals.csv", combined);
    return manifests;
}

DipPoint detect_first_dip(const std::vector<EvalRecord>& curve) {
    if (curve.size() < 3)
        throw ValidationError("detect_first_dip: need at least 3 records, got " +
                              std::to_string(curve.size()));
    int n = static_cast<int>(curve.size());
    for (int i = 0; i < n; ++i) {
        double g = curve[static_cast<std::size_t>(i)].mean_gap;
        bool left_ok = i == 0 || g <= curve[static_cast<std::size_t>(i - 1)].mean_gap;
        bool right_ok = i == n - 1 || g <= curve[static_cast<std::size_t>(i + 1)].mean_gap;
        if (left_ok && right_ok)
            return DipPoint{i, curve[static_cast<std::size_t>(i)].instances_seen, g};
    }
    throw std::logic_error("detect_first_dip: no dip found (impossible)");
}

double second_half_impact(const std::vector<EvalRecord>& curve, long long halfway_instances) {
    if (curve.size() < 2) throw ValidationError("second_half_impact: need at least 2 records");
    long long spacing = curve[1].instances_seen - curve[0].instances_seen;
    if (spacing <= 0) throw ValidationError("second_half_impact: non-increasing curve positions");
    const EvalRecord* at = nullptr;
    const EvalRecord* after = nullptr;
    for (const EvalRecord& e : curve) {
        if (e.instances_seen == halfway_instances) at = &e;
        if (e.instances_seen == halfway_instances + spacing) after = &e;
    }
    if (at == nullptr || after == nullptr)
        throw ValidationError("second_half_impact: missing records at " +
                              std::to_string(halfway_instances) + " and/or " +
                              std::to_string(halfway_instances + spacing));
    return after->mean_gap - at->mean_gap;
}

RankAnalysis rank_analysis(const std::map<DeltaKey, double>& deltas) {
    const std::array<std::string, 4> ce_names = {"e_n", "e_r", "h_n", "h_r"};

    // Group deltas by (dataset, first CE); every group needs all four seconds.
    std::map<std::pair<std::string, std::string>, std::map<std::string, double>> groups;
    for (const auto& [key, delta] : deltas) {
        const auto& [dataset, first, second] = key;
        groups[{dataset, first}][second] = delta;
    }
    std::string missing;
    for (const auto& [gk, members] : groups) {
        for (const auto& ce : ce_names) {
            if (members.find(ce) == members.end())
                missing += " (" + gk.first + ", " + gk.second + ", " + ce + ")";
        }
    }
    if (!missing.empty())
        throw ValidationError("rank_analysis: incomplete groups, missing cells:" + missing);

    RankAnalysis ra;
    ra.groups = static_cast<int>(groups.size());
    for (const auto& ce : ce_names) {
        ra.rank_counts[ce] = {0, 0, 0, 0};
        ra.drops[ce] = 0;
        ra.rises[ce] = 0;
        ra.zeros[ce] = 0;
    }
    for (const auto& [gk, members] : groups) {
        for (const auto& ce : ce_names) {
            double mine = members.at(ce);
            int rank = 1;
            for (const auto& other : ce_names)
                if (members.at(other) < mine) ++rank;
            ra.rank_counts[ce][static_cast<std::size_t>(rank - 1)] += 1;
            if (mine < 0.0)
                ra.drops[ce] += 1;
            else if (mine > 0.0)
                ra.rises[ce] += 1;
            else
                ra.zeros[ce] += 1;
        }
    }
    return ra;
}

std::string rank_analysis_csv(const RankAnalysis& ra) {
    std::string out = "second_ce,rank1,rank2,rank3,rank4,drops,rises,zeros,groups\n";
    char buf[160];
    for (const auto& [ce, counts] : ra.rank_counts) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%d,%d,%d,%d,%d\n", ce.c_str(), counts[0],
                      counts[1], counts[2], counts[3], ra.drops.at(ce), ra.rises.at(ce),
                      ra.zeros.at(ce), ra.groups);
        out += buf;
    }
    return out;
}

Summary summarize(const std::vector<RunManifest>& runs) {
    if (runs.empty()) throw ValidationError("summarize: no runs");
    Summary s;
    for (const RunManifest& m : runs) {
        if (m.evals.empty()) continue;
        CurveStats cs;
        cs.run_id = m.run_id;
        cs.dataset_label = std::to_string(m.dataset_seed);
        cs.first = m.curriculum_first;
        cs.second = m.curriculum_second;
        cs.init_seed = m.init_seed;
        cs.final_gap = m.evals.back().mean_gap;
        cs.best_gap = m.evals.front().mean_gap;
        for (const EvalRecord& e : m.evals) cs.best_gap = std::min(cs.best_gap, e.mean_gap);
        if (m.evals.size() >= 3) {
            cs.dip = detect_first_dip(m.evals);
            cs.min_at_dip = cs.dip.gap <= cs.best_gap;
        } else {
            cs.dip = DipPoint{0, m.evals.front().instances_seen, m.evals.front().mean_gap};
            cs.min_at_dip = cs.dip.gap <= cs.best_gap;
        }
        s.runs.push_back(cs);
    }
    if (s.runs.empty()) throw ValidationError("summarize: no runs with evaluations");

    double baseline_best = 0.0, curriculum_best = 0.0, baseline_dip = 0.0, hr_dip = 0.0;
    bool any_baseline = false, any_curriculum = false, any_hr = false;
    int min_at_dip_count = 0;
    for (const CurveStats& cs : s.runs) {
        if (cs.min_at_dip) ++min_at_dip_count;
        if (cs.first == "shuffled") {
            if (!any_baseline || cs.best_gap < baseline_best) baseline_best = cs.best_gap;
            if (!any_baseline || cs.dip.gap < baseline_dip) baseline_dip = cs.dip.gap;
            any_baseline = true;
        } else {
            if (!any_curriculum || cs.best_gap < curriculum_best) curriculum_best = cs.best_gap;
            any_curriculum = true;
            if (cs.first == "h_r") {
                if (!any_hr || cs.dip.gap < hr_dip) hr_dip = cs.dip.gap;
                any_hr = true;
            }
        }
    }
    s.frac_global_min_in_first_dip =
        static_cast<double>(min_at_dip_count) / static_cast<double>(s.runs.size());
    if (any_baseline && any_curriculum) {
        s.has_baseline = true;
        s.baseline_best_gap = baseline_best;
        s.curriculum_best_gap = curriculum_best;
        s.improvement_rel = (baseline_best - curriculum_best) / baseline_best;
        s.improvement_pp = baseline_best - curriculum_best;
    }
    if (any_baseline && any_hr) {
        s.has_hr = true;
        s.baseline_dip_gap = baseline_dip;
        s.hr_dip_gap = hr_dip;
        s.dip_improvement_rel = (baseline_dip - hr_dip) / baseline_dip;
        s.dip_improvement_pp = baseline_dip - hr_dip;
    }
    return s;
}

std::string summary_runs_csv(const Summary& s) {
    std::string out =
        "run_id,dataset,first,second,init_seed,best_gap,final_gap,dip_instances,dip_gap,"
        "min_at_dip\n";
    char buf[256];
    for (const CurveStats& cs : s.runs) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%s,%s,%llu,%.6f,%.6f,%lld,%.6f,%d\n",
                      cs.run_id.c_str(), cs.dataset_label.c_str(), cs.first.c_str(),
                      cs.second.c_str(), static_cast<unsigned long long>(cs.init_seed), cs.best_gap,
                      cs.final_gap, cs.dip.instances_seen, cs.dip.gap, cs.min_at_dip ? 1 : 0);
        out += buf;
    }
    return out;
}

std::string summary_stats_csv(const Summary& s) {
    char buf[128];
    std::string out = "stat,value\n";
    auto add = [&](const char* name, double v) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f\n", name, v);
        out += buf;
    };
    add("frac_global_min_in_first_dip", s.frac_global_min_in_first_dip);
    if (s.has_baseline) {
        add("baseline_best_gap", s.baseline_best_gap);
        add("curriculum_best_gap", s.curriculum_best_gap);
        add("improvement_rel", s.improvement_rel);
        add("improvement_pp", s.improvement_pp);
    }
    if (s.has_hr) {
        add("baseline_dip_gap", s.baseline_dip_gap);
        add("hr_dip_gap", s.hr_dip_gap);
        add("dip_improvement_rel", s.dip_improvement_rel);
        add("dip_improvement_pp", s.dip_improvement_pp);
    }
    return out;
}

std::string plot_script(const std::string& evals_glob) {
    std::string script = R"py(#!/usr/bin/env python3
"""Plot validation curves from the eval CSVs produced by training runs."""
import csv
import glob
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

pattern = sys.argv[1] if len(sys.argv) > 1 else ")py";
    script += evals_glob;
    script += R"py("
curves = defaultdict(list)
for path in sorted(glob.glob(pattern)):
    with open(path) as fh:
        for row in csv.DictReader(fh):
            label = f"[{row['curriculum_first']},{row['curriculum_second']}] seed={row['init_seed']}"
            curves[label].append((int(row["instances_seen"]), float(row["mean_gap"])))

fig, ax = plt.subplots(figsize=(9, 5))
for label, points in sorted(curves.items()):
    points.sort()
    ax.plot([p[0] for p in points], [p[1] for p in points], label=label, linewidth=1.2)
ax.set_xlabel("training instances seen")
ax.set_ylabel("mean optimality gap (test set)")
ax.legend(fontsize=7, ncol=2)
ax.grid(True, alpha=0.3)
fig.tight_layout()
out = sys.argv[2] if len(sys.argv) > 2 else "curves.png"
fig.savefig(out, dpi=150)
print(f"wrote {out}")
)py";
    return script;
}

} // namespace jsscl

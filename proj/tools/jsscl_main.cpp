// jsscl: generate JSSP datasets, grade them with dispatching rules, solve
// them exactly, build training curricula, train the scheduling agent, and
// analyze the resulting learning curves. Commands communicate via files only.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jsscl/curriculum.hpp"
#include "jsscl/env.hpp"
#include "jsscl/exact.hpp"
#include "jsscl/harness.hpp"
#include "jsscl/instance.hpp"
#include "jsscl/pdr.hpp"

using nlohmann::ordered_json;

namespace {

void echo_config(const std::string& command, const ordered_json& resolved) {
    ordered_json line;
    line["command"] = command;
    line["config"] = resolved;
    std::cout << "resolved " << line.dump() << "\n";
}

jsscl::TimeDist make_dist(const std::string& kind, int low, int high, double mean, double stddev) {
    jsscl::TimeDist dist;
    if (kind == "uniform") {
        dist.kind = jsscl::TimeDist::Kind::uniform;
    } else if (kind == "normal") {
        dist.kind = jsscl::TimeDist::Kind::normal;
        dist.mean = mean;
        dist.stddev = stddev;
    } else {
        throw jsscl::ValidationError("unknown distribution '" + kind + "' (uniform|normal)");
    }
    dist.low = low;
    dist.high = high;
    dist.validate();
    return dist;
}

struct AgentFlags {
    int layers = 2;
    int hidden = 64;
    double clb_scale = 0.0; // 0 = derive from the dataset header
    std::uint64_t seed = 1;
    double lr = 2e-4;
    double clip = 0.2;
    double gae_lambda = 0.98;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    int epochs = 1;
    int batch = 1;
    bool no_adv_norm = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--layers", layers, "Message-passing rounds");
        cmd->add_option("--hidden", hidden, "Embedding width");
        cmd->add_option("--clb-scale", clb_scale, "Feature scale; 0 derives it from the dataset");
        cmd->add_option("--agent-seed", seed, "Parameter init / sampling seed");
        cmd->add_option("--lr", lr, "Adam step size");
        cmd->add_option("--clip", clip, "PPO clip range");
        cmd->add_option("--gae-lambda", gae_lambda, "GAE lambda");
        cmd->add_option("--entropy-coef", entropy_coef, "Entropy bonus coefficient");
        cmd->add_option("--value-coef", value_coef, "Value loss coefficient");
        cmd->add_option("--epochs", epochs, "Optimizer epochs per batch");
        cmd->add_option("--batch", batch, "Episodes per update batch");
        cmd->add_flag("--no-adv-norm", no_adv_norm, "Disable advantage normalization");
    }

    jsscl::AgentConfig resolve(const jsscl::GenConfig& dataset_cfg) const {
        jsscl::AgentConfig a;
        a.layers = layers;
        a.hidden = hidden;
        a.clb_scale = clb_scale > 0.0
                          ? clb_scale
                          : jsscl::default_clb_scale(dataset_cfg.n_machines, dataset_cfg.time_dist);
        a.seed = seed;
        a.lr = lr;
        a.clip = clip;
        a.gae_lambda = gae_lambda;
        a.entropy_coef = entropy_coef;
        a.value_coef = value_coef;
        a.epochs = epochs;
        a.batch_episodes = batch;
        a.normalize_advantages = !no_adv_norm;
        return a;
    }
};

ordered_json agent_json(const jsscl::AgentConfig& a) {
    ordered_json j;
    j["layers"] = a.layers;
    j["hidden"] = a.hidden;
    j["clb_scale"] = a.clb_scale;
    j["seed"] = a.seed;
    j["lr"] = a.lr;
    j["clip"] = a.clip;
    j["gae_lambda"] = a.gae_lambda;
    j["entropy_coef"] = a.entropy_coef;
    j["value_coef"] = a.value_coef;
    j["epochs"] = a.epochs;
    j["batch_episodes"] = a.batch_episodes;
    j["normalize_advantages"] = a.normalize_advantages;
    return j;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"curriculum-trained reinforcement learning for job shop scheduling"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "Generate a JSSP dataset file");
    int g_jobs = 6, g_machines = 6, g_count = 1000, g_low = 1, g_high = 99, g_parallel = 1;
    double g_mean = 50.0, g_stddev = 25.0;
    std::uint64_t g_seed = 1;
    std::string g_dist = "uniform", g_out;
    gen->add_option("--jobs", g_jobs, "Jobs per instance")->capture_default_str();
    gen->add_option("--machines", g_machines, "Machines per instance")->capture_default_str();
    gen->add_option("--count", g_count, "Number of instances")->capture_default_str();
    gen->add_option("--seed", g_seed, "Master seed")->capture_default_str();
    gen->add_option("--dist", g_dist, "uniform|normal")->capture_default_str();
    gen->add_option("--low", g_low, "Minimum processing time")->capture_default_str();
    gen->add_option("--high", g_high, "Maximum processing time")->capture_default_str();
    gen->add_option("--mean", g_mean, "Normal mean")->capture_default_str();
    gen->add_option("--stddev", g_stddev, "Normal stddev")->capture_default_str();
    gen->add_option("--parallel", g_parallel, "Worker threads")->capture_default_str();
    gen->add_option("--out", g_out, "Output dataset path")->required();
    gen->callback([&] {
        jsscl::GenConfig cfg;
        cfg.n_jobs = g_jobs;
        cfg.n_machines = g_machines;
        cfg.time_dist = make_dist(g_dist, g_low, g_high, g_mean, g_stddev);
        cfg.seed = g_seed;
        ordered_json rc;
        rc["n_jobs"] = cfg.n_jobs;
        rc["n_machines"] = cfg.n_machines;
        rc["time_dist"] = cfg.time_dist.to_json();
        rc["seed"] = cfg.seed;
        rc["count"] = g_count;
        rc["out"] = g_out;
        echo_config("gen", rc);
        jsscl::Dataset ds = jsscl::generate_dataset(cfg, g_count, g_parallel);
        jsscl::write_dataset(ds, cfg, g_out);
        std::cout << "wrote " << ds.size() << " instances to " << g_out
                  << " (hash " << jsscl::dataset_hash(ds) << ")\n";
    });

    // ---- pdr ----
    auto* pdr = app.add_subcommand("pdr", "Evaluate all dispatching rules against optima");
    std::string p_data, p_optima, p_out;
    std::uint64_t p_seed = 0;
    int p_parallel = 1;
    pdr->add_option("--data", p_data, "Dataset path")->required();
    pdr->add_option("--optima", p_optima, "Optima cache path")->required();
    pdr->add_option("--seed", p_seed, "Seed for the RANDOM rule")->capture_default_str();
    pdr->add_option("--parallel", p_parallel, "Worker threads")->capture_default_str();
    pdr->add_option("--out", p_out, "CSV output path (printed if omitted)");
    pdr->callback([&] {
        ordered_json rc;
        rc["data"] = p_data;
        rc["optima"] = p_optima;
        rc["seed"] = p_seed;
        echo_config("pdr", rc);
        jsscl::LoadedDataset ds = jsscl::read_dataset(p_data);
        auto optima_records = jsscl::read_optima(p_optima);
        std::vector<int> optima;
        optima.reserve(ds.instances.size());
        std::map<int, jsscl::OptimaRecord> by_id;
        for (const auto& r : optima_records) by_id[r.id] = r;
        for (const auto& inst : ds.instances) {
            auto it = by_id.find(inst.id);
            if (it == by_id.end() || !it->second.proved)
                throw jsscl::ValidationError("pdr: no proved optimum for instance " +
                                             std::to_string(inst.id));
            optima.push_back(it->second.optimum);
        }
        jsscl::SuiteResult suite =
            jsscl::evaluate_suite(ds.instances, optima, p_seed, p_parallel);
        std::string csv = jsscl::suite_csv(suite);
        if (!p_out.empty()) jsscl::write_file_atomic(p_out, csv);
        std::cout << csv;
        std::cout << "best rule: " << jsscl::to_string(suite.best) << "\n";
    });

    // ---- exact ----
    auto* exact = app.add_subcommand("exact", "Solve a dataset to proven optimality");
    std::string e_data, e_out;
    std::uint64_t e_nodes = 10'000'000;
    double e_time = 60.0;
    int e_parallel = 1;
    exact->add_option("--data", e_data, "Dataset path")->required();
    exact->add_option("--out", e_out, "Optima cache output path")->required();
    exact->add_option("--node-limit", e_nodes, "Nodes per instance")->capture_default_str();
    exact->add_option("--time-limit", e_time, "Seconds per instance")->capture_default_str();
    exact->add_option("--parallel", e_parallel, "Worker threads")->capture_default_str();
    exact->callback([&] {
        ordered_json rc;
        rc["data"] = e_data;
        rc["out"] = e_out;
        rc["node_limit"] = e_nodes;
        rc["time_limit_s"] = e_time;
        echo_config("exact", rc);
        jsscl::LoadedDataset ds = jsscl::read_dataset(e_data);
        jsscl::ExactLimits limits{e_nodes, e_time};
        auto records = jsscl::solve_dataset(ds.instances, limits, e_parallel);
        jsscl::write_optima(records, e_out);
        int proved = 0;
        for (const auto& r : records) proved += r.proved ? 1 : 0;
        std::cout << "solved " << records.size() << " instances, " << proved
                  << " proved optimal, cache at " << e_out << "\n";
    });

    // ---- dts ----
    auto* dts = app.add_subcommand("dts", "Grade a dataset by difficulty to solve");
    std::string d_data, d_optima, d_out;
    int d_parallel = 1;
    dts->add_option("--data", d_data, "Dataset path")->required();
    dts->add_option("--optima", d_optima, "Optional optima cache (rule choice by mean gap)");
    dts->add_option("--parallel", d_parallel, "Worker threads")->capture_default_str();
    dts->add_option("--out", d_out, "DTS output path")->required();
    dts->callback([&] {
        ordered_json rc;
        rc["data"] = d_data;
        rc["optima"] = d_optima;
        rc["out"] = d_out;
        echo_config("dts", rc);
        jsscl::LoadedDataset ds = jsscl::read_dataset(d_data);
        std::vector<jsscl::OptimaRecord> optima;
        jsscl::DtsResult result;
        if (!d_optima.empty()) {
            optima = jsscl::read_optima(d_optima);
            result = jsscl::compute_dts(ds.instances, &optima, d_parallel);
        } else {
            result = jsscl::compute_dts(ds.instances, nullptr, d_parallel);
        }
        jsscl::write_dts(result, jsscl::dataset_hash(ds.instances), d_out);
        std::cout << "graded " << result.records.size() << " instances with best rule "
                  << jsscl::to_string(result.best) << ", wrote " << d_out << "\n";
    });

    // ---- curriculum ----
    auto* cur = app.add_subcommand("curriculum", "Build a curriculum manifest from DTS records");
    std::string c_dts, c_first, c_second, c_out;
    bool c_baseline = false;
    std::uint64_t c_seed = 1;
    cur->add_option("--dts", c_dts, "DTS file path")->required();
    cur->add_option("--first", c_first, "First element: e_n|e_r|h_n|h_r");
    cur->add_option("--second", c_second, "Second element: e_n|e_r|h_n|h_r");
    cur->add_flag("--baseline", c_baseline, "Emit a shuffled baseline order instead");
    cur->add_option("--seed", c_seed, "Shuffle seed (baseline only)")->capture_default_str();
    cur->add_option("--out", c_out, "Curriculum manifest output path")->required();
    cur->callback([&] {
        ordered_json rc;
        rc["dts"] = c_dts;
        rc["first"] = c_first;
        rc["second"] = c_second;
        rc["baseline"] = c_baseline;
        rc["seed"] = c_seed;
        rc["out"] = c_out;
        echo_config("curriculum", rc);
        jsscl::LoadedDts loaded = jsscl::read_dts(c_dts);
        if (c_baseline) {
            jsscl::Curriculum baseline = jsscl::shuffled_baseline(
                static_cast<int>(loaded.dts.records.size()), c_seed);
            jsscl::write_curriculum(baseline, loaded.dataset_hash,
                                    jsscl::to_string(loaded.dts.best), c_out, c_seed);
        } else {
            if (c_first.empty() || c_second.empty())
                throw jsscl::ValidationError(
                    "curriculum: --first and --second are required without --baseline");
            auto elements = jsscl::build_elements(loaded.dts.records);
            jsscl::Curriculum built =
                jsscl::build_curriculum(elements, jsscl::element_from_string(c_first),
                                        jsscl::element_from_string(c_second));
            jsscl::write_curriculum(built, loaded.dataset_hash,
                                    jsscl::to_string(loaded.dts.best), c_out);
        }
        std::cout << "wrote curriculum manifest " << c_out << "\n";
    });

    // ---- train ----
    auto* train = app.add_subcommand("train", "Train one agent over a curriculum");
    std::string t_data, t_cur, t_test, t_test_optima, t_out_dir = ".";
    int t_validate = 2000, t_eval_workers = 1;
    AgentFlags t_agent;
    train->add_option("--data", t_data, "Training dataset path")->required();
    train->add_option("--curriculum", t_cur, "Curriculum manifest path")->required();
    train->add_option("--test", t_test, "Test dataset path")->required();
    train->add_option("--test-optima", t_test_optima, "Optima cache for the test set")->required();
    train->add_option("--validate-every", t_validate, "Instances between validations")
        ->capture_default_str();
    train->add_option("--eval-workers", t_eval_workers, "Threads for validation rollouts")
        ->capture_default_str();
    train->add_option("--out-dir", t_out_dir, "Output directory")->capture_default_str();
    t_agent.add_to(train);
    train->callback([&] {
        jsscl::LoadedDataset header_probe = jsscl::read_dataset(t_data);
        jsscl::TrainConfig tc;
        tc.dataset_path = t_data;
        tc.curriculum_path = t_cur;
        tc.test_path = t_test;
        tc.test_optima_path = t_test_optima;
        tc.validation_every = t_validate;
        tc.agent = t_agent.resolve(header_probe.cfg);
        tc.eval_workers = t_eval_workers;
        tc.out_dir = t_out_dir;
        ordered_json rc;
        rc["data"] = t_data;
        rc["curriculum"] = t_cur;
        rc["test"] = t_test;
        rc["test_optima"] = t_test_optima;
        rc["validate_every"] = t_validate;
        rc["out_dir"] = t_out_dir;
        rc["agent"] = agent_json(tc.agent);
        echo_config("train", rc);
        jsscl::RunManifest m = jsscl::train_run(tc);
        std::cout << "run " << m.run_id << " status " << m.status << " with " << m.evals.size()
                  << " validations\n";
        if (!m.evals.empty())
            std::printf("final mean gap %.4f (mean makespan %.2f)\n", m.evals.back().mean_gap,
                        m.evals.back().mean_makespan);
        std::cout << "eval log: " << (tc.out_dir / m.evals_file).string() << "\n";
    });

    // ---- grid ----
    auto* grid = app.add_subcommand("grid", "Run the full curriculum-vs-baseline protocol");
    std::vector<std::string> gr_data;
    std::string gr_test, gr_test_optima, gr_out_dir = "grid_out", gr_scale = "desk";
    int gr_validate = 0, gr_baselines = 3, gr_parallel_runs = 1, gr_eval_workers = 1,
        gr_exact_parallel = 1;
    std::uint64_t gr_gen_seed = 1;
    AgentFlags gr_agent;
    grid->add_option("--data", gr_data,
                     "Existing dataset paths (generated per --scale when omitted)");
    grid->add_option("--test", gr_test, "Existing test dataset path");
    grid->add_option("--test-optima", gr_test_optima, "Existing optima cache for the test set");
    grid->add_option("--scale", gr_scale, "desk|paper preset for generated inputs")
        ->capture_default_str();
    grid->add_option("--gen-seed", gr_gen_seed, "Base seed for generated datasets")
        ->capture_default_str();
    grid->add_option("--validate-every", gr_validate, "Instances between validations (0 = preset)")
        ->capture_default_str();
    grid->add_option("--baseline-runs", gr_baselines, "Shuffled baseline agents per dataset")
        ->capture_default_str();
    grid->add_option("--parallel-runs", gr_parallel_runs, "Training runs in parallel")
        ->capture_default_str();
    grid->add_option("--eval-workers", gr_eval_workers, "Threads for validation rollouts")
        ->capture_default_str();
    grid->add_option("--exact-parallel", gr_exact_parallel, "Threads for the optima solve")
        ->capture_default_str();
    grid->add_option("--out-dir", gr_out_dir, "Output directory")->capture_default_str();
    gr_agent.add_to(grid);
    grid->callback([&] {
        bool paper = gr_scale == "paper";
        if (!paper && gr_scale != "desk")
            throw jsscl::ValidationError("grid: --scale must be desk or paper");
        int train_count = paper ? 40000 : 2000;
        int test_count = paper ? 1000 : 200;
        int n_datasets = 3;
        int validate_every = gr_validate > 0 ? gr_validate : (paper ? 2000 : 500);

        std::filesystem::create_directories(gr_out_dir);
        jsscl::GenConfig base_cfg; // 6x6, uniform(1, 99)

        std::vector<std::filesystem::path> dataset_paths;
        if (!gr_data.empty()) {
            for (const auto& p : gr_data) dataset_paths.emplace_back(p);
        } else {
            for (int d = 0; d < n_datasets; ++d) {
                jsscl::GenConfig cfg = base_cfg;
                cfg.seed = gr_gen_seed + static_cast<std::uint64_t>(d);
                std::filesystem::path path =
                    std::filesystem::path(gr_out_dir) /
                    ("train_seed" + std::to_string(cfg.seed) + ".jsonl");
                if (!std::filesystem::exists(path))
                    jsscl::write_dataset(jsscl::generate_dataset(cfg, train_count, 2), cfg, path);
                dataset_paths.push_back(path);
            }
        }

        std::filesystem::path test_path, test_optima_path;
        if (!gr_test.empty()) {
            test_path = gr_test;
        } else {
            jsscl::GenConfig cfg = base_cfg;
            cfg.seed = gr_gen_seed + 1000;
            test_path = std::filesystem::path(gr_out_dir) / "test.jsonl";
            if (!std::filesystem::exists(test_path))
                jsscl::write_dataset(jsscl::generate_dataset(cfg, test_count, 2), cfg, test_path);
        }
        if (!gr_test_optima.empty()) {
            test_optima_path = gr_test_optima;
        } else {
            test_optima_path = std::filesystem::path(gr_out_dir) / "test_optima.jsonl";
            if (!std::filesystem::exists(test_optima_path)) {
                jsscl::LoadedDataset test_ds = jsscl::read_dataset(test_path);
                auto records =
                    jsscl::solve_dataset(test_ds.instances, jsscl::ExactLimits{}, gr_exact_parallel);
                jsscl::write_optima(records, test_optima_path);
            }
        }

        jsscl::GridConfig gc;
        gc.dataset_paths = dataset_paths;
        gc.test_path = test_path;
        gc.test_optima_path = test_optima_path;
        gc.validation_every = validate_every;
        gc.agent = gr_agent.resolve(base_cfg);
        gc.baseline_runs = gr_baselines;
        gc.out_dir = gr_out_dir;
        gc.parallel_runs = gr_parallel_runs;
        gc.eval_workers = gr_eval_workers;

        ordered_json rc;
        rc["scale"] = gr_scale;
        rc["datasets"] = ordered_json::array();
        for (const auto& p : gc.dataset_paths) rc["datasets"].push_back(p.string());
        rc["test"] = gc.test_path.string();
        rc["test_optima"] = gc.test_optima_path.string();
        rc["validate_every"] = gc.validation_every;
        rc["baseline_runs"] = gc.baseline_runs;
        rc["out_dir"] = gr_out_dir;
        rc["agent"] = agent_json(gc.agent);
        echo_config("grid", rc);

        auto manifests = jsscl::experiment_grid(gc);
        std::cout << "grid complete: " << manifests.size() << " runs, combined eval log at "
                  << (std::filesystem::path(gr_out_dir) / "grid_evals.csv").string() << "\n";
    });

    // ---- analyze ----
    auto* analyze = app.add_subcommand("analyze", "Analyze training runs in a directory");
    std::string a_runs, a_out_dir;
    analyze->add_option("--runs", a_runs, "Directory containing *.manifest.json")->required();
    analyze->add_option("--out-dir", a_out_dir, "Report output directory (default: --runs)");
    analyze->callback([&] {
        std::filesystem::path out_dir = a_out_dir.empty() ? a_runs : a_out_dir;
        std::filesystem::create_directories(out_dir);
        ordered_json rc;
        rc["runs"] = a_runs;
        rc["out_dir"] = out_dir.string();
        echo_config("analyze", rc);

        auto runs = jsscl::load_runs(a_runs);
        if (runs.empty()) throw jsscl::ValidationError("analyze: no manifests in " + a_runs);
        jsscl::Summary summary = jsscl::summarize(runs);
        jsscl::write_file_atomic(out_dir / "summary_runs.csv", jsscl::summary_runs_csv(summary));
        jsscl::write_file_atomic(out_dir / "summary_stats.csv", jsscl::summary_stats_csv(summary));
        jsscl::write_file_atomic(out_dir / "plot_curves.py",
                                 jsscl::plot_script((std::filesystem::path(a_runs) / "*.evals.csv").string()));

        std::printf("%zu runs; %.0f%% reached their global minimum in the first dip\n",
                    runs.size(), 100.0 * summary.frac_global_min_in_first_dip);
        if (summary.has_baseline)
            std::printf("best curriculum gap %.4f vs baseline %.4f: %.1f%% better (%.2f%%p)\n",
                        summary.curriculum_best_gap, summary.baseline_best_gap,
                        100.0 * summary.improvement_rel, 100.0 * summary.improvement_pp);
        if (summary.has_hr)
            std::printf("h_r first dip %.4f vs baseline dip %.4f: %.1f%% better (%.2f%%p)\n",
                        summary.hr_dip_gap, summary.baseline_dip_gap,
                        100.0 * summary.dip_improvement_rel, 100.0 * summary.dip_improvement_pp);

        // Second-half impact per run, then the rank/count analysis over all
        // complete (dataset, first CE) groups.
        std::map<jsscl::DeltaKey, double> deltas;
        bool missing_halfway = false;
        for (const jsscl::RunManifest& m : runs) {
            if (m.curriculum_first == "shuffled" || m.evals.size() < 2) continue;
            long long total = m.evals.back().instances_seen;
            long long halfway = total / 2;
            try {
                deltas[{std::to_string(m.dataset_seed), m.curriculum_first, m.curriculum_second}] =
                    jsscl::second_half_impact(m.evals, halfway);
            } catch (const jsscl::ValidationError&) {
                missing_halfway = true;
            }
        }
        if (!deltas.empty()) {
            try {
                jsscl::RankAnalysis ra = jsscl::rank_analysis(deltas);
                jsscl::write_file_atomic(out_dir / "rank_analysis.csv",
                                         jsscl::rank_analysis_csv(ra));
                std::cout << "rank analysis over " << ra.groups << " groups written\n";
            } catch (const jsscl::ValidationError& e) {
                std::cout << "rank analysis skipped: " << e.what() << "\n";
            }
        } else if (missing_halfway) {
            std::cout << "rank analysis skipped: no runs with records at the halfway boundary\n";
        }
        std::cout << "reports written to " << out_dir.string() << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const jsscl::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

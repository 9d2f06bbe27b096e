// Experiment harness CLI: train / baseline / score / diag subcommands.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "ddpg/harness/run.hpp"

using namespace ddpg;

namespace {

std::string strip_checkpoint_suffix(std::string p) {
    for (const char* suf : {".json", ".bin"}) {
        const std::string s = suf;
        if (p.size() > s.size() && p.compare(p.size() - s.size(), s.size(), s) == 0)
            return p.substr(0, p.size() - s.size());
    }
    return p;
}

int cmd_train(const std::string& env, const std::string& config_path,
              std::uint64_t seed, bool no_target, bool no_bn,
              const std::string& out_dir) {
    harness::ExperimentConfig xcfg = harness::load_experiment_config(config_path);
    if (no_target) xcfg.training.use_target_networks = false;
    if (no_bn) xcfg.training.use_batch_norm = false;
    auto out = harness::run_training(env, xcfg, seed, out_dir);
    if (out.evals.empty()) {
        std::cout << "trained " << out.steps << " steps (no evaluation point reached)\n";
    } else {
        std::cout << "trained " << out.steps << " steps, " << out.episodes
                  << " episodes; final eval mean "
                  << fmt_double(out.evals.back().eval_return_mean) << "\n";
    }
    return 0;
}

int cmd_baseline(const std::string& env, const std::string& policy,
                 const std::string& config_path, int episodes, std::uint64_t seed,
                 const std::string& out_dir) {
    harness::ExperimentConfig xcfg = harness::load_experiment_config(config_path);
    std::filesystem::create_directories(out_dir);
    std::vector<harness::BaselineEpisode> eps;
    if (policy == "random") {
        auto e = envs::make_env(env, xcfg.env_overrides);
        eps = harness::run_random_baseline(*e, episodes, seed);
    } else {
        planner::PlannerConfig pcfg = xcfg.planner;
        if (!xcfg.planner_specified)
            pcfg.horizon = planner::default_planner_config(env).horizon;
        eps = harness::run_ilqg_baseline(env, xcfg.env_overrides, pcfg, episodes, seed);
    }
    harness::write_baseline_csv(out_dir + "/baseline_" + policy + ".csv", eps);
    double mean = 0.0;
    for (const auto& e : eps) mean += e.ret;
    mean /= double(eps.size());
    std::cout << policy << " baseline on " << env << ": mean return "
              << fmt_double(mean) << " over " << episodes << " episodes\n";
    return 0;
}

int cmd_score(const std::string& train_dir, const std::string& baseline_dir) {
    auto rep = harness::score_results(train_dir, baseline_dir);
    harness::write_score_report(train_dir, rep);
    std::cout << "r_rand " << fmt_double(rep.r_rand) << ", r_ilqg "
              << fmt_double(rep.r_ilqg) << "\n";
    for (const auto& s : rep.seeds) {
        std::cout << "seed " << s.seed << ": final " << fmt_double(s.final_return)
                  << ", best " << fmt_double(s.best_return);
        if (rep.normalized_ok)
            std::cout << " (scores "
                      << fmt_double(harness::normalize_score(s.final_return, rep.r_rand, rep.r_ilqg))
                      << " / "
                      << fmt_double(harness::normalize_score(s.best_return, rep.r_rand, rep.r_ilqg))
                      << ")";
        std::cout << "\n";
    }
    if (!rep.normalized_ok) {
        std::cerr << "warning: degenerate baselines (r_ilqg == r_rand); raw returns only\n";
        return 0;
    }
    std::cout << "R_av (final/best): " << fmt_double(rep.r_av_final) << " / "
              << fmt_double(rep.r_av_best) << "  normalized "
              << fmt_double(harness::normalize_score(rep.r_av_final, rep.r_rand, rep.r_ilqg))
              << " / "
              << fmt_double(harness::normalize_score(rep.r_av_best, rep.r_rand, rep.r_ilqg))
              << "\n";
    std::cout << "R_best (final/best): " << fmt_double(rep.r_best_final) << " / "
              << fmt_double(rep.r_best_best) << "\n";
    return 0;
}

int cmd_diag_qvr(const std::string& checkpoint, const std::string& env_name,
                 int episodes, std::uint64_t seed, const std::string& out_path) {
    auto loaded = agent::load_checkpoint(strip_checkpoint_suffix(checkpoint));
    if (!env_name.empty() && env_name != loaded.env_name)
        throw std::runtime_error("checkpoint was trained on '" + loaded.env_name +
                                 "', not '" + env_name + "'");
    auto env = envs::make_env(loaded.env_name);
    auto rows = harness::q_diagnostic(*loaded.agent, *env, episodes, seed);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        os = &file;
    }
    *os << "episode,step,q_pred,return_to_go\n";
    for (const auto& r : rows)
        *os << r.episode << "," << r.step << "," << fmt_double(r.q_pred) << ","
            << fmt_double(r.return_to_go) << "\n";
    std::cerr << "pearson " << fmt_double(harness::pearson(rows)) << " over "
              << rows.size() << " points\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DDPG experiment harness"};
    app.require_subcommand(1);

    std::string env, config_path, out_dir, policy, train_dir, baseline_dir;
    std::string checkpoint, diag_out = "-";
    std::uint64_t seed = 0;
    int episodes = 20;
    bool no_target = false, no_bn = false;

    auto* train = app.add_subcommand("train", "train one seed of DDPG");
    train->add_option("--env", env, "environment name")->required();
    train->add_option("--config", config_path, "JSON config file");
    train->add_option("--seed", seed, "run seed")->required();
    train->add_flag("--no-target-net", no_target, "ablation: disable target networks");
    train->add_flag("--no-batchnorm", no_bn, "ablation: disable batch normalization");
    train->add_option("--out", out_dir, "output directory")->required();

    auto* baseline = app.add_subcommand("baseline", "run a baseline policy");
    baseline->add_option("--env", env, "environment name")->required();
    baseline->add_option("--policy", policy, "random or ilqg")
        ->required()
        ->check(CLI::IsMember({"random", "ilqg"}));
    baseline->add_option("--episodes", episodes, "episode count")->required();
    baseline->add_option("--config", config_path, "JSON config file");
    baseline->add_option("--seed", seed, "baseline seed (default 0)");
    baseline->add_option("--out", out_dir, "output directory")->required();

    auto* score = app.add_subcommand("score", "normalize training results");
    score->add_option("--train-results", train_dir, "directory with train_seed*.csv")
        ->required();
    score->add_option("--baselines", baseline_dir,
                      "directory with baseline_{random,ilqg}.csv")
        ->required();

    auto* diag = app.add_subcommand("diag", "diagnostics");
    diag->require_subcommand(1);
    auto* qvr = diag->add_subcommand("qvr", "predicted Q vs observed return");
    qvr->add_option("--checkpoint", checkpoint, "checkpoint prefix or .json path")
        ->required();
    qvr->add_option("--env", env, "environment name (must match checkpoint)");
    qvr->add_option("--episodes", episodes, "test episode count")->required();
    qvr->add_option("--seed", seed, "evaluation seed (default 0)");
    qvr->add_option("--out", diag_out, "output CSV path ('-' = stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed())
            return cmd_train(env, config_path, seed, no_target, no_bn, out_dir);
        if (baseline->parsed())
            return cmd_baseline(env, policy, config_path, episodes, seed, out_dir);
        if (score->parsed()) return cmd_score(train_dir, baseline_dir);
        if (diag->parsed() && qvr->parsed())
            return cmd_diag_qvr(checkpoint, env, episodes, seed, diag_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

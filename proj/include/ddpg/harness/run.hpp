#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ddpg/agent/agent.hpp"
#include "ddpg/agent/checkpoint.hpp"
#include "ddpg/envs/registry.hpp"
#include "ddpg/harness/config.hpp"
#include "ddpg/harness/csv.hpp"
#include "ddpg/planner/ilqg.hpp"

namespace ddpg::harness {

// Seed scheme: every stream is splitmix-mixed from (user seed, purpose salt,
// index), so seeds 0,1,2,... give unrelated runs and each purpose (training
// resets, eval resets, warmup actions, baselines) has its own stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt,
                              std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ splitmix64(salt)) ^ index);
}

constexpr std::uint64_t kSaltTrainReset = 0x7472;
constexpr std::uint64_t kSaltEvalReset = 0x6576;
constexpr std::uint64_t kSaltWarmup = 0x7761;
constexpr std::uint64_t kSaltBaseline = 0x6261;

// Noise-free greedy rollouts; eval episode e always starts from the same
// state for a given seed, so successive evaluations are comparable.
inline std::vector<double> evaluate(agent::Agent& agent, envs::Environment& env,
                                    int episodes, std::uint64_t seed) {
    std::vector<double> returns;
    returns.reserve(episodes);
    for (int e = 0; e < episodes; ++e) {
        env.reset(mix_seed(seed, kSaltEvalReset, std::uint64_t(e)));
        double ret = 0.0;
        Vec obs = env.observation();
        while (true) {
            auto sr = env.step(agent.act(obs));
            ret += sr.reward;
            obs = sr.obs;
            if (sr.done) break;
        }
        returns.push_back(ret);
    }
    return returns;
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

inline double std_of(const std::vector<double>& v) {
    const double mu = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / double(v.size()));
}

struct EvalPoint {
    std::int64_t step;
    int episode;
    double eval_return_mean, eval_return_std;
    double critic_loss, actor_objective_mean;
    std::int64_t buffer_size;
};

struct TrainOutcome {
    std::vector<EvalPoint> evals;
    double wall_time_s = 0.0;
    std::int64_t steps = 0;
    int episodes = 0;
    bool stopped_early = false;
};

// One seed of Algorithm-1 training with periodic noise-free evaluation.
// stop_when (optional) sees each evaluation mean and may end the run early.
// When out_dir is non-empty, writes train_seed<N>.csv, checkpoint_seed<N>.*
// and run_meta_seed<N>.json there.
inline TrainOutcome run_training(
    const std::string& env_name, const ExperimentConfig& xcfg, std::uint64_t seed,
    const std::string& out_dir, agent::Agent* external_agent = nullptr,
    const std::function<bool(double)>& stop_when = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const agent::TrainingConfig& cfg = xcfg.training;
    auto env = envs::make_env(env_name, xcfg.env_overrides);
    auto eval_env = envs::make_env(env_name, xcfg.env_overrides);

    std::optional<agent::Agent> own;
    if (!external_agent)
        own.emplace(env->obs_dim(), env->act_dim(), cfg, seed);
    agent::Agent& agent = external_agent ? *external_agent : *own;

    Rng warmup_rng(mix_seed(seed, kSaltWarmup, 0));
    TrainOutcome out;

    std::optional<CsvWriter> csv;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        csv.emplace(out_dir + "/train_seed" + std::to_string(seed) + ".csv",
                    std::vector<std::string>{"step", "episode", "eval_return_mean",
                                             "eval_return_std", "critic_loss",
                                             "actor_objective_mean", "buffer_size"});
    }

    std::int64_t step = 0;
    int episode = 0;
    double closs_sum = 0.0, aobj_sum = 0.0;
    std::int64_t n_updates = 0;
    bool stop = false;

    while (step < cfg.max_env_steps && !stop) {
        env->reset(mix_seed(seed, kSaltTrainReset, std::uint64_t(episode)));
        agent.begin_episode();
        Vec obs = env->observation();
        bool done = false;
        while (!done && step < cfg.max_env_steps && !stop) {
            Vec a(env->act_dim());
            if (step < cfg.warmup_steps)
                for (int i = 0; i < a.size(); ++i) a[i] = warmup_rng.uniform(-1.0, 1.0);
            else
                a = agent.act_explore(obs);
            auto sr = env->step(a);
            agent.observe({obs, a, sr.reward, sr.obs, sr.terminal_state});
            obs = sr.obs;
            done = sr.done;

            if (step >= cfg.warmup_steps && agent.ready()) {
                auto st = agent.update();
                closs_sum += st.critic_loss;
                aobj_sum += st.actor_objective;
                ++n_updates;
            }
            ++step;

            if (step % cfg.eval_interval == 0) {
                auto rets = evaluate(agent, *eval_env, cfg.eval_episodes, seed);
                EvalPoint p{step,
                            episode,
                            mean_of(rets),
                            std_of(rets),
                            n_updates ? closs_sum / double(n_updates) : 0.0,
                            n_updates ? aobj_sum / double(n_updates) : 0.0,
                            std::int64_t(agent.buffer.size())};
                out.evals.push_back(p);
                if (csv)
                    csv->row({std::to_string(p.step), std::to_string(p.episode),
                              fmt_double(p.eval_return_mean), fmt_double(p.eval_return_std),
                              fmt_double(p.critic_loss), fmt_double(p.actor_objective_mean),
                              std::to_string(p.buffer_size)});
                closs_sum = aobj_sum = 0.0;
                n_updates = 0;
                if (stop_when && stop_when(p.eval_return_mean)) {
                    out.stopped_early = true;
                    stop = true;
                }
            }
        }
        ++episode;
    }

    out.steps = step;
    out.episodes = episode;
    out.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!out_dir.empty()) {
        const std::string tag = std::to_string(seed);
        agent::save_checkpoint(out_dir + "/checkpoint_seed" + tag, agent, env_name,
                               env->obs_dim(), env->act_dim());
        nlohmann::json meta;
        meta["env"] = env_name;
        meta["seed"] = seed;
        meta["config"] = cfg;
        meta["env_overrides"] = xcfg.env_overrides;
        meta["config_hash"] = agent::config_hash(cfg);
        meta["config_hash_ablation_base"] = agent::config_hash_ablation_base(cfg);
        meta["steps"] = out.steps;
        meta["episodes"] = out.episodes;
        meta["stopped_early"] = out.stopped_early;
        meta["wall_time_s"] = out.wall_time_s;  // here, not in the CSV: timing
                                                // must not break byte-identical
                                                // rerun outputs
        std::ofstream mf(out_dir + "/run_meta_seed" + tag + ".json");
        mf << meta.dump(2) << "\n";
    }
    return out;
}

struct BaselineEpisode {
    int episode;
    double ret;
    int steps;
};

inline std::vector<BaselineEpisode> run_random_baseline(envs::Environment& env,
                                                        int episodes,
                                                        std::uint64_t seed) {
    std::vector<BaselineEpisode> out;
    for (int e = 0; e < episodes; ++e) {
        env.reset(mix_seed(seed, kSaltBaseline, std::uint64_t(e)));
        Rng arng(mix_seed(seed, kSaltBaseline ^ 0xa5a5, std::uint64_t(e)));
        double ret = 0.0;
        int steps = 0;
        while (true) {
            Vec a(env.act_dim());
            for (int i = 0; i < a.size(); ++i) a[i] = arng.uniform(-1.0, 1.0);
            auto sr = env.step(a);
            ret += sr.reward;
            ++steps;
            if (sr.done) break;
        }
        out.push_back({e, ret, steps});
    }
    return out;
}

inline std::vector<BaselineEpisode> run_ilqg_baseline(
    const std::string& env_name, const nlohmann::json& env_overrides,
    const planner::PlannerConfig& pcfg, int episodes, std::uint64_t seed) {
    std::vector<BaselineEpisode> out;
    for (int e = 0; e < episodes; ++e) {
        auto env = envs::make_env(env_name, env_overrides);
        env->reset(mix_seed(seed, kSaltBaseline, std::uint64_t(e)));
        auto log = planner::mpc_rollout(*env, pcfg);
        out.push_back({e, log.episode_return, log.steps});
    }
    return out;
}

inline void write_baseline_csv(const std::string& path,
                               const std::vector<BaselineEpisode>& eps) {
    CsvWriter csv(path, {"episode", "return", "steps"});
    for (const auto& e : eps)
        csv.row({std::to_string(e.episode), fmt_double(e.ret), std::to_string(e.steps)});
}

// (raw - r_rand) / (r_ilqg - r_rand): random scores 0, the planner scores 1.
inline double normalize_score(double raw, double r_rand, double r_ilqg) {
    const double denom = r_ilqg - r_rand;
    if (std::abs(denom) < 1e-9)
        throw std::runtime_error("degenerate baselines: r_ilqg == r_rand");
    return (raw - r_rand) / denom;
}

struct SeedResult {
    std::uint64_t seed;
    double final_return, best_return;
};

struct ScoreReport {
    double r_rand = 0.0, r_ilqg = 0.0;
    bool normalized_ok = false;
    std::vector<SeedResult> seeds;
    // Aggregates over seeds; the averaging window is ambiguous in the source
    // protocol, so both final-evaluation and best-evaluation variants are
    // reported, labeled.
    double r_av_final = 0.0, r_av_best = 0.0;
    double r_best_final = 0.0, r_best_best = 0.0;
};

inline ScoreReport score_results(const std::string& train_dir,
                                 const std::string& baseline_dir) {
    ScoreReport rep;
    auto baseline_mean = [](const std::string& path) {
        CsvTable t = read_csv(path);
        const int c = t.col("return");
        double s = 0.0;
        for (const auto& r : t.rows) s += std::stod(r[c]);
        if (t.rows.empty()) throw std::runtime_error("empty baseline csv: " + path);
        return s / double(t.rows.size());
    };
    rep.r_rand = baseline_mean(baseline_dir + "/baseline_random.csv");
    rep.r_ilqg = baseline_mean(baseline_dir + "/baseline_ilqg.csv");

    for (const auto& entry : std::filesystem::directory_iterator(train_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("train_seed", 0) != 0 || entry.path().extension() != ".csv")
            continue;
        const std::uint64_t seed =
            std::stoull(name.substr(10, name.size() - 14));
        CsvTable t = read_csv(entry.path().string());
        if (t.rows.empty())
            throw std::runtime_error("no evaluations in " + name);
        const int c = t.col("eval_return_mean");
        double best = -1e300, final = 0.0;
        for (const auto& r : t.rows) {
            const double v = std::stod(r[c]);
            best = std::max(best, v);
            final = v;
        }
        rep.seeds.push_back({seed, final, best});
    }
    if (rep.seeds.empty())
        throw std::runtime_error("no train_seed*.csv files in " + train_dir);
    std::sort(rep.seeds.begin(), rep.seeds.end(),
              [](const SeedResult& a, const SeedResult& b) { return a.seed < b.seed; });

    double sf = 0.0, sb = 0.0;
    rep.r_best_final = rep.r_best_best = -1e300;
    for (const auto& s : rep.seeds) {
        sf += s.final_return;
        sb += s.best_return;
        rep.r_best_final = std::max(rep.r_best_final, s.final_return);
        rep.r_best_best = std::max(rep.r_best_best, s.best_return);
    }
    rep.r_av_final = sf / double(rep.seeds.size());
    rep.r_av_best = sb / double(rep.seeds.size());
    rep.normalized_ok = std::abs(rep.r_ilqg - rep.r_rand) >= 1e-9;
    return rep;
}

inline void write_score_report(const std::string& train_dir, const ScoreReport& rep) {
    {
        CsvWriter csv(train_dir + "/scores.csv",
                      {"seed", "final_return", "best_return", "final_score", "best_score"});
        for (const auto& s : rep.seeds) {
            std::string fs = "", bs = "";
            if (rep.normalized_ok) {
                fs = fmt_double(normalize_score(s.final_return, rep.r_rand, rep.r_ilqg));
                bs = fmt_double(normalize_score(s.best_return, rep.r_rand, rep.r_ilqg));
            }
            csv.row({std::to_string(s.seed), fmt_double(s.final_return),
                     fmt_double(s.best_return), fs, bs});
        }
    }
    CsvWriter sum(train_dir + "/score_summary.csv", {"metric", "value"});
    sum.row({"r_rand", fmt_double(rep.r_rand)});
    sum.row({"r_ilqg", fmt_double(rep.r_ilqg)});
    sum.row({"R_av_final", fmt_double(rep.r_av_final)});
    sum.row({"R_av_best", fmt_double(rep.r_av_best)});
    sum.row({"R_best_final", fmt_double(rep.r_best_final)});
    sum.row({"R_best_best", fmt_double(rep.r_best_best)});
    if (rep.normalized_ok) {
        sum.row({"score_av_final",
                 fmt_double(normalize_score(rep.r_av_final, rep.r_rand, rep.r_ilqg))});
        sum.row({"score_av_best",
                 fmt_double(normalize_score(rep.r_av_best, rep.r_rand, rep.r_ilqg))});
        sum.row({"score_best_final",
                 fmt_double(normalize_score(rep.r_best_final, rep.r_rand, rep.r_ilqg))});
        sum.row({"score_best_best",
                 fmt_double(normalize_score(rep.r_best_best, rep.r_rand, rep.r_ilqg))});
    }
}

struct QvrRow {
    int episode, step;
    double q_pred, return_to_go;
};

// Fig.-3-style pairing: predicted Q(s_t, a_t) in eval mode against the
// realized discounted return-to-go of noise-free test episodes.
inline std::vector<QvrRow> q_diagnostic(agent::Agent& agent, envs::Environment& env,
                                        int episodes, std::uint64_t seed) {
    std::vector<QvrRow> rows;
    const double gamma = agent.config().gamma;
    for (int e = 0; e < episodes; ++e) {
        env.reset(mix_seed(seed, kSaltEvalReset, std::uint64_t(e)));
        std::vector<Vec> obs_hist, act_hist;
        std::vector<double> rew_hist;
        Vec obs = env.observation();
        while (true) {
            Vec a = agent.act(obs);
            auto sr = env.step(a);
            obs_hist.push_back(obs);
            act_hist.push_back(a);
            rew_hist.push_back(sr.reward);
            obs = sr.obs;
            if (sr.done) break;
        }
        double g = 0.0;
        std::vector<double> rtg(rew_hist.size());
        for (int t = int(rew_hist.size()) - 1; t >= 0; --t) {
            g = rew_hist[t] + gamma * g;
            rtg[t] = g;
        }
        for (size_t t = 0; t < rew_hist.size(); ++t)
            rows.push_back({e, int(t), agent.q_value(obs_hist[t], act_hist[t]), rtg[t]});
    }
    return rows;
}

inline double pearson(const std::vector<QvrRow>& rows) {
    const double n = double(rows.size());
    double mx = 0.0, my = 0.0;
    for (const auto& r : rows) {
        mx += r.q_pred;
        my += r.return_to_go;
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& r : rows) {
        sxy += (r.q_pred - mx) * (r.return_to_go - my);
        sxx += (r.q_pred - mx) * (r.q_pred - mx);
        syy += (r.return_to_go - my) * (r.return_to_go - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace ddpg::harness

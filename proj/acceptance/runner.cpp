// Acceptance runner: executes the ten acceptance checks end to end and prints
// one [PASS]/[FAIL] line per criterion. Learning criteria (1, 2, 3, 9) train
// real agents and re-derive the score baselines on the fly, so a full run
// takes tens of minutes on one core; --only N limits the run to one criterion
// while debugging. Exit code is the number of failed criteria.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "ddpg/harness/run.hpp"

using namespace ddpg;
namespace fs = std::filesystem;

namespace {

std::string g_out;      // scratch directory for artifacts
std::string g_harness;  // path to the built CLI binary (criterion 10)
std::string g_trained_pendulum_ckpt;  // shared between criteria 1 and 9

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<missing:" + path + ">";
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// shared helpers for the learning criteria

struct Baselines {
    double r_rand, r_ilqg;
};

Baselines compute_baselines(const std::string& env_name, int rand_eps,
                            int ilqg_eps, std::uint64_t seed) {
    auto env = envs::make_env(env_name);
    auto rnd = harness::run_random_baseline(*env, rand_eps, seed);
    auto ilqg = harness::run_ilqg_baseline(env_name, nlohmann::json::object(),
                                           planner::default_planner_config(env_name),
                                           ilqg_eps, seed);
    Baselines b{0.0, 0.0};
    for (const auto& e : rnd) b.r_rand += e.ret;
    b.r_rand /= double(rnd.size());
    for (const auto& e : ilqg) b.r_ilqg += e.ret;
    b.r_ilqg /= double(ilqg.size());
    return b;
}

harness::ExperimentConfig desk_config(std::int64_t max_steps) {
    harness::ExperimentConfig xcfg;
    // Desk-scale learning setup. Mid-width nets; batch norm off (the behavior
    // policy runs on running statistics, which lag the batch statistics the
    // updates improve — at this scale the mismatch reliably locks exploration
    // into a saturated corner); replay window sized to a quarter of the run so
    // stale early-exploration data is evicted instead of dominating minibatches.
    // Core hyperparameters (gamma, tau, lrs, batch, OU) keep their defaults.
    xcfg.training.hidden = {128, 128};
    xcfg.training.use_batch_norm = false;
    xcfg.training.buffer_capacity = 25000;
    xcfg.training.max_env_steps = max_steps;
    return xcfg;
}

double best_eval(const harness::TrainOutcome& o) {
    double best = -1e300;
    for (const auto& p : o.evals) best = std::max(best, p.eval_return_mean);
    return best;
}

// ---------------------------------------------------------------------------
// gradient-check helpers (mirrors the unit suite's kink-avoidance trick)

double relu_margin(nn::Network& net, const Mat& X, const Mat& aux, bool train) {
    double margin = 1e300;
    Mat h = X;
    for (int i = 0; i < int(net.layers.size()); ++i) {
        if (i == net.aux_at) {
            Mat joined(h.rows(), h.cols() + aux.cols());
            joined << h, aux;
            h = joined;
        }
        if (auto* act = std::get_if<nn::Activation>(&net.layers[i]);
            act && act->kind == nn::Act::Relu)
            margin = std::min(margin, h.array().abs().minCoeff());
        h = nn::layer_forward(net.layers[i], h, train);
    }
    return margin;
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

// ---------------------------------------------------------------------------
// criteria

Outcome c1_pendulum_learning() {
    Baselines b = compute_baselines("pendulum", 20, 5, 100);
    const double bar = b.r_rand + 0.8 * (b.r_ilqg - b.r_rand);
    harness::ExperimentConfig xcfg = desk_config(100000);

    const auto& t = xcfg.training;
    if (t.gamma != 0.99 || t.tau != 0.001 || t.actor_lr != 1e-4 ||
        t.critic_lr != 1e-3 || t.batch_size != 64 || t.ou_theta != 0.15 ||
        t.ou_sigma != 0.2)
        return {false, "hyperparameter pins violated by desk config"};

    int passed = 0;
    double worst_wall = 0.0, best_overall = -1e300;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const std::string dir = g_out + "/c1_seed" + std::to_string(seed);
        auto out = harness::run_training("pendulum", xcfg, seed, dir, nullptr,
                                         [&](double m) { return m >= bar; });
        const double best = best_eval(out);
        worst_wall = std::max(worst_wall, out.wall_time_s);
        if (best >= bar) ++passed;
        if (best > best_overall) {
            best_overall = best;
            g_trained_pendulum_ckpt = dir + "/checkpoint_seed" + std::to_string(seed);
        }
    }
    const bool pass = passed >= 3 && worst_wall <= 1200.0;
    return {pass, std::to_string(passed) +
                      "/5 seeds reached normalized 0.8 (raw bar " + fmt("%.1f", bar) +
                      "; r_rand " + fmt("%.1f", b.r_rand) + ", r_ilqg " +
                      fmt("%.1f", b.r_ilqg) + "); max wall " +
                      fmt("%.0f", worst_wall) + "s of 1200s"};
}

Outcome c2_swingup_learning() {
    Baselines b = compute_baselines("cartpole_swingup", 20, 5, 200);
    const double bar = b.r_rand + 0.6 * (b.r_ilqg - b.r_rand);
    harness::ExperimentConfig xcfg = desk_config(250000);

    double best_overall = -1e300;
    int seeds_run = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto out = harness::run_training("cartpole_swingup", xcfg, seed,
                                         g_out + "/c2_seed" + std::to_string(seed),
                                         nullptr, [&](double m) { return m >= bar; });
        ++seeds_run;
        best_overall = std::max(best_overall, best_eval(out));
        if (best_overall >= bar) break;  // best-of-5 already settled
    }
    return {best_overall >= bar,
            "best seed " + fmt("%.1f", best_overall) + " vs raw bar " +
                fmt("%.1f", bar) + " (r_rand " + fmt("%.1f", b.r_rand) +
                ", r_ilqg " + fmt("%.1f", b.r_ilqg) + "; " +
                std::to_string(seeds_run) + " of 5 seeds run)"};
}

Outcome c3_target_network_ablation() {
    // Ablation arms use the plain small-net setup rather than desk_config: the
    // comparison needs identical mid-training conditions, not peak scores, and
    // the slow-lock regime keeps both arms on the same footing at 30k steps.
    harness::ExperimentConfig with;
    with.training.hidden = {64, 64};
    with.training.max_env_steps = 30000;
    harness::ExperimentConfig without = with;
    without.training.use_target_networks = false;

    double mean_with = 0.0, mean_without = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto a = harness::run_training("pendulum", with, seed, "");
        auto b = harness::run_training("pendulum", without, seed, "");
        mean_with += a.evals.back().eval_return_mean / 3.0;
        mean_without += b.evals.back().eval_return_mean / 3.0;
    }
    return {mean_with > mean_without,
            "final eval mean with targets " + fmt("%.1f", mean_with) +
                " vs without " + fmt("%.1f", mean_without) +
                " (3 seeds per arm, same seeds)"};
}

Outcome c4_gradient_exactness() {
    const double h = 1e-5, tol = 1e-4;
    long checked = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const bool critic_style = trial % 2;
        const bool bn = (trial / 2) % 2;
        const bool train = (trial / 4) % 2;
        for (std::uint64_t salt = 0;; ++salt) {
            Rng rng(splitmix64(0xc4c4 + 1000 * std::uint64_t(trial) + salt));
            const int obs = 2 + int(rng.index(3));
            const int act = 1 + int(rng.index(2));
            nn::Network net = critic_style
                                  ? nn::make_critic(obs, act, {6, 5}, bn, rng)
                                  : nn::make_actor(obs, act, {6, 5}, bn, rng);
            const int N = 4;
            Mat X = Mat::NullaryExpr(N, obs, [&] { return rng.uniform(-1.0, 1.0); });
            Mat aux = critic_style
                          ? Mat::NullaryExpr(N, act, [&] { return rng.uniform(-1.0, 1.0); })
                          : Mat(N, 0);
            if (relu_margin(net, X, aux, train) < 5e-3) continue;
            const int out_cols = critic_style ? 1 : act;
            Mat G = Mat::NullaryExpr(N, out_cols, [&] { return rng.uniform(-1.0, 1.0); });
            auto loss = [&] {
                return (net.forward(X, aux, train).array() * G.array()).sum();
            };

            net.forward(X, aux, train);
            Mat dX = net.backward(G);
            Mat dA = net.daux;

            auto probe = [&](double& coord, double analytic) {
                const double keep = coord;
                coord = keep + h;
                const double fp = loss();
                coord = keep - h;
                const double fm = loss();
                coord = keep;
                worst = std::max(worst, rel_err((fp - fm) / (2.0 * h), analytic));
                ++checked;
            };
            for (auto& p : net.params())
                for (Eigen::Index r = 0; r < p.value->rows(); ++r)
                    for (Eigen::Index c = 0; c < p.value->cols(); ++c)
                        probe((*p.value)(r, c), (*p.grad)(r, c));
            for (Eigen::Index r = 0; r < X.rows(); ++r)
                for (Eigen::Index c = 0; c < X.cols(); ++c)
                    probe(X(r, c), dX(r, c));
            if (critic_style)
                for (Eigen::Index r = 0; r < aux.rows(); ++r)
                    for (Eigen::Index c = 0; c < aux.cols(); ++c)
                        probe(aux(r, c), dA(r, c));
            break;
        }
    }
    return {worst < tol, std::to_string(checked) +
                             " parameter/input gradients over 100 networks, worst rel err " +
                             fmt("%.2e", worst) + " (tol 1e-4)"};
}

Outcome c5_policy_gradient_chain() {
    const double h = 1e-5, tol = 1e-4;
    long checked = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const bool bn = trial % 2;
        const bool train = true;  // matches the live actor-update path
        for (std::uint64_t salt = 0;; ++salt) {
            Rng rng(splitmix64(0xc5c5 + 1000 * std::uint64_t(trial) + salt));
            const int obs = 3, act = 1 + int(rng.index(2)), N = 5;
            nn::Network actor = nn::make_actor(obs, act, {6, 5}, bn, rng);
            nn::Network critic = nn::make_critic(obs, act, {6, 5}, bn, rng);
            Mat X = Mat::NullaryExpr(N, obs, [&] { return rng.uniform(-1.0, 1.0); });
            if (relu_margin(actor, X, Mat(N, 0), train) < 5e-3) continue;
            Mat a0 = actor.forward(X, train);
            if (relu_margin(critic, X, a0, train) < 5e-3) continue;

            auto J = [&] {  // objective: (1/N) sum_i Q(s_i, mu(s_i))
                Mat a = actor.forward(X, train);
                return critic.forward(X, a, train).mean();
            };
            actor.forward(X, train);
            critic.forward(X, actor.forward(X, train), train);
            critic.backward(Mat::Constant(N, 1, 1.0 / double(N)));
            actor.backward(critic.daux);

            for (auto& p : actor.params())
                for (Eigen::Index r = 0; r < p.value->rows(); ++r)
                    for (Eigen::Index c = 0; c < p.value->cols(); ++c) {
                        const double keep = (*p.value)(r, c);
                        (*p.value)(r, c) = keep + h;
                        const double fp = J();
                        (*p.value)(r, c) = keep - h;
                        const double fm = J();
                        (*p.value)(r, c) = keep;
                        worst = std::max(worst,
                                         rel_err((fp - fm) / (2.0 * h), (*p.grad)(r, c)));
                        ++checked;
                    }
            break;
        }
    }
    return {worst < tol, std::to_string(checked) +
                             " actor parameters over 20 actor/critic pairs, worst rel err " +
                             fmt("%.2e", worst) + " (tol 1e-4)"};
}

// linear-quadratic instance behind the Environment interface
class LinQuadEnv : public envs::Environment {
public:
    Mat A, B, Q, R;
    LinQuadEnv(Mat A_, Mat B_, Mat Q_, Mat R_)
        : A(std::move(A_)), B(std::move(B_)), Q(std::move(Q_)), R(std::move(R_)) {
        state_ = Vec::Zero(A.rows());
    }
    std::string name() const override { return "linquad"; }
    int obs_dim() const override { return int(A.rows()); }
    int act_dim() const override { return int(B.cols()); }
    int state_dim() const override { return int(A.rows()); }
    double dt() const override { return 1.0; }
    Vec dynamics(const Vec& s, const Vec& a) const override { return A * s + B * a; }
    double reward(const Vec& s, const Vec& a) const override { return -cost(s, a); }
    double cost(const Vec& s, const Vec& a) const override {
        return s.dot(Q * s) + a.dot(R * a);
    }
    Vec observe(const Vec& s) const override { return s; }
    void reset(std::uint64_t) override { t_ = 0; }
};

Outcome c6_ilqg_riccati() {
    Rng rng(999);
    auto rand_mat = [&](int r, int c, double scale) {
        return Mat::NullaryExpr(r, c, [&] { return rng.uniform(-scale, scale); });
    };
    double worst_cost = 0.0;
    int inst = 0, draws = 0;
    while (inst < 50) {
        if (++draws > 500) return {false, "could not draw 50 clip-free LQR instances"};
        const int n = 2 + int(rng.index(3));
        const int m = 1 + int(rng.index(2));
        const int H = 5 + int(rng.index(16));
        Mat A = rand_mat(n, n, 0.5);
        Mat B = rand_mat(n, m, 0.8);
        Mat Mq = rand_mat(n, n, 0.7);
        Mat Q = Mq.transpose() * Mq + 0.01 * Mat::Identity(n, n);
        Mat Mr = rand_mat(m, m, 0.4);
        Mat R = Mr.transpose() * Mr + 0.1 * Mat::Identity(m, m);
        Vec x0 = Vec::NullaryExpr(n, [&] { return rng.uniform(-0.04, 0.04); });
        LinQuadEnv env(A, B, Q, R);

        // finite-horizon Riccati oracle with terminal cost x'Qx
        Mat P = Q;
        for (int t = H - 1; t >= 0; --t) {
            Mat K = (R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
            P = Q + A.transpose() * P * A - A.transpose() * P * B * K;
            P = 0.5 * (P + P.transpose()).eval();
        }
        const double opt_cost = x0.dot(P * x0);

        planner::Trajectory nominal =
            planner::rollout(env, x0, std::vector<Vec>(H, Vec::Zero(m)));
        std::vector<planner::LocalModel> models;
        for (int t = 0; t < H; ++t) {
            planner::LocalModel lm =
                planner::quadratize(env, nominal.states[t], nominal.actions[t], 1e-4);
            std::tie(lm.A, lm.B) =
                planner::linearize(env, nominal.states[t], nominal.actions[t], 1e-4);
            models.push_back(std::move(lm));
        }
        models.push_back(planner::quadratize(env, nominal.states[H], Vec::Zero(m), 1e-4));
        auto bp = planner::backward_pass(models, 0.0);
        if (!bp) return {false, "backward pass failed on a PD instance"};
        planner::Trajectory sol = planner::forward_pass(env, nominal, *bp, {1.0});
        bool clipped = false;
        for (const Vec& u : sol.actions)
            if (u.cwiseAbs().maxCoeff() >= 0.99) clipped = true;
        if (clipped) continue;  // criterion targets the unconstrained problem
        worst_cost = std::max(worst_cost, std::abs(sol.total_cost - opt_cost) /
                                              std::max(std::abs(opt_cost), 1e-12));
        ++inst;
    }

    // point-mass MPC vs the converged Riccati controller
    Mat A(2, 2), B(2, 1), Q(2, 2), R(1, 1);
    A << 1.0, 0.05, 0.0, 1.0;
    B << 0.025, 0.5;
    Q << 1.0, 0.0, 0.0, 0.1;
    R << 0.1;
    Mat P = Q;
    for (int i = 0; i < 10000; ++i) {
        Mat K = (R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
        Mat Pn = Q + A.transpose() * P * A - A.transpose() * P * B * K;
        Pn = 0.5 * (Pn + Pn.transpose()).eval();
        const double delta = (Pn - P).cwiseAbs().maxCoeff();
        P = Pn;
        if (delta < 1e-13) break;
    }
    Mat K = (R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
    auto cart = envs::make_env("cart");
    Vec s(2);
    s << 1.0, 0.0;
    double lqr_return = 0.0;
    for (int t = 0; t < 200; ++t) {
        Vec u = (-(K * s)).cwiseMax(-1.0).cwiseMin(1.0);  // same actuator box
        lqr_return -= cart->cost(s, u);
        s = cart->dynamics(s, u);
    }
    cart->reset(0);
    cart->set_state((Vec(2) << 1.0, 0.0).finished());
    auto log = planner::mpc_rollout(*cart, planner::default_planner_config("cart"));
    const double mpc_gap = std::abs(log.episode_return - lqr_return) / std::abs(lqr_return);

    const bool pass = worst_cost < 1e-6 && mpc_gap < 0.01;
    return {pass, "50 LQR instances worst cost rel err " + fmt("%.2e", worst_cost) +
                      " (tol 1e-6); MPC return " + fmt("%.4f", log.episode_return) +
                      " vs Riccati " + fmt("%.4f", lqr_return) + ", gap " +
                      fmt("%.2f", 100.0 * mpc_gap) + "% (tol 1%)"};
}

Outcome c7_ou_statistics() {
    agent::OUNoise noise(1);  // theta 0.15, sigma 0.2, dt 1
    Rng rng(31337);
    noise.reset();
    for (int i = 0; i < 10000; ++i) noise.sample(rng);  // burn-in
    const int n = 1000000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = noise.sample(rng)[0];

    double mu = 0.0;
    for (double x : xs) mu += x;
    mu /= n;
    double var = 0.0, lag = 0.0;
    for (int i = 0; i < n; ++i) {
        var += (xs[i] - mu) * (xs[i] - mu);
        if (i + 1 < n) lag += (xs[i] - mu) * (xs[i + 1] - mu);
    }
    const double sd = std::sqrt(var / n);
    const double rho = lag / var;
    const double sd_theory =
        std::sqrt(noise.sigma * noise.sigma / (noise.theta * (2.0 - noise.theta * noise.dt)));
    const double rho_theory = 1.0 - noise.theta * noise.dt;

    const bool pass = std::abs(sd - sd_theory) < 0.05 * sd_theory &&
                      std::abs(rho - rho_theory) < 0.02;
    return {pass, "1e6 samples: std " + fmt("%.4f", sd) + " vs " +
                      fmt("%.4f", sd_theory) + " (tol 5%); lag-1 " + fmt("%.4f", rho) +
                      " vs " + fmt("%.4f", rho_theory) + " (tol 0.02)"};
}

Outcome c8_replay_buffer() {
    // FIFO eviction, exact
    agent::ReplayBuffer buf(3);
    auto tr = [](double id) {
        return agent::Transition{Vec::Constant(1, id), Vec::Constant(1, id), id,
                                 Vec::Constant(1, id), false};
    };
    for (int i = 1; i <= 5; ++i) buf.push(tr(i));
    bool fifo_ok = buf.size() == 3;
    for (int i = 0; i < 3; ++i) fifo_ok = fifo_ok && buf.oldest(i).r == double(i + 3);
    buf.push(tr(6));
    for (int i = 0; i < 3; ++i) fifo_ok = fifo_ok && buf.oldest(i).r == double(i + 4);

    // uniform sampling chi-square, df=99, significance 0.001
    agent::ReplayBuffer big(100);
    for (int i = 0; i < 100; ++i) big.push(tr(i));
    Rng rng(424242);
    std::vector<long> counts(100, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        agent::Batch b = big.sample(1000, rng);
        for (int i = 0; i < 1000; ++i) ++counts[long(b.r[i])];
    }
    const double expected = 10000.0;
    double chi2 = 0.0;
    for (long c : counts) chi2 += (double(c) - expected) * (double(c) - expected) / expected;
    const double crit = 148.23;  // chi2 quantile, df=99, p=0.999

    const bool pass = fifo_ok && chi2 < crit;
    return {pass, std::string("FIFO eviction ") + (fifo_ok ? "exact" : "WRONG") +
                      "; chi2 " + fmt("%.1f", chi2) + " < " + fmt("%.2f", crit) +
                      " (1e6 draws, 100 slots)"};
}

Outcome c9_q_diagnostic() {
    if (g_trained_pendulum_ckpt.empty()) {
        // standalone invocation: train one pendulum seed first
        const std::string dir = g_out + "/c9_train";
        harness::run_training("pendulum", desk_config(40000), 0, dir);
        g_trained_pendulum_ckpt = dir + "/checkpoint_seed0";
    }
    auto loaded = agent::load_checkpoint(g_trained_pendulum_ckpt);
    auto env = envs::make_env(loaded.env_name);
    auto rows = harness::q_diagnostic(*loaded.agent, *env, 20, 555);
    const double r = harness::pearson(rows);
    return {r > 0.9, "Pearson r " + fmt("%.4f", r) + " over 20 episodes (" +
                         std::to_string(rows.size()) + " points, tol > 0.9)"};
}

Outcome c10_byte_identical_reruns() {
    const fs::path d = fs::path(g_out) / "c10";
    fs::remove_all(d);
    fs::create_directories(d);
    const std::string log = (d / "commands.log").string();
    auto sh = [&](const std::string& args) {
        const std::string cmd = g_harness + " " + args + " >> " + log + " 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    std::ofstream(d / "tiny.json")
        << R"({"training": {"hidden": [8, 8], "batch_size": 8, "warmup_steps": 100,
                "eval_interval": 200, "max_env_steps": 600, "eval_episodes": 2,
                "buffer_capacity": 4096}})";
    const std::string cfg = (d / "tiny.json").string();

    std::vector<std::string> mismatches;
    auto expect_same = [&](const std::string& what, const std::string& a,
                           const std::string& b) {
        if (slurp(a) != slurp(b)) mismatches.push_back(what);
    };

    bool ran = true;
    ran &= sh("train --env cart --config " + cfg + " --seed 3 --out " + (d / "tA").string());
    ran &= sh("train --env cart --config " + cfg + " --seed 3 --out " + (d / "tB").string());
    expect_same("train", (d / "tA/train_seed3.csv").string(),
                (d / "tB/train_seed3.csv").string());

    ran &= sh("baseline --env pendulum --policy random --episodes 3 --seed 5 --out " +
              (d / "bA").string());
    ran &= sh("baseline --env pendulum --policy random --episodes 3 --seed 5 --out " +
              (d / "bB").string());
    expect_same("baseline random", (d / "bA/baseline_random.csv").string(),
                (d / "bB/baseline_random.csv").string());

    ran &= sh("baseline --env cart --policy ilqg --episodes 2 --seed 5 --out " +
              (d / "iA").string());
    ran &= sh("baseline --env cart --policy ilqg --episodes 2 --seed 5 --out " +
              (d / "iB").string());
    expect_same("baseline ilqg", (d / "iA/baseline_ilqg.csv").string(),
                (d / "iB/baseline_ilqg.csv").string());

    // score twice over the same inputs; it writes into the train dir, so
    // snapshot the outputs between runs
    ran &= sh("baseline --env cart --policy random --episodes 2 --seed 5 --out " +
              (d / "sbase").string());
    ran &= sh("baseline --env cart --policy ilqg --episodes 2 --seed 5 --out " +
              (d / "sbase").string());
    ran &= sh("score --train-results " + (d / "tA").string() + " --baselines " +
              (d / "sbase").string());
    const std::string scores1 = slurp((d / "tA/scores.csv").string());
    const std::string summary1 = slurp((d / "tA/score_summary.csv").string());
    ran &= sh("score --train-results " + (d / "tA").string() + " --baselines " +
              (d / "sbase").string());
    if (scores1 != slurp((d / "tA/scores.csv").string()) ||
        summary1 != slurp((d / "tA/score_summary.csv").string()))
        mismatches.push_back("score");

    ran &= sh("diag qvr --checkpoint " + (d / "tA/checkpoint_seed3").string() +
              " --episodes 2 --seed 7 --out " + (d / "qA.csv").string());
    ran &= sh("diag qvr --checkpoint " + (d / "tA/checkpoint_seed3").string() +
              " --episodes 2 --seed 7 --out " + (d / "qB.csv").string());
    expect_same("diag qvr", (d / "qA.csv").string(), (d / "qB.csv").string());

    if (!ran) return {false, "a harness invocation failed; see " + log};
    if (!mismatches.empty()) {
        std::string what;
        for (const auto& m : mismatches) what += (what.empty() ? "" : ", ") + m;
        return {false, "rerun outputs differ for: " + what};
    }
    return {true, "train, baseline (random+ilqg), score, diag qvr all byte-identical on rerun"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::vector<int> only;
    g_out = "acceptance_out";
    app.add_option("--harness", g_harness, "path to the ddpg_harness binary")->required();
    app.add_option("--out", g_out, "scratch output directory");
    app.add_option("--only", only, "run only these criterion numbers");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(g_out);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"pendulum learning, paper hyperparameters", c1_pendulum_learning},
        {"cartpole swing-up learning, best of 5 seeds", c2_swingup_learning},
        {"target-network ablation ordering", c3_target_network_ablation},
        {"gradient exactness vs finite differences", c4_gradient_exactness},
        {"policy-gradient chain rule", c5_policy_gradient_chain},
        {"ilqg vs Riccati oracle and point-mass MPC", c6_ilqg_riccati},
        {"OU noise stationary statistics", c7_ou_statistics},
        {"replay buffer FIFO and uniform sampling", c8_replay_buffer},
        {"Q-value vs observed return correlation", c9_q_diagnostic},
        {"byte-identical CSV outputs on rerun", c10_byte_identical_reruns},
    };

    int failures = 0, run = 0;
    for (int i = 0; i < int(criteria.size()); ++i) {
        if (!only.empty() &&
            std::find(only.begin(), only.end(), i + 1) == only.end())
            continue;
        ++run;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". "
                  << criteria[i].first << ": " << o.detail << " [" << fmt("%.0f", secs)
                  << "s]" << std::endl;
    }
    std::cout << (run - failures) << "/" << run << " criteria passed" << std::endl;
    return failures;
}

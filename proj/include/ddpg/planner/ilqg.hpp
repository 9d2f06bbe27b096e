#pragma once

#include <optional>
#include <vector>

#include "ddpg/envs/env.hpp"

namespace ddpg::planner {

using envs::Environment;

struct PlannerConfig {
    int horizon = 10;  // steps; chosen per env so horizon*dt is 0.25-0.6 s
    double lambda_init = 0.0;
    double lambda_factor = 10.0;   // growth on non-PD failure
    double lambda_shrink = 0.5;    // applied after a successful iteration
    double lambda_cap = 1e8;
    std::vector<double> alphas = {1.0, 0.5, 0.25, 0.125, 0.0625};
    double fd_h = 1e-5;
};

struct Trajectory {
    std::vector<Vec> states;   // length H+1
    std::vector<Vec> actions;  // length H
    double total_cost = 0.0;
};

struct LocalModel {
    Mat A, B;        // dynamics Jacobians
    Vec cx, cu;      // cost gradient blocks
    Mat Cxx, Cuu, Cux;
};

struct BackPassResult {
    std::vector<Vec> k;   // feedforward
    std::vector<Mat> K;   // feedback
    double expected_decrease = 0.0;
};

inline std::pair<Mat, Mat> linearize(const Environment& env, const Vec& s,
                                     const Vec& a, double h) {
    const auto n = s.size(), m = a.size();
    Mat A(n, n), B(n, m);
    for (Eigen::Index j = 0; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e[j] = h;
        A.col(j) = env.state_delta(env.dynamics(s + e, a), env.dynamics(s - e, a)) / (2.0 * h);
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        Vec e = Vec::Zero(m);
        e[j] = h;
        B.col(j) = env.state_delta(env.dynamics(s, a + e), env.dynamics(s, a - e)) / (2.0 * h);
    }
    if (!A.allFinite() || !B.allFinite())
        throw std::runtime_error("non-finite dynamics in linearize");
    return {A, B};
}

// Central-difference gradient and Hessian of env.cost over the joint (s,a).
inline LocalModel quadratize(const Environment& env, const Vec& s, const Vec& a,
                             double h) {
    const auto n = s.size(), m = a.size();
    Vec z(n + m);
    z << s, a;
    auto eval = [&](const Vec& zz) { return env.cost(zz.head(n), zz.tail(m)); };
    const double f0 = eval(z);
    Vec g(n + m);
    Mat H = Mat::Zero(n + m, n + m);
    for (Eigen::Index i = 0; i < n + m; ++i) {
        Vec e = Vec::Zero(n + m);
        e[i] = h;
        const double fp = eval(z + e), fm = eval(z - e);
        g[i] = (fp - fm) / (2.0 * h);
        H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (Eigen::Index i = 0; i < n + m; ++i)
        for (Eigen::Index j = i + 1; j < n + m; ++j) {
            Vec ei = Vec::Zero(n + m), ej = Vec::Zero(n + m);
            ei[i] = h;
            ej[j] = h;
            const double fpp = eval(z + ei + ej), fpm = eval(z + ei - ej);
            const double fmp = eval(z - ei + ej), fmm = eval(z - ei - ej);
            H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    LocalModel lm;
    lm.cx = g.head(n);
    lm.cu = g.tail(m);
    lm.Cxx = 0.5 * (H.topLeftCorner(n, n) + H.topLeftCorner(n, n).transpose());
    lm.Cuu = 0.5 * (H.bottomRightCorner(m, m) + H.bottomRightCorner(m, m).transpose());
    lm.Cux = H.bottomLeftCorner(m, n);
    return lm;
}

// Nominal rollout through the true dynamics; terminal cost is cost(x_H, 0).
inline Trajectory rollout(const Environment& env, const Vec& x0,
                          const std::vector<Vec>& actions) {
    Trajectory tr;
    tr.states.push_back(x0);
    tr.actions = actions;
    for (const Vec& u : actions) {
        tr.total_cost += env.cost(tr.states.back(), u);
        tr.states.push_back(env.dynamics(tr.states.back(), u));
    }
    tr.total_cost += env.cost(tr.states.back(), Vec::Zero(actions.front().size()));
    return tr;
}

// Riccati-style value recursion along the nominal trajectory. models has one
// LocalModel per step plus a final entry carrying only (cx, Cxx) for the
// terminal cost. Returns nullopt when Cuu + lambda*I fails Cholesky.
inline std::optional<BackPassResult> backward_pass(
    const std::vector<LocalModel>& models, double lambda) {
    const auto H = models.size() - 1;
    Vec Vx = models[H].cx;
    Mat Vxx = models[H].Cxx;
    BackPassResult res;
    res.k.resize(H);
    res.K.resize(H);
    double d1 = 0.0, d2 = 0.0;
    for (int t = int(H) - 1; t >= 0; --t) {
        const LocalModel& lm = models[t];
        Vec Qx = lm.cx + lm.A.transpose() * Vx;
        Vec Qu = lm.cu + lm.B.transpose() * Vx;
        Mat Qxx = lm.Cxx + lm.A.transpose() * Vxx * lm.A;
        Mat Quu = lm.Cuu + lm.B.transpose() * Vxx * lm.B;
        Mat Qux = lm.Cux + lm.B.transpose() * Vxx * lm.A;
        Mat Quu_r = Quu + lambda * Mat::Identity(Quu.rows(), Quu.cols());
        Eigen::LLT<Mat> llt(Quu_r);
        if (llt.info() != Eigen::Success) return std::nullopt;
        Vec k = -llt.solve(Qu);
        Mat K = -llt.solve(Qux);
        d1 += k.dot(Qu);
        d2 += k.dot(Quu_r * k);
        Vx = Qx + K.transpose() * (Quu_r * k) + K.transpose() * Qu +
             Qux.transpose() * k;
        Vxx = Qxx + K.transpose() * (Quu_r * K) + K.transpose() * Qux +
              Qux.transpose() * K;
        Vxx = 0.5 * (Vxx + Vxx.transpose()).eval();
        res.k[t] = k;
        res.K[t] = K;
    }
    res.expected_decrease = -(d1 + 0.5 * d2);
    return res;
}

// Derivative-free line search: rolls out each step size, keeps the best
// candidate, and never does worse than the nominal (which is a candidate).
// Actions are clipped to the actuator box, matching what execution would do.
inline Trajectory forward_pass(const Environment& env, const Trajectory& nominal,
                               const BackPassResult& bp,
                               const std::vector<double>& alphas) {
    Trajectory best = nominal;
    const auto H = nominal.actions.size();
    for (double alpha : alphas) {
        std::vector<Vec> us;
        us.reserve(H);
        Vec x = nominal.states[0];
        for (size_t t = 0; t < H; ++t) {
            Vec u = nominal.actions[t] + alpha * bp.k[t] +
                    bp.K[t] * env.state_delta(x, nominal.states[t]);
            u = u.cwiseMax(-1.0).cwiseMin(1.0);
            us.push_back(u);
            x = env.dynamics(x, u);
        }
        Trajectory cand = rollout(env, nominal.states[0], us);
        if (cand.total_cost < best.total_cost && cand.states.back().allFinite())
            best = cand;
    }
    return best;
}

struct EpisodeLog {
    std::vector<Vec> states;
    std::vector<Vec> actions;
    std::vector<double> rewards;
    double episode_return = 0.0;
    int steps = 0;
};

// Receding-horizon MPC: one iLQG iteration per control step from the true
// state, execute the first action, shift the plan one step (repeating the
// last action) as the next warm start. lambda persists across steps. The
// realized return uses the env's reward, not the planner cost.
inline EpisodeLog mpc_rollout(Environment& env, const PlannerConfig& cfg) {
    EpisodeLog log;
    const int m = env.act_dim();
    double lambda = cfg.lambda_init;
    std::vector<Vec> plan(cfg.horizon, Vec::Zero(m));
    for (int t = 0; t < env.max_steps; ++t) {
        Trajectory nominal = rollout(env, env.state(), plan);
        std::vector<LocalModel> models;
        models.reserve(cfg.horizon + 1);
        for (int k = 0; k < cfg.horizon; ++k) {
            LocalModel lm = quadratize(env, nominal.states[k], nominal.actions[k], cfg.fd_h);
            auto [A, B] = linearize(env, nominal.states[k], nominal.actions[k], cfg.fd_h);
            lm.A = A;
            lm.B = B;
            models.push_back(std::move(lm));
        }
        models.push_back(quadratize(env, nominal.states[cfg.horizon], Vec::Zero(m), cfg.fd_h));

        std::optional<BackPassResult> bp;
        while (!(bp = backward_pass(models, lambda))) {
            lambda = cfg.lambda_factor * std::max(lambda, 1e-6);
            if (lambda > cfg.lambda_cap) break;
        }
        Trajectory improved = nominal;
        if (bp) {
            improved = forward_pass(env, nominal, *bp, cfg.alphas);
            lambda = std::max(lambda * cfg.lambda_shrink, 0.0);
        }

        Vec a = improved.actions[0].cwiseMax(-1.0).cwiseMin(1.0);
        log.states.push_back(env.state());
        log.actions.push_back(a);
        auto sr = env.step(a);
        log.rewards.push_back(sr.reward);
        log.episode_return += sr.reward;
        ++log.steps;
        if (sr.done) break;

        plan.assign(improved.actions.begin() + 1, improved.actions.end());
        plan.push_back(improved.actions.back());
    }
    return log;
}

// Per-env default horizons (0.5 s of lookahead each).
inline PlannerConfig default_planner_config(const std::string& env_name) {
    PlannerConfig cfg;
    cfg.horizon = (env_name == "cartpole_balance" || env_name == "cartpole_swingup") ? 25 : 10;
    return cfg;
}

}  // namespace ddpg::planner

#pragma once

#include "ddpg/envs/env.hpp"

namespace ddpg::envs {

// Standard frictionless cart-pole (cart mass 1, pole mass 0.1, half-length
// 0.5, g=9.8, force scale 10 N, dt=0.02). theta is measured from upright.
// State is (x, xdot, theta, omega); leaving the |x| <= 2.4 track terminates
// the episode with reward -1. Balance and swing-up share the dynamics and
// reward and differ in start distribution and planner cost.
class CartpoleBase : public Environment {
public:
    double mc = 1.0, mp = 0.1, hl = 0.5, g = 9.8;
    double force_scale = 10.0;
    double dt_ = 0.02;
    double x_limit = 2.4;

    CartpoleBase() {
        state_ = Vec::Zero(4);
        max_steps = 200;
    }

    int obs_dim() const override { return 5; }
    int act_dim() const override { return 1; }
    int state_dim() const override { return 4; }
    double dt() const override { return dt_; }

    Vec dynamics(const Vec& s, const Vec& a) const override {
        const double F = force_scale * a[0];
        const double sth = std::sin(s[2]), cth = std::cos(s[2]);
        const double om = s[3];
        const double tmp = (F + mp * hl * om * om * sth) / (mc + mp);
        const double thacc = (g * sth - cth * tmp) /
                             (hl * (4.0 / 3.0 - mp * cth * cth / (mc + mp)));
        const double xacc = tmp - mp * hl * thacc * cth / (mc + mp);
        Vec out(4);
        out[3] = om + dt_ * thacc;
        out[2] = wrap_angle(s[2] + dt_ * out[3]);
        out[1] = s[1] + dt_ * xacc;
        out[0] = s[0] + dt_ * out[1];
        return out;
    }

    double reward(const Vec& s, const Vec& a) const override {
        const double u = force_scale * std::clamp(a[0], -1.0, 1.0);
        return std::cos(s[2]) - 0.001 * u * u - 0.05 * s[0] * s[0];
    }

    Vec observe(const Vec& s) const override {
        Vec o(5);
        o << s[0], s[1], std::cos(s[2]), std::sin(s[2]), s[3];
        return o;
    }

    bool terminal(const Vec& s) const override { return std::abs(s[0]) > x_limit; }

    Vec state_delta(const Vec& a, const Vec& b) const override {
        Vec d = a - b;
        d[2] = wrap_angle(d[2]);
        return d;
    }

protected:
    // Pole energy about the pivot: J = (4/3) mp hl^2 (uniform pole), with
    // potential mp*g*hl*cos(theta); upright value E_up = mp*g*hl.
    double pole_energy(const Vec& s) const {
        const double J = 4.0 / 3.0 * mp * hl * hl;
        return 0.5 * J * s[3] * s[3] + mp * g * hl * std::cos(s[2]);
    }
};

class CartpoleBalance : public CartpoleBase {
public:
    std::string name() const override { return "cartpole_balance"; }

    // Smooth shift of -reward (constant +1 keeps it nonnegative).
    double cost(const Vec& s, const Vec& a) const override {
        const double u = force_scale * a[0];
        return (1.0 - std::cos(s[2])) + 0.05 * s[0] * s[0] + 0.001 * u * u;
    }

    void reset(std::uint64_t seed) override {
        Rng rng(seed);
        state_ = Vec(4);
        for (int i = 0; i < 4; ++i) state_[i] = rng.uniform(-0.05, 0.05);
        t_ = 0;
    }
};

class CartpoleSwingup : public CartpoleBase {
public:
    std::string name() const override { return "cartpole_swingup"; }

    // Energy-shaped surrogate (see pendulum.hpp for why the raw -reward
    // cannot start a swing-up); the soft track barrier at |x|=1.2 keeps the
    // pumping cart well inside the terminal limit.
    double cost(const Vec& s, const Vec& a) const override {
        const double u = force_scale * a[0];
        const double Eup = mp * g * hl;
        const double dE = pole_energy(s) - Eup;
        const double c = std::cos(s[2]);
        const double gate = 0.5 * (1.0 + c);
        const double bar = std::max(0.0, std::abs(s[0]) - 1.2);
        return 5.0 * dE * dE + 3.0 * (1.0 - c) + 0.1 * s[3] * s[3] * gate +
               0.3 * s[0] * s[0] + 0.05 * s[1] * s[1] + 10.0 * bar * bar +
               0.001 * u * u;
    }

    void reset(std::uint64_t seed) override {
        Rng rng(seed);
        state_ = Vec(4);
        state_[0] = rng.uniform(-0.05, 0.05);
        state_[1] = rng.uniform(-0.05, 0.05);
        state_[2] = wrap_angle(M_PI + rng.uniform(-0.1, 0.1));
        state_[3] = rng.uniform(-0.05, 0.05);
        t_ = 0;
    }
};

}  // namespace ddpg::envs

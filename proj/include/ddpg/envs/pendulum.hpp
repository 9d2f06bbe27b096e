#pragma once

#include "ddpg/envs/env.hpp"

namespace ddpg::envs {

// Torque-limited pendulum swing-up. theta is measured from upright and kept
// in (-pi, pi]; max torque (2 N*m) is below m*g*l (10), so the pole must be
// pumped. Semi-implicit Euler at dt=0.05.
//
// Planner cost: -reward has zero gradient at the hanging fixed point and the
// angle-wrap kink sits exactly there, so the receding-horizon planner cannot
// start pumping from it. The smooth surrogate drives the total energy
// E = 0.5*w^2 + g*cos(theta) toward slightly above the upright value (so the
// pole arrives inside the torque-limited capture region), pulls the position
// upright, and damps velocity only near the top.
class Pendulum : public Environment {
public:
    double g = 10.0, m = 1.0, l = 1.0;
    double torque_scale = 2.0;
    double dt_ = 0.05;

    Pendulum() {
        state_ = Vec::Zero(2);
        max_steps = 200;
    }

    std::string name() const override { return "pendulum"; }
    int obs_dim() const override { return 3; }
    int act_dim() const override { return 1; }
    int state_dim() const override { return 2; }
    double dt() const override { return dt_; }

    Vec dynamics(const Vec& s, const Vec& a) const override {
        const double u = torque_scale * a[0];
        const double om = s[1] + dt_ * (g / l * std::sin(s[0]) + u / (m * l * l));
        Vec out(2);
        out[0] = wrap_angle(s[0] + dt_ * om);
        out[1] = om;
        return out;
    }

    double reward(const Vec& s, const Vec& a) const override {
        const double u = torque_scale * std::clamp(a[0], -1.0, 1.0);
        const double th = wrap_angle(s[0]);
        return -(th * th + 0.1 * s[1] * s[1] + 0.001 * u * u);
    }

    double cost(const Vec& s, const Vec& a) const override {
        const double u = torque_scale * a[0];
        const double c = std::cos(s[0]);
        const double E = 0.5 * s[1] * s[1] + g * c;
        const double gate = 0.5 * (1.0 + c);
        return 0.04 * (E - 10.2) * (E - 10.2) + (1.0 - c) +
               0.1 * s[1] * s[1] * gate + 0.001 * u * u;
    }

    Vec observe(const Vec& s) const override {
        Vec o(3);
        o << std::cos(s[0]), std::sin(s[0]), s[1];
        return o;
    }

    Vec state_delta(const Vec& a, const Vec& b) const override {
        Vec d = a - b;
        d[0] = wrap_angle(d[0]);
        return d;
    }

    void reset(std::uint64_t seed) override {
        Rng rng(seed);
        state_ = Vec(2);
        state_[0] = wrap_angle(M_PI + rng.uniform(-0.1, 0.1));
        state_[1] = rng.uniform(-0.1, 0.1);
        t_ = 0;
    }
};

}  // namespace ddpg::envs

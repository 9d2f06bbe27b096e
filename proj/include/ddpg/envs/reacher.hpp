#pragma once

#include "ddpg/envs/env.hpp"

namespace ddpg::envs {

// 1-DOF planar arm (no gravity, unit inertia, torque scale 2 N*m) reaching a
// per-episode random target angle. State is (theta, omega, target); the
// target is constant under the dynamics but lives in the state vector so the
// planner differentiates through a complete description.
//
// The +1 proximity bonus (within 0.05 rad) is discontinuous, so the planner
// cost replaces the wrapped quadratic distance with 2*(1-cos(theta-target))
// and omits the bonus; a small omega term damps the approach (the reward has
// no velocity term to do it).
class ReacherSingle : public Environment {
public:
    double torque_scale = 2.0;
    double dt_ = 0.05;
    double target_radius = 0.05;

    ReacherSingle() {
        state_ = Vec::Zero(3);
        max_steps = 200;
    }

    std::string name() const override { return "reacher_single"; }
    int obs_dim() const override { return 5; }
    int act_dim() const override { return 1; }
    int state_dim() const override { return 3; }
    double dt() const override { return dt_; }

    Vec dynamics(const Vec& s, const Vec& a) const override {
        const double u = torque_scale * a[0];
        const double om = s[1] + dt_ * u;
        Vec out(3);
        out << wrap_angle(s[0] + dt_ * om), om, s[2];
        return out;
    }

    double reward(const Vec& s, const Vec& a) const override {
        const double u = torque_scale * std::clamp(a[0], -1.0, 1.0);
        const double d = wrap_angle(s[0] - s[2]);
        double r = -(d * d + 0.001 * u * u);
        if (std::abs(d) < target_radius) r += 1.0;
        return r;
    }

    double cost(const Vec& s, const Vec& a) const override {
        const double u = torque_scale * a[0];
        return 2.0 * (1.0 - std::cos(s[0] - s[2])) + 0.1 * s[1] * s[1] +
               0.001 * u * u;
    }

    Vec observe(const Vec& s) const override {
        Vec o(5);
        o << std::cos(s[0]), std::sin(s[0]), s[1], std::cos(s[2]), std::sin(s[2]);
        return o;
    }

    Vec state_delta(const Vec& a, const Vec& b) const override {
        Vec d = a - b;
        d[0] = wrap_angle(d[0]);
        d[2] = wrap_angle(d[2]);
        return d;
    }

    void reset(std::uint64_t seed) override {
        Rng rng(seed);
        state_ = Vec(3);
        state_[0] = rng.uniform(-M_PI, M_PI);
        state_[1] = 0.0;
        state_[2] = rng.uniform(-M_PI, M_PI);
        t_ = 0;
    }
};

}  // namespace ddpg::envs

#pragma once

#include "ddpg/envs/env.hpp"

namespace ddpg::envs {

// Point mass on a line, driven to rest at the origin. The quadratic -reward
// is already a smooth cost, so the planner uses it verbatim; this is also the
// LQR-checkable case (dynamics are exactly linear).
class Cart : public Environment {
public:
    double m = 1.0;
    double force_scale = 10.0;
    double dt_ = 0.05;

    Cart() {
        state_ = Vec::Zero(2);
        max_steps = 200;
    }

    std::string name() const override { return "cart"; }
    int obs_dim() const override { return 2; }
    int act_dim() const override { return 1; }
    int state_dim() const override { return 2; }
    double dt() const override { return dt_; }

    Vec dynamics(const Vec& s, const Vec& a) const override {
        const double f = force_scale * a[0];
        const double v = s[1] + dt_ * f / m;
        Vec out(2);
        out << s[0] + dt_ * v, v;
        return out;
    }

    double reward(const Vec& s, const Vec& a) const override {
        const double f = force_scale * std::clamp(a[0], -1.0, 1.0);
        return -(s[0] * s[0] + 0.1 * s[1] * s[1] + 0.001 * f * f);
    }

    double cost(const Vec& s, const Vec& a) const override {
        const double f = force_scale * a[0];
        return s[0] * s[0] + 0.1 * s[1] * s[1] + 0.001 * f * f;
    }

    Vec observe(const Vec& s) const override { return s; }

    void reset(std::uint64_t seed) override {
        Rng rng(seed);
        state_ = Vec(2);
        state_[0] = rng.uniform(-1.0, 1.0);
        state_[1] = rng.uniform(-0.1, 0.1);
        t_ = 0;
    }
};

}  // namespace ddpg::envs

#pragma once

#include <cmath>

#include "ddpg/core.hpp"

namespace ddpg::agent {

// Ornstein-Uhlenbeck process, Euler-discretized:
//   x += theta*(mu - x)*dt + sigma*sqrt(dt)*N(0,1)
// Stationary std is sqrt(sigma^2 / (theta*(2 - theta*dt))) and lag-1
// autocorrelation 1 - theta*dt.
struct OUNoise {
    double theta = 0.15, sigma = 0.2, dt = 1.0, mu = 0.0;
    Vec x;

    explicit OUNoise(int dim) : x(Vec::Zero(dim)) {}

    void reset() { x.setConstant(mu); }

    const Vec& sample(Rng& rng) {
        for (int i = 0; i < x.size(); ++i)
            x[i] += theta * (mu - x[i]) * dt + sigma * std::sqrt(dt) * rng.normal();
        return x;
    }
};

}  // namespace ddpg::agent

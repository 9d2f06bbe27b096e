#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

#include "ddpg/core.hpp"

namespace ddpg::envs {

inline double wrap_angle(double a) {  // to (-pi, pi]
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a <= 0.0) a += 2.0 * M_PI;
    return a - M_PI;
}

struct StepResult {
    Vec obs;
    double reward;
    bool done;            // episode over (terminal state or step limit)
    bool terminal_state;  // true only for genuine terminal states; the time
                          // limit alone leaves this false so the agent can
                          // bootstrap through episode boundaries
};

// Agent-facing MDP plus the planner-facing pure model of the same system.
//
// step() clips actions to [-1,1]^act_dim (executed torque/force is scale *
// clipped action) and advances the internal state. dynamics() and cost() are
// pure and do not clip, so the planner sees smooth derivatives everywhere;
// its line search and the executed first action apply the clip themselves.
// cost() is -reward shaped into a smooth surrogate (see each env's header).
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    virtual int obs_dim() const = 0;
    virtual int act_dim() const = 0;
    virtual int state_dim() const = 0;
    virtual double dt() const = 0;

    virtual Vec dynamics(const Vec& state, const Vec& action) const = 0;
    virtual double reward(const Vec& state, const Vec& action) const = 0;
    virtual double cost(const Vec& state, const Vec& action) const = 0;
    virtual Vec observe(const Vec& state) const = 0;
    virtual bool terminal(const Vec& /*state*/) const { return false; }

    // Difference on the state manifold (wraps angle components); used by the
    // planner's finite differences and feedback terms.
    virtual Vec state_delta(const Vec& a, const Vec& b) const { return a - b; }

    virtual void reset(std::uint64_t seed) = 0;

    StepResult step(const Vec& action) {
        const Vec a = action.cwiseMax(-1.0).cwiseMin(1.0);
        double r = reward(state_, a);
        state_ = dynamics(state_, a);
        ++t_;
        const bool term = terminal(state_);
        if (term) r = -1.0;  // termination event overrides the step reward
        const bool done = term || t_ >= max_steps;
        return {observe(state_), r, done, term};
    }

    const Vec& state() const { return state_; }
    void set_state(const Vec& s) { state_ = s; }
    Vec observation() const { return observe(state_); }
    int steps_taken() const { return t_; }

    int max_steps = 200;

protected:
    Vec state_;
    int t_ = 0;
};

}  // namespace ddpg::envs

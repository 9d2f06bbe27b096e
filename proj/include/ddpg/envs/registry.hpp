#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ddpg/envs/cart.hpp"
#include "ddpg/envs/cartpole.hpp"
#include "ddpg/envs/pendulum.hpp"
#include "ddpg/envs/reacher.hpp"

namespace ddpg::envs {

inline std::unique_ptr<Environment> make_env(const std::string& name) {
    if (name == "pendulum") return std::make_unique<Pendulum>();
    if (name == "cart") return std::make_unique<Cart>();
    if (name == "cartpole_balance") return std::make_unique<CartpoleBalance>();
    if (name == "cartpole_swingup") return std::make_unique<CartpoleSwingup>();
    if (name == "reacher_single") return std::make_unique<ReacherSingle>();
    throw std::invalid_argument("unknown environment: " + name);
}

// Applies config-file overrides ({"max_steps": 500, "dt": 0.01, ...}) to a
// freshly constructed env. Unknown keys are errors so typos fail loudly.
inline std::unique_ptr<Environment> make_env(const std::string& name,
                                             const nlohmann::json& overrides) {
    auto env = make_env(name);
    for (const auto& [key, val] : overrides.items()) {
        bool ok = true;
        if (key == "max_steps") {
            env->max_steps = val.get<int>();
        } else if (auto* p = dynamic_cast<Pendulum*>(env.get())) {
            if (key == "dt") p->dt_ = val.get<double>();
            else if (key == "g") p->g = val.get<double>();
            else if (key == "torque_scale") p->torque_scale = val.get<double>();
            else ok = false;
        } else if (auto* c = dynamic_cast<Cart*>(env.get())) {
            if (key == "dt") c->dt_ = val.get<double>();
            else if (key == "m") c->m = val.get<double>();
            else if (key == "force_scale") c->force_scale = val.get<double>();
            else ok = false;
        } else if (auto* cp = dynamic_cast<CartpoleBase*>(env.get())) {
            if (key == "dt") cp->dt_ = val.get<double>();
            else if (key == "force_scale") cp->force_scale = val.get<double>();
            else if (key == "x_limit") cp->x_limit = val.get<double>();
            else ok = false;
        } else if (auto* r = dynamic_cast<ReacherSingle*>(env.get())) {
            if (key == "dt") r->dt_ = val.get<double>();
            else if (key == "torque_scale") r->torque_scale = val.get<double>();
            else if (key == "target_radius") r->target_radius = val.get<double>();
            else ok = false;
        } else {
            ok = false;
        }
        if (!ok) throw std::invalid_argument("unknown env override '" + key +
                                             "' for " + name);
    }
    return env;
}

}  // namespace ddpg::envs

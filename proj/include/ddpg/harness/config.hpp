#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ddpg/agent/config.hpp"
#include "ddpg/planner/ilqg.hpp"

namespace ddpg::planner {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PlannerConfig, horizon,
                                                lambda_init, lambda_factor,
                                                lambda_shrink, lambda_cap,
                                                alphas, fd_h)
}  // namespace ddpg::planner

namespace ddpg::harness {

// Config file schema: a JSON object with optional sections
//   "training":      agent::TrainingConfig fields (missing ones keep defaults)
//   "planner":       planner::PlannerConfig fields (horizon defaults per env)
//   "env_overrides": forwarded to envs::make_env (max_steps, dt, ...)
// CLI flags override file values after parsing.
struct ExperimentConfig {
    agent::TrainingConfig training;
    planner::PlannerConfig planner;
    nlohmann::json env_overrides = nlohmann::json::object();
    bool planner_specified = false;  // file set a horizon; skip env default
};

inline ExperimentConfig load_experiment_config(const std::string& path) {
    ExperimentConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
    if (j.contains("training")) cfg.training = j.at("training").get<agent::TrainingConfig>();
    if (j.contains("planner")) {
        cfg.planner = j.at("planner").get<planner::PlannerConfig>();
        cfg.planner_specified = j.at("planner").contains("horizon");
    }
    if (j.contains("env_overrides")) cfg.env_overrides = j.at("env_overrides");
    for (const auto& [key, _] : j.items())
        if (key != "training" && key != "planner" && key != "env_overrides")
            throw std::runtime_error("unknown config section '" + key + "' in " + path);
    return cfg;
}

}  // namespace ddpg::harness

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ddpg::agent {

// Paper-default hyperparameters. Desk-scale experiment configs override
// hidden sizes and budgets through the harness config file.
struct TrainingConfig {
    double gamma = 0.99;
    double tau = 0.001;
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double weight_decay = 1e-2;  // L2 on critic dense weights
    int batch_size = 64;
    std::int64_t buffer_capacity = 1000000;
    int warmup_steps = 1000;  // uniform random actions before learning
    double ou_theta = 0.15;
    double ou_sigma = 0.2;
    double ou_dt = 1.0;
    std::vector<int> hidden = {400, 300};
    double bn_momentum = 0.99;
    double bn_eps = 1e-5;
    double final_init = 3e-3;
    bool use_target_networks = true;
    bool use_batch_norm = true;
    std::int64_t max_env_steps = 100000;
    int eval_interval = 2000;
    int eval_episodes = 10;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    TrainingConfig, gamma, tau, actor_lr, critic_lr, weight_decay, batch_size,
    buffer_capacity, warmup_steps, ou_theta, ou_sigma, ou_dt, hidden,
    bn_momentum, bn_eps, final_init, use_target_networks, use_batch_norm,
    max_env_steps, eval_interval, eval_episodes)

// FNV-1a over the canonical JSON encoding. The ablation-base variant hashes
// with both ablation flags forced on, so the four arms of an ablation share
// it while differing in the full hash.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t config_hash(const TrainingConfig& c) {
    return fnv1a(nlohmann::json(c).dump());
}

inline std::uint64_t config_hash_ablation_base(TrainingConfig c) {
    c.use_target_networks = true;
    c.use_batch_norm = true;
    return fnv1a(nlohmann::json(c).dump());
}

}  // namespace ddpg::agent

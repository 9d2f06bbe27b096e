#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ddpg/agent/agent.hpp"

namespace ddpg::agent {

// Checkpoint = <prefix>.json manifest + <prefix>.bin of raw little-endian
// float64 in row-major order. Covers all four networks' parameters and batch
// norm running statistics plus the training config; optimizer moments are
// deliberately excluded (a resumed run re-warms Adam).

namespace detail {

inline std::map<std::string, Mat*> tensor_map(nn::Network& net) {
    std::map<std::string, Mat*> m;
    for (auto& p : net.params()) m[p.name] = p.value;
    for (auto& s : net.state_tensors()) m[s.name] = s.value;
    return m;
}

inline const std::array<std::pair<const char*, nn::Network Agent::*>, 4>&
net_slots() {
    static const std::array<std::pair<const char*, nn::Network Agent::*>, 4> a = {
        {{"actor", &Agent::actor},
         {"critic", &Agent::critic},
         {"target_actor", &Agent::target_actor},
         {"target_critic", &Agent::target_critic}}};
    return a;
}

}  // namespace detail

inline void save_checkpoint(const std::string& prefix, Agent& agent,
                            const std::string& env_name, int obs_dim,
                            int act_dim) {
    nlohmann::json manifest;
    manifest["format"] = "ddpg-checkpoint-v1";
    manifest["env"] = env_name;
    manifest["obs_dim"] = obs_dim;
    manifest["act_dim"] = act_dim;
    manifest["config"] = agent.config();
    nlohmann::json tensors = nlohmann::json::array();

    std::ofstream bin(prefix + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write " + prefix + ".bin");
    std::int64_t offset = 0;
    for (const auto& [net_name, slot] : detail::net_slots()) {
        for (auto& [tname, mat] : detail::tensor_map(agent.*slot)) {
            tensors.push_back({{"net", net_name},
                               {"name", tname},
                               {"rows", mat->rows()},
                               {"cols", mat->cols()},
                               {"offset", offset}});
            for (Eigen::Index r = 0; r < mat->rows(); ++r)
                for (Eigen::Index c = 0; c < mat->cols(); ++c) {
                    const double v = (*mat)(r, c);
                    bin.write(reinterpret_cast<const char*>(&v), sizeof v);
                }
            offset += mat->size();
        }
    }
    manifest["total_doubles"] = offset;
    manifest["tensors"] = tensors;

    std::ofstream js(prefix + ".json");
    if (!js) throw std::runtime_error("cannot write " + prefix + ".json");
    js << manifest.dump(2) << "\n";
}

struct LoadedAgent {
    std::unique_ptr<Agent> agent;
    std::string env_name;
    int obs_dim, act_dim;
};

inline LoadedAgent load_checkpoint(const std::string& prefix) {
    std::ifstream js(prefix + ".json");
    if (!js) throw std::runtime_error("cannot read " + prefix + ".json");
    nlohmann::json manifest = nlohmann::json::parse(js);
    if (manifest.at("format") != "ddpg-checkpoint-v1")
        throw std::runtime_error("unrecognized checkpoint format");

    LoadedAgent out;
    out.env_name = manifest.at("env");
    out.obs_dim = manifest.at("obs_dim");
    out.act_dim = manifest.at("act_dim");
    TrainingConfig cfg = manifest.at("config");
    out.agent = std::make_unique<Agent>(out.obs_dim, out.act_dim, cfg, 0);

    std::ifstream bin(prefix + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot read " + prefix + ".bin");
    std::map<std::string, std::map<std::string, Mat*>> by_net;
    for (const auto& [net_name, slot] : detail::net_slots())
        by_net[net_name] = detail::tensor_map(*out.agent.*slot);

    for (const auto& t : manifest.at("tensors")) {
        auto& nets = by_net.at(t.at("net").get<std::string>());
        auto it = nets.find(t.at("name").get<std::string>());
        if (it == nets.end())
            throw std::runtime_error("checkpoint tensor not present in model: " +
                                     t.at("name").get<std::string>());
        Mat& mat = *it->second;
        if (mat.rows() != t.at("rows").get<Eigen::Index>() ||
            mat.cols() != t.at("cols").get<Eigen::Index>())
            throw std::runtime_error("checkpoint shape mismatch for " +
                                     t.at("name").get<std::string>());
        bin.seekg(t.at("offset").get<std::int64_t>() * std::streamoff(sizeof(double)));
        for (Eigen::Index r = 0; r < mat.rows(); ++r)
            for (Eigen::Index c = 0; c < mat.cols(); ++c) {
                double v;
                bin.read(reinterpret_cast<char*>(&v), sizeof v);
                mat(r, c) = v;
            }
        if (!bin) throw std::runtime_error("checkpoint binary truncated");
    }
    return out;
}

}  // namespace ddpg::agent

#pragma once

#include "ddpg/agent/config.hpp"
#include "ddpg/agent/ou_noise.hpp"
#include "ddpg/agent/replay.hpp"
#include "ddpg/nn/adam.hpp"
#include "ddpg/nn/network.hpp"

namespace ddpg::agent {

// DDPG: deterministic actor with a Q critic, trained off-policy from a replay
// buffer with soft-updated target copies. One update() is one cycle of the
// core algorithm: critic regression toward y = r + gamma*Q'(s', mu'(s')),
// actor ascent along the sampled policy gradient, then soft target updates.
//
// Not copyable: the optimizers hold stable references into the networks.
class Agent {
public:
    Agent(int obs_dim, int act_dim, const TrainingConfig& cfg, std::uint64_t seed)
        : cfg_(cfg),
          init_rng_(Rng(seed).fork(0x6e657473)),
          noise_rng_(Rng(seed).fork(0x6e6f6973)),
          batch_rng_(Rng(seed).fork(0x62617463)),
          actor(nn::make_actor(obs_dim, act_dim, cfg.hidden, cfg.use_batch_norm,
                               init_rng_, cfg.final_init, cfg.bn_momentum, cfg.bn_eps)),
          critic(nn::make_critic(obs_dim, act_dim, cfg.hidden, cfg.use_batch_norm,
                                 init_rng_, cfg.final_init, cfg.bn_momentum, cfg.bn_eps)),
          target_actor(actor),
          target_critic(critic),
          actor_opt(actor, cfg.actor_lr),
          critic_opt(critic, cfg.critic_lr, cfg.weight_decay),
          buffer(std::size_t(cfg.buffer_capacity)),
          noise(act_dim) {
        noise.theta = cfg.ou_theta;
        noise.sigma = cfg.ou_sigma;
        noise.dt = cfg.ou_dt;
    }

    Agent(const Agent&) = delete;
    Agent& operator=(const Agent&) = delete;

    Vec act(const Vec& obs) {
        Mat a = actor.forward(obs.transpose(), false);
        return a.row(0).transpose();
    }

    Vec act_explore(const Vec& obs) {
        Vec a = act(obs) + noise.sample(noise_rng_);
        return a.cwiseMax(-1.0).cwiseMin(1.0);
    }

    void begin_episode() { noise.reset(); }

    void observe(Transition t) { buffer.push(std::move(t)); }

    bool ready() const { return int(buffer.size()) >= cfg_.batch_size; }

    double q_value(const Vec& obs, const Vec& action) {
        Mat q = critic.forward(obs.transpose(), action.transpose(), false);
        return q(0, 0);
    }

    struct UpdateStats {
        double critic_loss;
        double actor_objective;  // mean Q(s, mu(s)) on the minibatch
    };

    UpdateStats update() {
        Batch b = buffer.sample(cfg_.batch_size, batch_rng_);
        const double closs = critic_update(b);
        const double aobj = actor_update(b);
        if (cfg_.use_target_networks) {
            nn::soft_update(target_actor, actor, cfg_.tau);
            nn::soft_update(target_critic, critic, cfg_.tau);
        }
        return {closs, aobj};
    }

    double critic_update(const Batch& b) {
        const double N = double(b.r.size());
        // Without target networks the live copies fill the same role.
        nn::Network& ta = cfg_.use_target_networks ? target_actor : actor;
        nn::Network& tc = cfg_.use_target_networks ? target_critic : critic;
        Mat a2 = ta.forward(b.s2, false);
        Mat q2 = tc.forward(b.s2, a2, false);
        Vec y = b.r.array() +
                cfg_.gamma * (1.0 - b.done.array()) * q2.col(0).array();
        Mat q = critic.forward(b.s, b.a, true);
        Vec diff = q.col(0) - y;
        critic.backward(Mat(2.0 / N * diff));
        critic_opt.step();
        return diff.squaredNorm() / N;
    }

    double actor_update(const Batch& b) {
        const double N = double(b.r.size());
        Mat a = actor.forward(b.s, true);
        Mat q = critic.forward(b.s, a, true);
        // Minimize -mean(Q): the critic backward is only run to obtain dQ/da
        // (daux); its parameter gradients are discarded (overwritten by the
        // next critic update, which recomputes them from scratch).
        critic.backward(Mat::Constant(int(N), 1, -1.0 / N));
        actor.backward(critic.daux);
        actor_opt.step();
        return q.mean();
    }

    const TrainingConfig& config() const { return cfg_; }

private:
    TrainingConfig cfg_;
    Rng init_rng_, noise_rng_, batch_rng_;

public:
    nn::Network actor, critic, target_actor, target_critic;
    nn::Adam actor_opt, critic_opt;
    ReplayBuffer buffer;
    OUNoise noise;
};

}  // namespace ddpg::agent

#pragma once

#include <string>
#include <vector>

#include "ddpg/nn/layers.hpp"

namespace ddpg::nn {

struct ParamRef {
    std::string name;
    Mat* value;
    Mat* grad;
    bool decay;  // participates in L2 weight decay (dense weights only)
};

struct StateRef {  // non-learnable tensors that still belong to the function
    std::string name;
    Mat* value;
};

// A feed-forward stack with an optional auxiliary input joined part-way
// through: forward concatenates `aux` onto the hidden activation right before
// layers[aux_at], and backward splits the corresponding input gradient into
// the main path and `daux`. The critic uses this to take actions at its
// second dense layer; `daux` is then the action gradient the actor needs.
struct Network {
    std::vector<Layer> layers;
    int aux_at = -1;
    int aux_dim = 0;
    Mat daux;

    Mat forward(const Mat& X, const Mat& aux, bool train) {
        Mat h = X;
        for (int i = 0; i < int(layers.size()); ++i) {
            if (i == aux_at) {
                Mat joined(h.rows(), h.cols() + aux.cols());
                joined << h, aux;
                h = joined;
            }
            h = layer_forward(layers[i], h, train);
        }
        return h;
    }

    Mat forward(const Mat& X, bool train) { return forward(X, Mat(X.rows(), 0), train); }

    // Propagates dY back through the stack, filling every parameter gradient.
    // Returns the gradient w.r.t. the main input; daux gets the aux part.
    Mat backward(const Mat& dY) {
        Mat g = dY;
        for (int i = int(layers.size()) - 1; i >= 0; --i) {
            g = layer_backward(layers[i], g);
            if (i == aux_at) {
                const auto main_cols = g.cols() - aux_dim;
                daux = g.rightCols(aux_dim);
                g = Mat(g.leftCols(main_cols));
            }
        }
        return g;
    }

    std::vector<ParamRef> params() {
        std::vector<ParamRef> out;
        for (int i = 0; i < int(layers.size()); ++i) {
            const std::string p = "layer" + std::to_string(i) + ".";
            if (auto* d = std::get_if<Dense>(&layers[i])) {
                out.push_back({p + "W", &d->W, &d->dW, true});
                out.push_back({p + "b", &d->b, &d->db, false});
            } else if (auto* bn = std::get_if<BatchNorm>(&layers[i])) {
                out.push_back({p + "gamma", &bn->gamma, &bn->dgamma, false});
                out.push_back({p + "beta", &bn->beta, &bn->dbeta, false});
            }
        }
        return out;
    }

    std::vector<StateRef> state_tensors() {
        std::vector<StateRef> out;
        for (int i = 0; i < int(layers.size()); ++i) {
            const std::string p = "layer" + std::to_string(i) + ".";
            if (auto* bn = std::get_if<BatchNorm>(&layers[i])) {
                out.push_back({p + "run_mean", &bn->run_mean});
                out.push_back({p + "run_var", &bn->run_var});
            }
        }
        return out;
    }

    void zero_grads() {
        for (auto& p : params()) p.grad->setZero();
    }
};

// theta' <- tau*theta + (1-tau)*theta', including BN running statistics so the
// target remains a coherent eval-mode function.
inline void soft_update(Network& target, Network& source, double tau) {
    auto tp = target.params();
    auto sp = source.params();
    for (size_t i = 0; i < tp.size(); ++i)
        *tp[i].value = tau * *sp[i].value + (1.0 - tau) * *tp[i].value;
    auto ts = target.state_tensors();
    auto ss = source.state_tensors();
    for (size_t i = 0; i < ts.size(); ++i)
        *ts[i].value = tau * *ss[i].value + (1.0 - tau) * *ts[i].value;
}

// mu network: obs -> tanh action. Batch norm (when enabled) whitens the state
// input and every pre-activation, the output layer's included; normalizing the
// pre-tanh values keeps the initial policy near zero and bounds how deeply the
// tanh can saturate.
inline Network make_actor(int obs_dim, int act_dim, const std::vector<int>& hidden,
                          bool batch_norm, Rng& rng, double final_init = 3e-3,
                          double bn_momentum = 0.99, double bn_eps = 1e-5) {
    Network net;
    if (batch_norm) net.layers.emplace_back(BatchNorm(obs_dim, bn_momentum, bn_eps));
    int in = obs_dim;
    for (int h : hidden) {
        net.layers.emplace_back(Dense(in, h, rng));
        if (batch_norm) net.layers.emplace_back(BatchNorm(h, bn_momentum, bn_eps));
        net.layers.emplace_back(Activation(Act::Relu));
        in = h;
    }
    net.layers.emplace_back(Dense(in, act_dim, rng, final_init));
    if (batch_norm) net.layers.emplace_back(BatchNorm(act_dim, bn_momentum, bn_eps));
    net.layers.emplace_back(Activation(Act::Tanh));
    return net;
}

// Q network: (obs, action) -> scalar. Actions join at the second dense layer;
// batch norm covers the layers before that join only.
inline Network make_critic(int obs_dim, int act_dim, const std::vector<int>& hidden,
                           bool batch_norm, Rng& rng, double final_init = 3e-3,
                           double bn_momentum = 0.99, double bn_eps = 1e-5) {
    Network net;
    if (batch_norm) net.layers.emplace_back(BatchNorm(obs_dim, bn_momentum, bn_eps));
    net.layers.emplace_back(Dense(obs_dim, hidden[0], rng));
    if (batch_norm) net.layers.emplace_back(BatchNorm(hidden[0], bn_momentum, bn_eps));
    net.layers.emplace_back(Activation(Act::Relu));
    net.aux_at = int(net.layers.size());
    net.aux_dim = act_dim;
    int in = hidden[0] + act_dim;
    for (size_t i = 1; i < hidden.size(); ++i) {
        net.layers.emplace_back(Dense(in, hidden[i], rng));
        net.layers.emplace_back(Activation(Act::Relu));
        in = hidden[i];
    }
    net.layers.emplace_back(Dense(in, 1, rng, final_init));
    return net;
}

}  // namespace ddpg::nn

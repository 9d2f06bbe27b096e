#pragma once

#include <cmath>
#include <vector>

#include "ddpg/nn/network.hpp"

namespace ddpg::nn {

// Adam with bias correction. weight_decay is classic coupled L2: lambda*w is
// added to the gradient of decaying parameters (dense weights) before the
// moment updates.
struct Adam {
    double lr;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    double weight_decay = 0.0;
    std::vector<ParamRef> refs;
    std::vector<Mat> m, v;
    long t = 0;

    Adam(Network& net, double lr_, double weight_decay_ = 0.0)
        : lr(lr_), weight_decay(weight_decay_), refs(net.params()) {
        for (auto& r : refs) {
            m.push_back(Mat::Zero(r.value->rows(), r.value->cols()));
            v.push_back(Mat::Zero(r.value->rows(), r.value->cols()));
        }
    }

    void step() {
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, double(t));
        const double bc2 = 1.0 - std::pow(beta2, double(t));
        for (size_t i = 0; i < refs.size(); ++i) {
            Mat g = *refs[i].grad;
            if (refs[i].decay && weight_decay != 0.0) g += weight_decay * *refs[i].value;
            m[i] = beta1 * m[i] + (1.0 - beta1) * g;
            v[i] = beta2 * v[i].array() + (1.0 - beta2) * g.array().square();
            refs[i].value->array() -=
                lr * (m[i].array() / bc1) / ((v[i].array() / bc2).sqrt() + eps);
        }
    }
};

}  // namespace ddpg::nn

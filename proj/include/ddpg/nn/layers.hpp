#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include "ddpg/core.hpp"

namespace ddpg::nn {

// Batches are row-major: X is (N x in), Y is (N x out).
// Each layer caches what its backward pass needs from the latest forward.

struct Dense {
    Mat W;   // (out x in)
    Mat b;   // (1 x out)
    Mat dW, db;
    Mat X;  // cached input

    // init_range > 0: U[-init_range, init_range]; otherwise the fan-in rule
    // U[-1/sqrt(in), 1/sqrt(in)]. Both apply to W and b alike.
    Dense(int in, int out, Rng& rng, double init_range = 0.0) {
        const double r = init_range > 0.0 ? init_range : 1.0 / std::sqrt(double(in));
        W = Mat::NullaryExpr(out, in, [&] { return rng.uniform(-r, r); });
        b = Mat::NullaryExpr(1, out, [&] { return rng.uniform(-r, r); });
        dW = Mat::Zero(out, in);
        db = Mat::Zero(1, out);
    }

    Mat forward(const Mat& in, bool /*train*/) {
        X = in;
        return (in * W.transpose()).rowwise() + b.row(0);
    }

    Mat backward(const Mat& dY) {
        dW = dY.transpose() * X;
        db = dY.colwise().sum();
        return dY * W;
    }
};

struct BatchNorm {
    Mat gamma, beta;          // (1 x dim)
    Mat dgamma, dbeta;
    Mat run_mean, run_var;    // running statistics used in eval mode
    double momentum, eps;

    // caches
    Mat Xc;     // centered input (train) / raw input (eval)
    Mat xhat;
    Mat istd;   // (1 x dim)
    bool last_train = false;

    BatchNorm(int dim, double momentum_ = 0.99, double eps_ = 1e-5)
        : momentum(momentum_), eps(eps_) {
        gamma = Mat::Ones(1, dim);
        beta = Mat::Zero(1, dim);
        dgamma = Mat::Zero(1, dim);
        dbeta = Mat::Zero(1, dim);
        run_mean = Mat::Zero(1, dim);
        run_var = Mat::Ones(1, dim);
    }

    Mat forward(const Mat& X, bool train) {
        last_train = train;
        const auto N = double(X.rows());
        if (train) {
            Mat mu = X.colwise().mean();
            Xc = X.rowwise() - mu.row(0);
            Mat var = Xc.array().square().colwise().sum() / N;  // biased
            istd = (var.array() + eps).rsqrt();
            xhat = Xc.array().rowwise() * istd.row(0).array();
            run_mean = momentum * run_mean + (1.0 - momentum) * mu;
            run_var = momentum * run_var + (1.0 - momentum) * var;
        } else {
            Xc = X;
            istd = (run_var.array() + eps).rsqrt();
            xhat = (X.rowwise() - run_mean.row(0)).array().rowwise() *
                   istd.row(0).array();
        }
        Mat Y = xhat.array().rowwise() * gamma.row(0).array();
        return Y.rowwise() + beta.row(0);
    }

    Mat backward(const Mat& dY) {
        dgamma = (dY.array() * xhat.array()).colwise().sum();
        dbeta = dY.colwise().sum();
        Mat dxhat = dY.array().rowwise() * gamma.row(0).array();
        if (!last_train) {  // eval-mode BN is a fixed affine map
            return dxhat.array().rowwise() * istd.row(0).array();
        }
        const auto N = double(dY.rows());
        Mat i3 = istd.array().cube();
        Mat dvar =
            (dxhat.array() * Xc.array()).colwise().sum() * (-0.5) * i3.array();
        Mat dmu = (dxhat.colwise().sum().array() * -istd.array()) +
                  dvar.array() * (Xc.colwise().sum().array() * (-2.0 / N));
        Mat dX = dxhat.array().rowwise() * istd.row(0).array();
        dX.array() += Xc.array().rowwise() * (dvar.row(0).array() * (2.0 / N));
        dX.array().rowwise() += dmu.row(0).array() / N;
        return dX;
    }
};

enum class Act { Relu, Tanh };

struct Activation {
    Act kind;
    Mat Y;  // cached output

    explicit Activation(Act k) : kind(k) {}

    Mat forward(const Mat& X, bool /*train*/) {
        if (kind == Act::Relu)
            Y = X.array().max(0.0);
        else
            Y = X.array().tanh();
        return Y;
    }

    Mat backward(const Mat& dY) {
        if (kind == Act::Relu)
            return ((Y.array() > 0.0).cast<double>() * dY.array()).matrix();
        return ((1.0 - Y.array().square()) * dY.array()).matrix();
    }
};

using Layer = std::variant<Dense, BatchNorm, Activation>;

inline Mat layer_forward(Layer& l, const Mat& X, bool train) {
    return std::visit([&](auto& v) { return v.forward(X, train); }, l);
}

inline Mat layer_backward(Layer& l, const Mat& dY) {
    return std::visit([&](auto& v) { return v.backward(dY); }, l);
}

}  // namespace ddpg::nn

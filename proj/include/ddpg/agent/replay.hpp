#pragma once

#include <cstddef>
#include <vector>

#include "ddpg/core.hpp"

namespace ddpg::agent {

struct Transition {
    Vec s, a;
    double r;
    Vec s2;
    bool done;  // genuine terminal only; time-limit ends bootstrap through
};

struct Batch {
    Mat s, a, s2;   // (N x dim)
    Vec r, done;    // (N)
};

// Bounded FIFO store sampled uniformly with replacement.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        data_.reserve(std::min<std::size_t>(capacity, 1 << 20));
    }

    void push(Transition t) {
        if (data_.size() < capacity_) {
            data_.push_back(std::move(t));
        } else {
            data_[head_] = std::move(t);  // overwrite oldest
            head_ = (head_ + 1) % capacity_;
        }
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return data_[i]; }

    // Oldest-first view index (for FIFO inspection in tests).
    const Transition& oldest(std::size_t i) const {
        return data_[(head_ + i) % data_.size()];
    }

    Batch sample(int n, Rng& rng) const {
        const int sdim = int(data_[0].s.size());
        const int adim = int(data_[0].a.size());
        Batch b;
        b.s = Mat(n, sdim);
        b.a = Mat(n, adim);
        b.s2 = Mat(n, sdim);
        b.r = Vec(n);
        b.done = Vec(n);
        for (int i = 0; i < n; ++i) {
            const Transition& t = data_[rng.index(data_.size())];
            b.s.row(i) = t.s.transpose();
            b.a.row(i) = t.a.transpose();
            b.s2.row(i) = t.s2.transpose();
            b.r[i] = t.r;
            b.done[i] = t.done ? 1.0 : 0.0;
        }
        return b;
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next eviction slot once full
    std::vector<Transition> data_;
};

}  // namespace ddpg::agent

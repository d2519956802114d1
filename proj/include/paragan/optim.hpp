#pragma once

#include <cmath>
#include <vector>

#include "paragan/nets.hpp"

namespace paragan {

// Adaptive moment estimation. Moment buffers are part of checkpoint state.
template <typename T>
class Adam {
public:
    Adam() = default;
    Adam(ParamList<T> params, T lr, T beta1, T beta2, T eps = T(1e-8))
        : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2),
          eps_(eps) {
        m_.reserve(params_.size());
        v_.reserve(params_.size());
        for (const auto& p : params_) {
            m_.emplace_back(p.node->value.shape());
            v_.emplace_back(p.node->value.shape());
        }
    }

    void set_lr(T lr) { lr_ = lr; }
    T lr() const { return lr_; }

    void zero_grad() {
        for (const auto& p : params_) p.node->zero_grad();
    }

    void step() {
        ++t_;
        const T bc1 = T(1) - std::pow(beta1_, T(t_));
        const T bc2 = T(1) - std::pow(beta2_, T(t_));
        for (std::size_t i = 0; i < params_.size(); ++i) {
            auto& p = *params_[i].node;
            if (p.grad.size() != p.value.size()) continue;  // no grad recorded
            Tensor<T>& m = m_[i];
            Tensor<T>& v = v_[i];
            for (int k = 0; k < p.value.size(); ++k) {
                const T g = p.grad[k];
                m[k] = beta1_ * m[k] + (T(1) - beta1_) * g;
                v[k] = beta2_ * v[k] + (T(1) - beta2_) * g * g;
                p.value[k] -=
                    lr_ * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + eps_);
            }
        }
    }

    std::vector<Tensor<T>>& moments1() { return m_; }
    std::vector<Tensor<T>>& moments2() { return v_; }
    long step_count() const { return t_; }
    void set_step_count(long t) { t_ = t; }
    const ParamList<T>& params() const { return params_; }

private:
    ParamList<T> params_;
    std::vector<Tensor<T>> m_, v_;
    T lr_ = T(2e-4), beta1_ = T(0.9), beta2_ = T(0.999), eps_ = T(1e-8);
    long t_ = 0;
};

}  // namespace paragan

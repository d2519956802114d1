#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "paragan/ops.hpp"

namespace paragan {

struct LossWeights {
    double lambda_proj = 0.1;
    double lambda_cyc = 10.0;
    double alpha = 0.2;
};

struct LossReport {
    double adv_g = 0.0;
    double adv_d = 0.0;
    double proj = 0.0;
    double cyc = 0.0;
    double total = 0.0;
};

enum class GenAdvMode { NonSaturating, Literal };

namespace scalar_detail {
template <typename T>
T softplus_stable(T x) {
    return std::max(x, T(0)) + std::log1p(std::exp(-std::abs(x)));
}
}  // namespace scalar_detail

// --- Plain evaluations -------------------------------------------------
// Direct arithmetic forms, used for reporting and as the reference the
// graph-based forms are checked against.

template <typename T>
T hinge_loss(const std::vector<T>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("hinge_loss: length mismatch");
    if (scores.empty()) throw std::invalid_argument("hinge_loss: empty input");
    T acc = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1 && labels[i] != -1)
            throw std::invalid_argument("hinge_loss: labels must be -1 or +1");
        acc += std::max(T(0), T(1) - T(labels[i]) * scores[i]);
    }
    return acc / T(scores.size());
}

template <typename T>
T adv_d_value(const std::vector<T>& real_logits,
              const std::vector<T>& fake_logits) {
    if (real_logits.empty() || fake_logits.empty())
        throw std::invalid_argument("adv_d_value: empty batch");
    T a = 0, b = 0;
    for (T l : real_logits) a += scalar_detail::softplus_stable(-l);
    for (T l : fake_logits) b += scalar_detail::softplus_stable(l);
    return a / T(real_logits.size()) + b / T(fake_logits.size());
}

template <typename T>
T adv_g_value(const std::vector<T>& fake_logits, GenAdvMode mode) {
    if (fake_logits.empty())
        throw std::invalid_argument("adv_g_value: empty batch");
    T acc = 0;
    for (T l : fake_logits)
        acc += mode == GenAdvMode::NonSaturating
                   ? scalar_detail::softplus_stable(-l)
                   : -scalar_detail::softplus_stable(l);
    return acc / T(fake_logits.size());
}

template <typename T>
T projection_value(const std::vector<T>& scores_xy, const std::vector<T>& d_y,
                   const std::vector<T>& scores_yx,
                   const std::vector<T>& d_x) {
    if (scores_xy.size() != d_y.size() || scores_yx.size() != d_x.size())
        throw std::invalid_argument("projection_value: length mismatch");
    T a = 0, b = 0;
    for (std::size_t i = 0; i < scores_xy.size(); ++i) {
        const T r = d_y[i] - scores_xy[i];  // target +d_y for X->Y
        a += r * r;
    }
    for (std::size_t i = 0; i < scores_yx.size(); ++i) {
        const T r = -d_x[i] - scores_yx[i];  // target -d_x for Y->X
        b += r * r;
    }
    if (!scores_xy.empty()) a /= T(scores_xy.size());
    if (!scores_yx.empty()) b /= T(scores_yx.size());
    return a + b;
}

template <typename T>
T cycle_value(const Tensor<T>& x, const Tensor<T>& x_rec, const Tensor<T>& y,
              const Tensor<T>& y_rec) {
    if (!x.same_shape(x_rec) || !y.same_shape(y_rec))
        throw std::invalid_argument("cycle_value: shape mismatch");
    T a = 0, b = 0;
    for (int i = 0; i < x.size(); ++i) a += std::abs(x[i] - x_rec[i]);
    for (int i = 0; i < y.size(); ++i) b += std::abs(y[i] - y_rec[i]);
    if (x.size()) a /= T(x.size());
    if (y.size()) b /= T(y.size());
    return a + b;
}

// Combines the generator-side pieces into the weighted objective.
inline LossReport total_paragan_loss(double adv_g_x2y, double adv_g_y2x,
                                     double adv_d, double proj, double cyc,
                                     const LossWeights& w) {
    for (double v : {adv_g_x2y, adv_g_y2x, adv_d, proj, cyc})
        if (!std::isfinite(v))
            throw std::invalid_argument("total_paragan_loss: non-finite input");
    LossReport r;
    r.adv_g = adv_g_x2y + adv_g_y2x;
    r.adv_d = adv_d;
    r.proj = proj;
    r.cyc = cyc;
    r.total = r.adv_g + w.lambda_proj * proj + w.lambda_cyc * cyc;
    return r;
}

template <typename T>
T downstream_value(const std::vector<T>& real_scores,
                   const std::vector<int>& real_labels,
                   const std::vector<T>& syn_scores,
                   const std::vector<int>& syn_labels, T alpha) {
    if (real_scores.empty())
        throw std::invalid_argument("downstream_value: empty real batch");
    if (alpha < T(0))
        throw std::invalid_argument("downstream_value: alpha must be >= 0");
    T loss = hinge_loss(real_scores, real_labels);
    if (!syn_scores.empty()) loss += alpha * hinge_loss(syn_scores, syn_labels);
    return loss;
}

// --- Graph forms --------------------------------------------------------
// Same quantities as differentiable scalar nodes over score / logit nodes.

template <typename T>
NodePtr<T> hinge_loss_node(const NodePtr<T>& scores,
                           const std::vector<int>& labels) {
    if (scores->value.size() != static_cast<int>(labels.size()))
        throw std::invalid_argument("hinge_loss_node: length mismatch");
    if (labels.empty())
        throw std::invalid_argument("hinge_loss_node: empty input");
    Tensor<T> neg_t(scores->value.shape());
    for (std::size_t i = 0; i < labels.size(); ++i)
        neg_t[static_cast<int>(i)] = T(-labels[i]);
    return mean_all(relu(add_scalar(mul_elem_const(scores, std::move(neg_t)), T(1))));
}

// Discriminator objective: -E[log sig(real)] - E[log(1 - sig(fake))],
// computed in logit space.
template <typename T>
NodePtr<T> adv_d_loss_node(const NodePtr<T>& real_logits,
                           const NodePtr<T>& fake_logits) {
    return add(mean_all(softplus(neg(real_logits))),
               mean_all(softplus(fake_logits)));
}

// Generator objective: non-saturating -E[log sig(fake)], or the literal
// E[log(1 - sig(fake))] minimized as written.
template <typename T>
NodePtr<T> adv_g_loss_node(const NodePtr<T>& fake_logits, GenAdvMode mode) {
    if (mode == GenAdvMode::NonSaturating)
        return mean_all(softplus(neg(fake_logits)));
    return neg(mean_all(softplus(fake_logits)));
}

// Squared reconstruction error of the conditioning targets from synthetic
// scores: targets are +d_y on the X->Y path and -d_x on the Y->X path.
template <typename T>
NodePtr<T> projection_loss_node(const NodePtr<T>& scores_xy,
                                const std::vector<T>& d_y,
                                const NodePtr<T>& scores_yx,
                                const std::vector<T>& d_x) {
    if (scores_xy->value.size() != static_cast<int>(d_y.size()) ||
        scores_yx->value.size() != static_cast<int>(d_x.size()))
        throw std::invalid_argument("projection_loss_node: length mismatch");
    Tensor<T> tgt_y(scores_xy->value.shape());
    for (int i = 0; i < tgt_y.size(); ++i) tgt_y[i] = d_y[static_cast<std::size_t>(i)];
    Tensor<T> tgt_x(scores_yx->value.shape());
    for (int i = 0; i < tgt_x.size(); ++i) tgt_x[i] = -d_x[static_cast<std::size_t>(i)];
    auto a = mean_all(square(sub(make_leaf(std::move(tgt_y), false), scores_xy)));
    auto b = mean_all(square(sub(make_leaf(std::move(tgt_x), false), scores_yx)));
    return add(a, b);
}

// Mean per-pixel L1 of both reconstruction directions.
template <typename T>
NodePtr<T> cycle_loss_node(const NodePtr<T>& x, const NodePtr<T>& x_rec,
                           const NodePtr<T>& y, const NodePtr<T>& y_rec) {
    return add(mean_all(abs_op(sub(x, x_rec))),
               mean_all(abs_op(sub(y, y_rec))));
}

template <typename T>
NodePtr<T> downstream_loss_node(const NodePtr<T>& real_scores,
                                const std::vector<int>& real_labels,
                                const NodePtr<T>* syn_scores,
                                const std::vector<int>& syn_labels, T alpha) {
    auto loss = hinge_loss_node(real_scores, real_labels);
    if (syn_scores != nullptr && !syn_labels.empty() && alpha > T(0))
        loss = add(loss,
                   mul_scalar(hinge_loss_node(*syn_scores, syn_labels), alpha));
    return loss;
}

}  // namespace paragan

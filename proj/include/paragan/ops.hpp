#pragma once

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "paragan/tensor.hpp"

namespace paragan {

inline void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha,
                 const float* a, int lda, const float* b, int ldb, float beta,
                 float* c, int ldc) {
    cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b,
                ldb, beta, c, ldc);
}

inline void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha,
                 const double* a, int lda, const double* b, int ldb,
                 double beta, double* c, int ldc) {
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b,
                ldb, beta, c, ldc);
}

// Reverse-mode autodiff node. Graphs are built by the free functions below;
// parameters are long-lived leaf nodes whose .grad accumulates until the
// optimizer clears it.
template <typename T>
struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node<T>>> parents;
    std::function<void(Node<T>&)> backward_op;

    void ensure_grad() {
        if (grad.size() != value.size()) grad = Tensor<T>(value.shape());
    }
    void zero_grad() {
        if (grad.size() == value.size())
            grad.fill(T(0));
        else
            grad = Tensor<T>(value.shape());
    }
    T scalar() const { return value[0]; }
};

template <typename T>
using NodePtr = std::shared_ptr<Node<T>>;

template <typename T>
NodePtr<T> make_leaf(Tensor<T> value, bool requires_grad = false) {
    auto n = std::make_shared<Node<T>>();
    n->value = std::move(value);
    n->requires_grad = requires_grad;
    return n;
}

template <typename T>
NodePtr<T> make_op(Tensor<T> value, std::vector<NodePtr<T>> parents,
                   std::function<void(Node<T>&)> backward_op) {
    auto n = std::make_shared<Node<T>>();
    n->value = std::move(value);
    n->parents = std::move(parents);
    for (const auto& p : n->parents)
        if (p->requires_grad) n->requires_grad = true;
    if (n->requires_grad) n->backward_op = std::move(backward_op);
    return n;
}

template <typename T>
NodePtr<T> detach(const NodePtr<T>& x) {
    return make_leaf<T>(x->value, false);
}

// Runs reverse-mode accumulation from a scalar root.
template <typename T>
void backward(const NodePtr<T>& root) {
    if (root->value.size() != 1)
        throw std::invalid_argument("backward: root must be a scalar");
    std::vector<Node<T>*> order;
    std::unordered_set<Node<T>*> seen;
    std::vector<std::pair<Node<T>*, std::size_t>> stack;
    stack.emplace_back(root.get(), 0);
    seen.insert(root.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            Node<T>* p = node->parents[next++].get();
            if (p->requires_grad && seen.insert(p).second)
                stack.emplace_back(p, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    for (Node<T>* n : order) n->ensure_grad();
    root->grad[0] += T(1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node<T>* n = *it;
        if (n->backward_op) n->backward_op(*n);
    }
}

namespace detail {

template <typename T>
void im2col(const T* img, int c, int h, int w, int kh, int kw, int stride,
            int pad, int ho, int wo, T* col) {
    // col is (c*kh*kw) x (ho*wo)
    for (int ci = 0; ci < c; ++ci) {
        for (int ki = 0; ki < kh; ++ki) {
            for (int kj = 0; kj < kw; ++kj) {
                T* row = col + ((ci * kh + ki) * kw + kj) * (ho * wo);
                for (int oi = 0; oi < ho; ++oi) {
                    const int ii = oi * stride + ki - pad;
                    if (ii < 0 || ii >= h) {
                        std::fill(row + oi * wo, row + (oi + 1) * wo, T(0));
                        continue;
                    }
                    const T* src = img + (ci * h + ii) * w;
                    for (int oj = 0; oj < wo; ++oj) {
                        const int jj = oj * stride + kj - pad;
                        row[oi * wo + oj] =
                            (jj >= 0 && jj < w) ? src[jj] : T(0);
                    }
                }
            }
        }
    }
}

template <typename T>
void col2im_acc(const T* col, int c, int h, int w, int kh, int kw, int stride,
                int pad, int ho, int wo, T* img) {
    for (int ci = 0; ci < c; ++ci) {
        for (int ki = 0; ki < kh; ++ki) {
            for (int kj = 0; kj < kw; ++kj) {
                const T* row = col + ((ci * kh + ki) * kw + kj) * (ho * wo);
                for (int oi = 0; oi < ho; ++oi) {
                    const int ii = oi * stride + ki - pad;
                    if (ii < 0 || ii >= h) continue;
                    T* dst = img + (ci * h + ii) * w;
                    for (int oj = 0; oj < wo; ++oj) {
                        const int jj = oj * stride + kj - pad;
                        if (jj >= 0 && jj < w) dst[jj] += row[oi * wo + oj];
                    }
                }
            }
        }
    }
}

inline int conv_out_dim(int in, int k, int stride, int pad) {
    return (in + 2 * pad - k) / stride + 1;
}

}  // namespace detail

// 2-d convolution, zero padding, NCHW. w is {Co, Ci, kh, kw}, b is {Co}.
template <typename T>
NodePtr<T> conv2d(const NodePtr<T>& x, const NodePtr<T>& w, const NodePtr<T>& b,
                  int stride, int pad) {
    const auto& xs = x->value.shape();
    const auto& ws = w->value.shape();
    if (xs.size() != 4 || ws.size() != 4)
        throw std::invalid_argument("conv2d: expects 4-d input and weight");
    if (xs[1] != ws[1])
        throw std::invalid_argument(
            "conv2d: channel mismatch, input " + Tensor<T>::shape_str(xs) +
            " vs weight " + Tensor<T>::shape_str(ws));
    const int n = xs[0], ci = xs[1], h = xs[2], wd = xs[3];
    const int co = ws[0], kh = ws[2], kw = ws[3];
    const int ho = detail::conv_out_dim(h, kh, stride, pad);
    const int wo = detail::conv_out_dim(wd, kw, stride, pad);
    if (ho <= 0 || wo <= 0)
        throw std::invalid_argument("conv2d: output would be empty");
    const int patch = ci * kh * kw, field = ho * wo;

    Tensor<T> out({n, co, ho, wo});
    // Columns are kept for the weight-gradient GEMM in the backward pass.
    auto cols = std::make_shared<std::vector<Tensor<T>>>();
    cols->reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Tensor<T> col({patch, field});
        detail::im2col(x->value.data() + i * ci * h * wd, ci, h, wd, kh, kw,
                       stride, pad, ho, wo, col.data());
        gemm(false, false, co, field, patch, T(1), w->value.data(), patch,
             col.data(), field, T(0), out.data() + i * co * field, field);
        T* dst = out.data() + i * co * field;
        for (int oc = 0; oc < co; ++oc) {
            const T bias = b->value[oc];
            for (int f = 0; f < field; ++f) dst[oc * field + f] += bias;
        }
        cols->push_back(std::move(col));
    }

    return make_op<T>(
        std::move(out), {x, w, b},
        [cols, n, ci, h, wd, co, kh, kw, ho, wo, stride, pad, patch,
         field](Node<T>& self) {
            auto& xp = *self.parents[0];
            auto& wp = *self.parents[1];
            auto& bp = *self.parents[2];
            for (int i = 0; i < n; ++i) {
                const T* dy = self.grad.data() + i * co * field;
                if (wp.requires_grad)
                    gemm(false, true, co, patch, field, T(1), dy, field,
                         (*cols)[static_cast<std::size_t>(i)].data(), field,
                         T(1), wp.grad.data(), patch);
                if (bp.requires_grad)
                    for (int oc = 0; oc < co; ++oc) {
                        T s = 0;
                        for (int f = 0; f < field; ++f) s += dy[oc * field + f];
                        bp.grad[oc] += s;
                    }
                if (xp.requires_grad) {
                    Tensor<T> dcol({patch, field});
                    gemm(true, false, patch, field, co, T(1), wp.value.data(),
                         patch, dy, field, T(0), dcol.data(), field);
                    detail::col2im_acc(dcol.data(), ci, h, wd, kh, kw, stride,
                                       pad, ho, wo,
                                       xp.grad.data() + i * ci * h * wd);
                }
            }
        });
}

template <typename T>
NodePtr<T> reflect_pad2d(const NodePtr<T>& x, int p) {
    const auto& s = x->value.shape();
    if (s.size() != 4) throw std::invalid_argument("reflect_pad2d: 4-d input");
    const int n = s[0], c = s[1], h = s[2], w = s[3];
    if (p >= h || p >= w)
        throw std::invalid_argument("reflect_pad2d: pad too large");
    const int ho = h + 2 * p, wo = w + 2 * p;
    auto mirror = [](int i, int n_) {
        if (i < 0) i = -i;
        if (i >= n_) i = 2 * n_ - 2 - i;
        return i;
    };
    Tensor<T> out({n, c, ho, wo});
    for (int i = 0; i < n; ++i)
        for (int ci = 0; ci < c; ++ci)
            for (int oi = 0; oi < ho; ++oi) {
                const int ii = mirror(oi - p, h);
                for (int oj = 0; oj < wo; ++oj)
                    out.at(i, ci, oi, oj) =
                        x->value.at(i, ci, ii, mirror(oj - p, w));
            }
    return make_op<T>(std::move(out), {x}, [n, c, h, w, p, ho, wo,
                                           mirror](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < n; ++i)
            for (int ci = 0; ci < c; ++ci)
                for (int oi = 0; oi < ho; ++oi) {
                    const int ii = mirror(oi - p, h);
                    for (int oj = 0; oj < wo; ++oj)
                        xp.grad.at(i, ci, ii, mirror(oj - p, w)) +=
                            self.grad.at(i, ci, oi, oj);
                }
    });
}

// Per-sample, per-channel normalization without learnable affine terms.
template <typename T>
NodePtr<T> instance_norm(const NodePtr<T>& x, T eps = T(1e-5)) {
    const auto& s = x->value.shape();
    if (s.size() != 4) throw std::invalid_argument("instance_norm: 4-d input");
    const int n = s[0], c = s[1], hw = s[2] * s[3];
    Tensor<T> out(s);
    auto inv_std = std::make_shared<Tensor<T>>(Tensor<T>({n, c}));
    for (int i = 0; i < n; ++i)
        for (int ci = 0; ci < c; ++ci) {
            const T* src = x->value.data() + (i * c + ci) * hw;
            T mean = 0;
            for (int k = 0; k < hw; ++k) mean += src[k];
            mean /= T(hw);
            T var = 0;
            for (int k = 0; k < hw; ++k) {
                const T d = src[k] - mean;
                var += d * d;
            }
            var /= T(hw);
            const T is = T(1) / std::sqrt(var + eps);
            (*inv_std)[i * c + ci] = is;
            T* dst = out.data() + (i * c + ci) * hw;
            for (int k = 0; k < hw; ++k) dst[k] = (src[k] - mean) * is;
        }
    return make_op<T>(std::move(out), {x}, [n, c, hw, inv_std](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < n; ++i)
            for (int ci = 0; ci < c; ++ci) {
                const T* y = self.value.data() + (i * c + ci) * hw;
                const T* dy = self.grad.data() + (i * c + ci) * hw;
                T* dx = xp.grad.data() + (i * c + ci) * hw;
                const T is = (*inv_std)[i * c + ci];
                T mean_dy = 0, mean_dyy = 0;
                for (int k = 0; k < hw; ++k) {
                    mean_dy += dy[k];
                    mean_dyy += dy[k] * y[k];
                }
                mean_dy /= T(hw);
                mean_dyy /= T(hw);
                for (int k = 0; k < hw; ++k)
                    dx[k] += is * (dy[k] - mean_dy - y[k] * mean_dyy);
            }
    });
}

template <typename T>
NodePtr<T> leaky_relu(const NodePtr<T>& x, T slope) {
    Tensor<T> out(x->value.shape());
    for (int i = 0; i < out.size(); ++i)
        out[i] = x->value[i] > T(0) ? x->value[i] : slope * x->value[i];
    return make_op<T>(std::move(out), {x}, [slope](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < self.grad.size(); ++i)
            xp.grad[i] +=
                self.grad[i] * (xp.value[i] > T(0) ? T(1) : slope);
    });
}

template <typename T>
NodePtr<T> relu(const NodePtr<T>& x) {
    return leaky_relu(x, T(0));
}

template <typename T>
NodePtr<T> tanh_op(const NodePtr<T>& x) {
    Tensor<T> out(x->value.shape());
    for (int i = 0; i < out.size(); ++i) out[i] = std::tanh(x->value[i]);
    return make_op<T>(std::move(out), {x}, [](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < self.grad.size(); ++i)
            xp.grad[i] += self.grad[i] * (T(1) - self.value[i] * self.value[i]);
    });
}

template <typename T>
NodePtr<T> upsample2x_nearest(const NodePtr<T>& x) {
    const auto& s = x->value.shape();
    if (s.size() != 4) throw std::invalid_argument("upsample2x: 4-d input");
    const int n = s[0], c = s[1], h = s[2], w = s[3];
    Tensor<T> out({n, c, 2 * h, 2 * w});
    for (int i = 0; i < n; ++i)
        for (int ci = 0; ci < c; ++ci)
            for (int hi = 0; hi < h; ++hi)
                for (int wi = 0; wi < w; ++wi) {
                    const T v = x->value.at(i, ci, hi, wi);
                    out.at(i, ci, 2 * hi, 2 * wi) = v;
                    out.at(i, ci, 2 * hi, 2 * wi + 1) = v;
                    out.at(i, ci, 2 * hi + 1, 2 * wi) = v;
                    out.at(i, ci, 2 * hi + 1, 2 * wi + 1) = v;
                }
    return make_op<T>(std::move(out), {x}, [n, c, h, w](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < n; ++i)
            for (int ci = 0; ci < c; ++ci)
                for (int hi = 0; hi < h; ++hi)
                    for (int wi = 0; wi < w; ++wi)
                        xp.grad.at(i, ci, hi, wi) +=
                            self.grad.at(i, ci, 2 * hi, 2 * wi) +
                            self.grad.at(i, ci, 2 * hi, 2 * wi + 1) +
                            self.grad.at(i, ci, 2 * hi + 1, 2 * wi) +
                            self.grad.at(i, ci, 2 * hi + 1, 2 * wi + 1);
    });
}

template <typename T>
NodePtr<T> concat_channels(const NodePtr<T>& a, const NodePtr<T>& b) {
    const auto& sa = a->value.shape();
    const auto& sb = b->value.shape();
    if (sa.size() != 4 || sb.size() != 4 || sa[0] != sb[0] || sa[2] != sb[2] ||
        sa[3] != sb[3])
        throw std::invalid_argument("concat_channels: incompatible shapes");
    const int n = sa[0], ca = sa[1], cb = sb[1], hw = sa[2] * sa[3];
    Tensor<T> out({n, ca + cb, sa[2], sa[3]});
    for (int i = 0; i < n; ++i) {
        std::copy_n(a->value.data() + i * ca * hw, ca * hw,
                    out.data() + i * (ca + cb) * hw);
        std::copy_n(b->value.data() + i * cb * hw, cb * hw,
                    out.data() + (i * (ca + cb) + ca) * hw);
    }
    return make_op<T>(std::move(out), {a, b}, [n, ca, cb, hw](Node<T>& self) {
        auto& ap = *self.parents[0];
        auto& bp = *self.parents[1];
        for (int i = 0; i < n; ++i) {
            const T* dy = self.grad.data() + i * (ca + cb) * hw;
            if (ap.requires_grad)
                for (int k = 0; k < ca * hw; ++k)
                    ap.grad[i * ca * hw + k] += dy[k];
            if (bp.requires_grad)
                for (int k = 0; k < cb * hw; ++k)
                    bp.grad[i * cb * hw + k] += dy[ca * hw + k];
        }
    });
}

// Fully connected layer. x is {N, D}, w is {M, D}, b is {M}.
template <typename T>
NodePtr<T> linear(const NodePtr<T>& x, const NodePtr<T>& w,
                  const NodePtr<T>& b) {
    const auto& xs = x->value.shape();
    const auto& ws = w->value.shape();
    if (xs.size() != 2 || ws.size() != 2 || xs[1] != ws[1])
        throw std::invalid_argument("linear: shape mismatch");
    const int n = xs[0], d = xs[1], m = ws[0];
    Tensor<T> out({n, m});
    gemm(false, true, n, m, d, T(1), x->value.data(), d, w->value.data(), d,
         T(0), out.data(), m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) out[i * m + j] += b->value[j];
    return make_op<T>(std::move(out), {x, w, b}, [n, d, m](Node<T>& self) {
        auto& xp = *self.parents[0];
        auto& wp = *self.parents[1];
        auto& bp = *self.parents[2];
        if (xp.requires_grad)
            gemm(false, false, n, d, m, T(1), self.grad.data(), m,
                 wp.value.data(), d, T(1), xp.grad.data(), d);
        if (wp.requires_grad)
            gemm(true, false, m, d, n, T(1), self.grad.data(), m,
                 xp.value.data(), d, T(1), wp.grad.data(), d);
        if (bp.requires_grad)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) bp.grad[j] += self.grad[i * m + j];
    });
}

template <typename T>
NodePtr<T> global_avg_pool(const NodePtr<T>& x) {
    const auto& s = x->value.shape();
    if (s.size() != 4) throw std::invalid_argument("global_avg_pool: 4-d input");
    const int n = s[0], c = s[1], hw = s[2] * s[3];
    Tensor<T> out({n, c});
    for (int i = 0; i < n * c; ++i) {
        T acc = 0;
        const T* src = x->value.data() + i * hw;
        for (int k = 0; k < hw; ++k) acc += src[k];
        out[i] = acc / T(hw);
    }
    return make_op<T>(std::move(out), {x}, [n, c, hw](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < n * c; ++i) {
            const T g = self.grad[i] / T(hw);
            T* dst = xp.grad.data() + i * hw;
            for (int k = 0; k < hw; ++k) dst[k] += g;
        }
    });
}

template <typename T>
NodePtr<T> add(const NodePtr<T>& a, const NodePtr<T>& b) {
    if (!a->value.same_shape(b->value))
        throw std::invalid_argument("add: shape mismatch");
    Tensor<T> out(a->value.shape());
    for (int i = 0; i < out.size(); ++i) out[i] = a->value[i] + b->value[i];
    return make_op<T>(std::move(out), {a, b}, [](Node<T>& self) {
        for (int p = 0; p < 2; ++p) {
            auto& pp = *self.parents[static_cast<std::size_t>(p)];
            if (!pp.requires_grad) continue;
            for (int i = 0; i < self.grad.size(); ++i) pp.grad[i] += self.grad[i];
        }
    });
}

template <typename T>
NodePtr<T> sub(const NodePtr<T>& a, const NodePtr<T>& b) {
    if (!a->value.same_shape(b->value))
        throw std::invalid_argument("sub: shape mismatch");
    Tensor<T> out(a->value.shape());
    for (int i = 0; i < out.size(); ++i) out[i] = a->value[i] - b->value[i];
    return make_op<T>(std::move(out), {a, b}, [](Node<T>& self) {
        auto& ap = *self.parents[0];
        auto& bp = *self.parents[1];
        for (int i = 0; i < self.grad.size(); ++i) {
            if (ap.requires_grad) ap.grad[i] += self.grad[i];
            if (bp.requires_grad) bp.grad[i] -= self.grad[i];
        }
    });
}

template <typename T>
NodePtr<T> add_scalar(const NodePtr<T>& x, T c) {
    Tensor<T> out(x->value.shape());
    for (int i = 0; i < out.size(); ++i) out[i] = x->value[i] + c;
    return make_op<T>(std::move(out), {x}, [](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < self.grad.size(); ++i) xp.grad[i] += self.grad[i];
    });
}

template <typename T>
NodePtr<T> mul_scalar(const NodePtr<T>& x, T c) {
    Tensor<T> out(x->value.shape());
    for (int i = 0; i < out.size(); ++i) out[i] = x->value[i] * c;
    return make_op<T>(std::move(out), {x}, [c](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < self.grad.size(); ++i)
            xp.grad[i] += self.grad[i] * c;
    });
}

// Elementwise product with a constant tensor (no gradient into the constant).
template <typename T>
NodePtr<T> mul_elem_const(const NodePtr<T>& x, Tensor<T> c) {
    if (x->value.size() != c.size())
        throw std::invalid_argument("mul_elem_const: size mismatch");
    Tensor<T> out(x->value.shape());
    for (int i = 0; i < out.size(); ++i) out[i] = x->value[i] * c[i];
    auto cc = std::make_shared<Tensor<T>>(std::move(c));
    return make_op<T>(std::move(out), {x}, [cc](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < self.grad.size(); ++i)
            xp.grad[i] += self.grad[i] * (*cc)[i];
    });
}

template <typename T>
NodePtr<T> abs_op(const NodePtr<T>& x) {
    Tensor<T> out(x->value.shape());
    for (int i = 0; i < out.size(); ++i) out[i] = std::abs(x->value[i]);
    return make_op<T>(std::move(out), {x}, [](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < self.grad.size(); ++i) {
            const T v = xp.value[i];
            if (v > T(0))
                xp.grad[i] += self.grad[i];
            else if (v < T(0))
                xp.grad[i] -= self.grad[i];
        }
    });
}

template <typename T>
NodePtr<T> square(const NodePtr<T>& x) {
    Tensor<T> out(x->value.shape());
    for (int i = 0; i < out.size(); ++i) out[i] = x->value[i] * x->value[i];
    return make_op<T>(std::move(out), {x}, [](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < self.grad.size(); ++i)
            xp.grad[i] += self.grad[i] * T(2) * xp.value[i];
    });
}

// log(1 + exp(x)) evaluated without overflow for |x| up to the type limit.
template <typename T>
NodePtr<T> softplus(const NodePtr<T>& x) {
    Tensor<T> out(x->value.shape());
    for (int i = 0; i < out.size(); ++i) {
        const T v = x->value[i];
        out[i] = std::max(v, T(0)) + std::log1p(std::exp(-std::abs(v)));
    }
    return make_op<T>(std::move(out), {x}, [](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        for (int i = 0; i < self.grad.size(); ++i) {
            const T v = xp.value[i];
            const T sig = v >= T(0) ? T(1) / (T(1) + std::exp(-v))
                                    : std::exp(v) / (T(1) + std::exp(v));
            xp.grad[i] += self.grad[i] * sig;
        }
    });
}

template <typename T>
NodePtr<T> neg(const NodePtr<T>& x) {
    return mul_scalar(x, T(-1));
}

template <typename T>
NodePtr<T> mean_all(const NodePtr<T>& x) {
    if (x->value.size() == 0)
        throw std::invalid_argument("mean_all: empty input");
    T acc = 0;
    for (int i = 0; i < x->value.size(); ++i) acc += x->value[i];
    Tensor<T> out({1});
    out[0] = acc / T(x->value.size());
    return make_op<T>(std::move(out), {x}, [](Node<T>& self) {
        auto& xp = *self.parents[0];
        if (!xp.requires_grad) return;
        const T g = self.grad[0] / T(xp.value.size());
        for (int i = 0; i < xp.grad.size(); ++i) xp.grad[i] += g;
    });
}

}  // namespace paragan

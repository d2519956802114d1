#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "paragan/ops.hpp"
#include "paragan/rng.hpp"

namespace paragan {

template <typename T>
struct NamedParam {
    std::string name;
    NodePtr<T> node;
};

template <typename T>
using ParamList = std::vector<NamedParam<T>>;

template <typename T>
void set_requires_grad(const ParamList<T>& params, bool value) {
    for (const auto& p : params) p.node->requires_grad = value;
}

// Content digest over parameter values, in declaration order. Used for the
// frozen-classifier contract and checkpoint identity checks.
template <typename T>
std::uint64_t param_digest(const ParamList<T>& params) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& p : params) {
        h = fnv1a64(p.name, h);
        h = fnv1a64(p.node->value.data(),
                    sizeof(T) * static_cast<std::size_t>(p.node->value.size()), h);
    }
    return h;
}

template <typename T>
long param_count(const ParamList<T>& params) {
    long n = 0;
    for (const auto& p : params) n += p.node->value.size();
    return n;
}

enum class PadMode { Zero, Reflect };

template <typename T>
struct Conv2dLayer {
    NodePtr<T> w, b;
    int stride = 1;
    int pad = 0;
    PadMode pad_mode = PadMode::Zero;

    Conv2dLayer() = default;
    Conv2dLayer(int in_ch, int out_ch, int kernel, int stride_, int pad_,
                PadMode mode, Rng& rng) {
        Tensor<T> wt({out_ch, in_ch, kernel, kernel});
        for (int i = 0; i < wt.size(); ++i)
            wt[i] = static_cast<T>(0.02 * rng.normal());
        w = make_leaf(std::move(wt), true);
        b = make_leaf(Tensor<T>({out_ch}), true);
        stride = stride_;
        pad = pad_;
        pad_mode = mode;
    }

    NodePtr<T> operator()(const NodePtr<T>& x) const {
        if (pad_mode == PadMode::Reflect && pad > 0)
            return conv2d(reflect_pad2d(x, pad), w, b, stride, 0);
        return conv2d(x, w, b, stride, pad);
    }

    void collect(const std::string& prefix, ParamList<T>& out) const {
        out.push_back({prefix + ".w", w});
        out.push_back({prefix + ".b", b});
    }
};

template <typename T>
struct LinearLayer {
    NodePtr<T> w, b;

    LinearLayer() = default;
    LinearLayer(int in_dim, int out_dim, Rng& rng) {
        Tensor<T> wt({out_dim, in_dim});
        for (int i = 0; i < wt.size(); ++i)
            wt[i] = static_cast<T>(0.02 * rng.normal());
        w = make_leaf(std::move(wt), true);
        b = make_leaf(Tensor<T>({out_dim}), true);
    }

    NodePtr<T> operator()(const NodePtr<T>& x) const { return linear(x, w, b); }

    void collect(const std::string& prefix, ParamList<T>& out) const {
        out.push_back({prefix + ".w", w});
        out.push_back({prefix + ".b", b});
    }
};

// Spatially replicates a constant and appends it as an extra input plane.
// Plain-tensor form of the generator conditioning step.
template <typename T>
Tensor<T> make_condition_plane(const Tensor<T>& img, T signed_distance) {
    if (!std::isfinite(static_cast<double>(signed_distance)))
        throw std::invalid_argument("make_condition_plane: non-finite distance");
    if (img.ndim() != 3)
        throw std::invalid_argument("make_condition_plane: expects CxHxW image");
    const int c = img.dim(0), h = img.dim(1), w = img.dim(2);
    Tensor<T> out({c + 1, h, w});
    std::copy_n(img.data(), c * h * w, out.data());
    std::fill_n(out.data() + c * h * w, h * w, signed_distance);
    return out;
}

// Batched node form: one constant plane per sample.
template <typename T>
NodePtr<T> append_condition_plane(const NodePtr<T>& x,
                                  const std::vector<T>& distances) {
    const auto& s = x->value.shape();
    if (s.size() != 4 || static_cast<int>(distances.size()) != s[0])
        throw std::invalid_argument("append_condition_plane: batch mismatch");
    Tensor<T> plane({s[0], 1, s[2], s[3]});
    const int hw = s[2] * s[3];
    for (int n = 0; n < s[0]; ++n) {
        if (!std::isfinite(static_cast<double>(distances[static_cast<std::size_t>(n)])))
            throw std::invalid_argument("append_condition_plane: non-finite distance");
        std::fill_n(plane.data() + n * hw, hw, distances[static_cast<std::size_t>(n)]);
    }
    return concat_channels(x, make_leaf(std::move(plane), false));
}

// Encoder / residual / decoder generator with tanh output. Input takes the
// image channels plus one conditioning plane.
template <typename T>
struct Generator {
    int channels = 1;
    int base_width = 8;
    int n_res_blocks = 3;
    Conv2dLayer<T> head, down1, down2, up1, up2, tail;
    std::vector<std::pair<Conv2dLayer<T>, Conv2dLayer<T>>> res;
    std::string name;

    Generator() = default;
    Generator(std::string name_, int channels_, int base_width_,
              int n_res_blocks_, std::uint64_t seed)
        : channels(channels_), base_width(base_width_),
          n_res_blocks(n_res_blocks_), name(std::move(name_)) {
        const int w = base_width;
        Rng rng(derive_seed(seed, name));
        head = Conv2dLayer<T>(channels + 1, w, 7, 1, 3, PadMode::Reflect, rng);
        down1 = Conv2dLayer<T>(w, 2 * w, 3, 2, 1, PadMode::Zero, rng);
        down2 = Conv2dLayer<T>(2 * w, 4 * w, 3, 2, 1, PadMode::Zero, rng);
        for (int i = 0; i < n_res_blocks; ++i)
            res.emplace_back(
                Conv2dLayer<T>(4 * w, 4 * w, 3, 1, 1, PadMode::Reflect, rng),
                Conv2dLayer<T>(4 * w, 4 * w, 3, 1, 1, PadMode::Reflect, rng));
        up1 = Conv2dLayer<T>(4 * w, 2 * w, 3, 1, 1, PadMode::Zero, rng);
        up2 = Conv2dLayer<T>(2 * w, w, 3, 1, 1, PadMode::Zero, rng);
        tail = Conv2dLayer<T>(w, channels, 7, 1, 3, PadMode::Reflect, rng);
    }

    // x is {N, C, H, W} with H and W divisible by 4.
    NodePtr<T> forward(const NodePtr<T>& x,
                       const std::vector<T>& distances) const {
        const auto& s = x->value.shape();
        if (s.size() != 4 || s[1] != channels)
            throw std::invalid_argument(name + ": input channel mismatch");
        if (s[2] % 4 != 0 || s[3] % 4 != 0)
            throw std::invalid_argument(name + ": dims must be divisible by 4");
        auto h = append_condition_plane(x, distances);
        h = relu(instance_norm(head(h)));
        h = relu(instance_norm(down1(h)));
        h = relu(instance_norm(down2(h)));
        for (const auto& [c1, c2] : res)
            h = add(h, instance_norm(c2(relu(instance_norm(c1(h))))));
        h = relu(instance_norm(up1(upsample2x_nearest(h))));
        h = relu(instance_norm(up2(upsample2x_nearest(h))));
        return tanh_op(tail(h));
    }

    ParamList<T> params() const {
        ParamList<T> out;
        head.collect(name + ".head", out);
        down1.collect(name + ".down1", out);
        down2.collect(name + ".down2", out);
        for (std::size_t i = 0; i < res.size(); ++i) {
            res[i].first.collect(name + ".res" + std::to_string(i) + ".c1", out);
            res[i].second.collect(name + ".res" + std::to_string(i) + ".c2", out);
        }
        up1.collect(name + ".up1", out);
        up2.collect(name + ".up2", out);
        tail.collect(name + ".tail", out);
        return out;
    }
};

// PatchGAN-style discriminator: n_layers stride-2 convolutions followed by
// two stride-1 heads, all 4x4 kernels with pad 1, emitting a logit map.
template <typename T>
struct PatchDiscriminator {
    int channels = 1;
    int base_width = 8;
    int n_layers = 3;
    std::vector<Conv2dLayer<T>> convs;  // stride-2 stack
    Conv2dLayer<T> head1, head2;
    std::string name;

    PatchDiscriminator() = default;
    PatchDiscriminator(std::string name_, int channels_, int base_width_,
                       int n_layers_, std::uint64_t seed)
        : channels(channels_), base_width(base_width_), n_layers(n_layers_),
          name(std::move(name_)) {
        Rng rng(derive_seed(seed, name));
        int in_ch = channels;
        int out_ch = base_width;
        for (int i = 0; i < n_layers; ++i) {
            convs.emplace_back(in_ch, out_ch, 4, 2, 1, PadMode::Zero, rng);
            in_ch = out_ch;
            out_ch = std::min(out_ch * 2, 8 * base_width);
        }
        head1 = Conv2dLayer<T>(in_ch, out_ch, 4, 1, 1, PadMode::Zero, rng);
        head2 = Conv2dLayer<T>(out_ch, 1, 4, 1, 1, PadMode::Zero, rng);
    }

    NodePtr<T> forward(const NodePtr<T>& x) const {
        const auto& s = x->value.shape();
        if (s.size() != 4 || s[1] != channels)
            throw std::invalid_argument(name + ": input channel mismatch");
        // First layer carries no normalization.
        auto h = leaky_relu(convs[0](x), T(0.2));
        for (std::size_t i = 1; i < convs.size(); ++i)
            h = leaky_relu(instance_norm(convs[i](h)), T(0.2));
        h = leaky_relu(instance_norm(head1(h)), T(0.2));
        return head2(h);
    }

    // Closed-form conv arithmetic for the configured stack:
    // each 4x4/pad-1 layer maps n -> floor((n - 2) / s) + 1.
    std::pair<int, int> output_dims(int h, int w) const {
        auto apply = [](int n, int s) { return (n - 2) / s + 1; };
        for (int i = 0; i < n_layers; ++i) {
            h = apply(h, 2);
            w = apply(w, 2);
        }
        for (int i = 0; i < 2; ++i) {
            h = apply(h, 1);
            w = apply(w, 1);
        }
        return {h, w};
    }

    // One output unit's input patch extent: r_in = (r_out - 1) * s + k,
    // folded from the top of the stack down.
    int receptive_field() const {
        int r = 1;
        r = (r - 1) * 1 + 4;  // head2
        r = (r - 1) * 1 + 4;  // head1
        for (int i = 0; i < n_layers; ++i) r = (r - 1) * 2 + 4;
        return r;
    }

    ParamList<T> params() const {
        ParamList<T> out;
        for (std::size_t i = 0; i < convs.size(); ++i)
            convs[i].collect(name + ".conv" + std::to_string(i), out);
        head1.collect(name + ".head1", out);
        head2.collect(name + ".head2", out);
        return out;
    }
};

// Three conv-norm-activation stages, global average pooling and a linear
// head producing one signed score per image. Shared by the auxiliary and
// downstream classifiers.
template <typename T>
struct SmallCnnClassifier {
    int channels = 1;
    int base_width = 8;
    Conv2dLayer<T> c1, c2, c3;
    LinearLayer<T> fc;
    std::string name;

    SmallCnnClassifier() = default;
    SmallCnnClassifier(std::string name_, int channels_, int base_width_,
                       std::uint64_t seed)
        : channels(channels_), base_width(base_width_), name(std::move(name_)) {
        Rng rng(derive_seed(seed, name));
        const int w = base_width;
        c1 = Conv2dLayer<T>(channels, w, 3, 2, 1, PadMode::Zero, rng);
        c2 = Conv2dLayer<T>(w, 2 * w, 3, 2, 1, PadMode::Zero, rng);
        c3 = Conv2dLayer<T>(2 * w, 4 * w, 3, 2, 1, PadMode::Zero, rng);
        fc = LinearLayer<T>(4 * w, 1, rng);
    }

    int feature_dim() const { return 4 * base_width; }

    struct ForwardTrace {
        NodePtr<T> last_conv;  // activations entering global average pooling
        NodePtr<T> features;   // {N, D}
        NodePtr<T> scores;     // {N, 1}
    };

    ForwardTrace trace(const NodePtr<T>& x) const {
        const auto& s = x->value.shape();
        if (s.size() != 4 || s[1] != channels)
            throw std::invalid_argument(name + ": input channel mismatch");
        auto h = relu(instance_norm(c1(x)));
        h = relu(instance_norm(c2(h)));
        h = relu(instance_norm(c3(h)));
        ForwardTrace t;
        t.last_conv = h;
        t.features = global_avg_pool(h);
        t.scores = fc(t.features);
        return t;
    }

    NodePtr<T> forward(const NodePtr<T>& x) const { return trace(x).scores; }

    ParamList<T> params() const {
        ParamList<T> out;
        c1.collect(name + ".c1", out);
        c2.collect(name + ".c2", out);
        c3.collect(name + ".c3", out);
        fc.collect(name + ".fc", out);
        return out;
    }
};

}  // namespace paragan

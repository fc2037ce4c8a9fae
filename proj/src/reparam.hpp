#ifndef ADICURB_REPARAM_HPP
#define ADICURB_REPARAM_HPP

#include <optional>
#include <string>
#include <vector>

namespace adicurb
{

// Minimal dense NCHW tensor for numerical equivalence checks.
struct Tensor4
{
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<double> values;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_),
          values(static_cast<std::size_t>(n_) * c_ * h_ * w_, 0.0)
    {
    }

    double& at(int in, int ic, int iy, int ix)
    {
        return values[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }
    double at(int in, int ic, int iy, int ix) const
    {
        return values[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }
};

struct ConvParams
{
    int out_channels = 0;
    int in_channels_per_group = 0;
    int kh = 0, kw = 0;
    int groups = 1;
    std::vector<double> kernel; // (out, in/g, kh, kw) row-major
    std::vector<double> bias;   // per out channel

    double& k(int oc, int ic, int ky, int kx)
    {
        return kernel[((static_cast<std::size_t>(oc) * in_channels_per_group + ic) * kh + ky) * kw +
                      kx];
    }
    double k(int oc, int ic, int ky, int kx) const
    {
        return kernel[((static_cast<std::size_t>(oc) * in_channels_per_group + ic) * kh + ky) * kw +
                      kx];
    }
};

struct BnParams
{
    std::vector<double> mean, variance, gamma, beta;
    double epsilon = 1e-5;
};

struct MobileOneBlockParams
{
    struct Branch
    {
        ConvParams conv;
        BnParams bn;
    };
    std::vector<Branch> branches_3x3; // k parallel depthwise 3x3 branches
    Branch branch_1x1;                // depthwise 1x1
    std::optional<BnParams> skip_bn;  // BN-only shortcut, when legal
};

// Direct (naive) cross-correlation with groups, stride and zero padding.
Tensor4 conv2d(const Tensor4& x, const ConvParams& p, int stride, int padding);

Tensor4 bn_apply(const Tensor4& x, const BnParams& bn);

// kernel'[c] = kernel[c] * gamma_c / sqrt(var_c + eps);
// bias'[c] = beta_c + (bias[c] - mu_c) * gamma_c / sqrt(var_c + eps).
ConvParams fuse_bn(const ConvParams& conv, const BnParams& bn);

// Depthwise identity kernel (center tap 1) with the BN folded in.
// kernel_size must be odd; stride 1 only.
ConvParams bn_to_conv(const BnParams& bn, int channels, int kernel_size, int stride);

ConvParams pad_1x1_to_3x3(const ConvParams& p);

// Sum of all fused branches: k fused 3x3 + center-padded fused 1x1 + skip BN
// as identity conv, all element-wise.
ConvParams reparameterize_block(const MobileOneBlockParams& block);

// Training-time forward: sum of BN(conv(x)) over branches, skip = BN(x).
// Activation is outside the block and excluded from equivalence scope.
Tensor4 forward_train(const MobileOneBlockParams& block, const Tensor4& x);

// Flat JSON serialization (shapes + row-major weights) for fixtures.
std::string block_to_json(const MobileOneBlockParams& block);
MobileOneBlockParams block_from_json(const std::string& text);

} // namespace adicurb

#endif

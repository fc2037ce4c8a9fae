#include "reparam.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace adicurb
{

Tensor4 conv2d(const Tensor4& x, const ConvParams& p, int stride, int padding)
{
    if (p.groups < 1 || p.out_channels % p.groups != 0)
        throw std::invalid_argument("conv2d: out_channels not divisible by groups");
    if (x.c != p.groups * p.in_channels_per_group)
        throw std::invalid_argument("conv2d: input channels inconsistent with kernel");
    if (stride < 1)
        throw std::invalid_argument("conv2d: stride must be >= 1");

    const int oh = (x.h + 2 * padding - p.kh) / stride + 1;
    const int ow = (x.w + 2 * padding - p.kw) / stride + 1;
    if (oh <= 0 || ow <= 0)
        throw std::invalid_argument("conv2d: kernel larger than padded input");

    const int oc_per_group = p.out_channels / p.groups;
    Tensor4 y(x.n, p.out_channels, oh, ow);
    for (int in = 0; in < x.n; ++in)
        for (int oc = 0; oc < p.out_channels; ++oc)
        {
            const int g = oc / oc_per_group;
            const double bias = p.bias.empty() ? 0.0 : p.bias[oc];
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox)
                {
                    double acc = bias;
                    for (int ic = 0; ic < p.in_channels_per_group; ++ic)
                        for (int ky = 0; ky < p.kh; ++ky)
                            for (int kx = 0; kx < p.kw; ++kx)
                            {
                                const int sy = oy * stride + ky - padding;
                                const int sx = ox * stride + kx - padding;
                                if (sy < 0 || sy >= x.h || sx < 0 || sx >= x.w)
                                    continue;
                                acc += x.at(in, g * p.in_channels_per_group + ic, sy, sx) *
                                       p.k(oc, ic, ky, kx);
                            }
                    y.at(in, oc, oy, ox) = acc;
                }
        }
    return y;
}

Tensor4 bn_apply(const Tensor4& x, const BnParams& bn)
{
    if (static_cast<int>(bn.mean.size()) != x.c)
        throw std::invalid_argument("bn_apply: channel mismatch");
    Tensor4 y = x;
    for (int c = 0; c < x.c; ++c)
    {
        const double scale = bn.gamma[c] / std::sqrt(bn.variance[c] + bn.epsilon);
        const double shift = bn.beta[c] - bn.mean[c] * scale;
        for (int in = 0; in < x.n; ++in)
            for (int iy = 0; iy < x.h; ++iy)
                for (int ix = 0; ix < x.w; ++ix)
                    y.at(in, c, iy, ix) = x.at(in, c, iy, ix) * scale + shift;
    }
    return y;
}

ConvParams fuse_bn(const ConvParams& conv, const BnParams& bn)
{
    if (static_cast<int>(bn.mean.size()) != conv.out_channels)
        throw std::invalid_argument("fuse_bn: channel mismatch");
    ConvParams out = conv;
    if (out.bias.empty())
        out.bias.assign(conv.out_channels, 0.0);
    for (int c = 0; c < conv.out_channels; ++c)
    {
        const double scale = bn.gamma[c] / std::sqrt(bn.variance[c] + bn.epsilon);
        for (int ic = 0; ic < conv.in_channels_per_group; ++ic)
            for (int ky = 0; ky < conv.kh; ++ky)
                for (int kx = 0; kx < conv.kw; ++kx)
                    out.k(c, ic, ky, kx) = conv.k(c, ic, ky, kx) * scale;
        out.bias[c] = bn.beta[c] + (out.bias[c] - bn.mean[c]) * scale;
    }
    return out;
}

ConvParams bn_to_conv(const BnParams& bn, int channels, int kernel_size, int stride)
{
    if (stride != 1)
        throw std::invalid_argument("bn_to_conv: identity branch illegal for stride != 1");
    if (kernel_size % 2 == 0)
        throw std::invalid_argument("bn_to_conv: kernel size must be odd");
    ConvParams id;
    id.out_channels = channels;
    id.in_channels_per_group = 1;
    id.kh = id.kw = kernel_size;
    id.groups = channels;
    id.kernel.assign(static_cast<std::size_t>(channels) * kernel_size * kernel_size, 0.0);
    id.bias.assign(channels, 0.0);
    const int center = kernel_size / 2;
    for (int c = 0; c < channels; ++c)
        id.k(c, 0, center, center) = 1.0;
    return fuse_bn(id, bn);
}

ConvParams pad_1x1_to_3x3(const ConvParams& p)
{
    if (p.kh != 1 || p.kw != 1)
        throw std::invalid_argument("pad_1x1_to_3x3: kernel is not 1x1");
    ConvParams out = p;
    out.kh = out.kw = 3;
    out.kernel.assign(static_cast<std::size_t>(p.out_channels) * p.in_channels_per_group * 9, 0.0);
    for (int oc = 0; oc < p.out_channels; ++oc)
        for (int ic = 0; ic < p.in_channels_per_group; ++ic)
            out.k(oc, ic, 1, 1) = p.k(oc, ic, 0, 0);
    return out;
}

namespace
{

void accumulate(ConvParams& acc, const ConvParams& term)
{
    if (acc.kernel.size() != term.kernel.size() || acc.bias.size() != term.bias.size())
        throw std::invalid_argument("reparameterize_block: branch shape mismatch");
    for (std::size_t i = 0; i < acc.kernel.size(); ++i)
        acc.kernel[i] += term.kernel[i];
    for (std::size_t i = 0; i < acc.bias.size(); ++i)
        acc.bias[i] += term.bias[i];
}

} // namespace

ConvParams reparameterize_block(const MobileOneBlockParams& block)
{
    if (block.branches_3x3.empty())
        throw std::invalid_argument("reparameterize_block: need at least one 3x3 branch");

    ConvParams fused = fuse_bn(block.branches_3x3[0].conv, block.branches_3x3[0].bn);
    if (fused.bias.empty())
        fused.bias.assign(fused.out_channels, 0.0);
    for (std::size_t i = 1; i < block.branches_3x3.size(); ++i)
        accumulate(fused, fuse_bn(block.branches_3x3[i].conv, block.branches_3x3[i].bn));
    accumulate(fused, pad_1x1_to_3x3(fuse_bn(block.branch_1x1.conv, block.branch_1x1.bn)));
    if (block.skip_bn)
        accumulate(fused, bn_to_conv(*block.skip_bn, fused.out_channels, 3, 1));
    return fused;
}

Tensor4 forward_train(const MobileOneBlockParams& block, const Tensor4& x)
{
    if (block.branches_3x3.empty())
        throw std::invalid_argument("forward_train: need at least one 3x3 branch");

    Tensor4 sum = bn_apply(conv2d(x, block.branches_3x3[0].conv, 1, 1), block.branches_3x3[0].bn);
    auto add = [&](const Tensor4& t) {
        if (t.values.size() != sum.values.size())
            throw std::invalid_argument("forward_train: branch output shape mismatch");
        for (std::size_t i = 0; i < sum.values.size(); ++i)
            sum.values[i] += t.values[i];
    };
    for (std::size_t i = 1; i < block.branches_3x3.size(); ++i)
        add(bn_apply(conv2d(x, block.branches_3x3[i].conv, 1, 1), block.branches_3x3[i].bn));
    add(bn_apply(conv2d(x, block.branch_1x1.conv, 1, 0), block.branch_1x1.bn));
    if (block.skip_bn)
        add(bn_apply(x, *block.skip_bn));
    return sum;
}

namespace
{

using nlohmann::json;

json conv_to_json(const ConvParams& p)
{
    return json{{"out_channels", p.out_channels},
                {"in_channels_per_group", p.in_channels_per_group},
                {"kh", p.kh},
                {"kw", p.kw},
                {"groups", p.groups},
                {"kernel", p.kernel},
                {"bias", p.bias}};
}

ConvParams conv_from_json(const json& j)
{
    ConvParams p;
    j.at("out_channels").get_to(p.out_channels);
    j.at("in_channels_per_group").get_to(p.in_channels_per_group);
    j.at("kh").get_to(p.kh);
    j.at("kw").get_to(p.kw);
    j.at("groups").get_to(p.groups);
    j.at("kernel").get_to(p.kernel);
    j.at("bias").get_to(p.bias);
    return p;
}

json bn_to_json(const BnParams& b)
{
    return json{{"mean", b.mean},
                {"variance", b.variance},
                {"gamma", b.gamma},
                {"beta", b.beta},
                {"epsilon", b.epsilon}};
}

BnParams bn_from_json(const json& j)
{
    BnParams b;
    j.at("mean").get_to(b.mean);
    j.at("variance").get_to(b.variance);
    j.at("gamma").get_to(b.gamma);
    j.at("beta").get_to(b.beta);
    j.at("epsilon").get_to(b.epsilon);
    return b;
}

} // namespace

std::string block_to_json(const MobileOneBlockParams& block)
{
    json j;
    j["branches_3x3"] = json::array();
    for (const auto& br : block.branches_3x3)
        j["branches_3x3"].push_back({{"conv", conv_to_json(br.conv)}, {"bn", bn_to_json(br.bn)}});
    j["branch_1x1"] = {{"conv", conv_to_json(block.branch_1x1.conv)},
                       {"bn", bn_to_json(block.branch_1x1.bn)}};
    if (block.skip_bn)
        j["skip_bn"] = bn_to_json(*block.skip_bn);
    return j.dump(2);
}

MobileOneBlockParams block_from_json(const std::string& text)
{
    const json j = json::parse(text);
    MobileOneBlockParams block;
    for (const auto& br : j.at("branches_3x3"))
        block.branches_3x3.push_back(
            {conv_from_json(br.at("conv")), bn_from_json(br.at("bn"))});
    block.branch_1x1 = {conv_from_json(j.at("branch_1x1").at("conv")),
                        bn_from_json(j.at("branch_1x1").at("bn"))};
    if (j.contains("skip_bn"))
        block.skip_bn = bn_from_json(j.at("skip_bn"));
    return block;
}

} // namespace adicurb

#include "evaluation.hpp"

#include <limits>
#include <stdexcept>

namespace adicurb
{

namespace
{

// Large finite stand-in for "no feature"; true squared distances on any
// supported grid stay far below it, so exactness is unaffected.
constexpr double kInf = 1e12;

// 1D squared distance transform of a sampled function (lower envelope of
// parabolas, Felzenszwalb-Huttenlocher).
void dt1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
          std::vector<double>& z)
{
    const int n = static_cast<int>(f.size());
    const double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q)
    {
        double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
                   (2.0 * q - 2.0 * v[k]);
        while (s <= z[k])
        {
            --k;
            s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
                (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q)
    {
        while (z[k + 1] < q)
            ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

} // namespace

std::vector<double> squared_distance_transform(const Image8& mask)
{
    const int w = mask.width, h = mask.height;
    std::vector<double> dist(static_cast<std::size_t>(w) * h, kInf);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.at(x, y))
                dist[static_cast<std::size_t>(y) * w + x] = 0.0;

    const int m = std::max(w, h);
    std::vector<double> f(m), d(m), z(m + 1);
    std::vector<int> v(m);

    // Columns, then rows.
    for (int x = 0; x < w; ++x)
    {
        for (int y = 0; y < h; ++y)
            f[y] = dist[static_cast<std::size_t>(y) * w + x];
        f.resize(h);
        d.resize(h);
        dt1d(f, d, v, z);
        for (int y = 0; y < h; ++y)
            dist[static_cast<std::size_t>(y) * w + x] = d[y];
        f.resize(m);
        d.resize(m);
    }
    for (int y = 0; y < h; ++y)
    {
        for (int x = 0; x < w; ++x)
            f[x] = dist[static_cast<std::size_t>(y) * w + x];
        f.resize(w);
        d.resize(w);
        dt1d(f, d, v, z);
        for (int x = 0; x < w; ++x)
            dist[static_cast<std::size_t>(y) * w + x] = d[x];
        f.resize(m);
        d.resize(m);
    }
    return dist;
}

ConfusionCounts match_with_tolerance(const Image8& pred, const Image8& gt, double tol)
{
    if (pred.width != gt.width || pred.height != gt.height)
        throw std::invalid_argument("match_with_tolerance: dimension mismatch");

    ConfusionCounts counts;
    counts.tolerance = tol;
    const double tol2 = tol * tol + 1e-9;

    const std::vector<double> dist_to_gt = squared_distance_transform(gt);
    const std::vector<double> dist_to_pred = squared_distance_transform(pred);
    for (std::size_t i = 0; i < pred.data.size(); ++i)
    {
        if (pred.data[i])
        {
            if (dist_to_gt[i] <= tol2)
                ++counts.tp;
            else
                ++counts.fp;
        }
        if (gt.data[i] && dist_to_pred[i] > tol2)
            ++counts.fn;
    }
    return counts;
}

Metrics compute_metrics(const ConfusionCounts& counts)
{
    Metrics m;
    if (counts.tp + counts.fp > 0)
        m.precision = static_cast<double>(counts.tp) / (counts.tp + counts.fp);
    if (counts.tp + counts.fn > 0)
        m.recall = static_cast<double>(counts.tp) / (counts.tp + counts.fn);
    if (m.precision + m.recall > 0.0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

} // namespace adicurb

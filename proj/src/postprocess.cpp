#include "postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace adicurb
{

namespace
{

bool collinear(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c)
{
    const Eigen::Vector2d u = b - a, v = c - a;
    return std::abs(u.x() * v.y() - u.y() * v.x()) < 1e-9;
}

} // namespace

Homography ipm_from_correspondences(const std::array<Eigen::Vector2d, 4>& src,
                                    const std::array<Eigen::Vector2d, 4>& dst)
{
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (collinear(src[i], src[j], src[k]) || collinear(dst[i], dst[j], dst[k]))
                    throw std::invalid_argument("ipm_from_correspondences: collinear correspondences");

    Eigen::Matrix<double, 8, 8> a = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> rhs;
    for (int i = 0; i < 4; ++i)
    {
        const double x = src[i].x(), y = src[i].y();
        const double u = dst[i].x(), v = dst[i].y();
        a.row(2 * i) << x, y, 1, 0, 0, 0, -x * u, -y * u;
        a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -x * v, -y * v;
        rhs(2 * i) = u;
        rhs(2 * i + 1) = v;
    }
    Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
    if (!lu.isInvertible())
        throw std::invalid_argument("ipm_from_correspondences: degenerate configuration");
    const Eigen::Matrix<double, 8, 1> h = lu.solve(rhs);

    Homography out;
    out.matrix << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
    return out;
}

Homography ipm_from_calibration(const Calibration& calib, const BevConfig& bev,
                                double ground_height)
{
    // BEV pixel -> metric ground coordinates (x forward, y left).
    Eigen::Matrix3d bev_to_ground;
    bev_to_ground << 0.0, -bev.resolution, bev.resolution * bev.height,
                     -bev.resolution, 0.0, bev.resolution * bev.width / 2.0,
                     0.0, 0.0, 1.0;

    // (x, y, 1) -> homogeneous 3D point on the plane z = ground_height.
    Eigen::Matrix<double, 4, 3> lift;
    lift << 1, 0, 0,
            0, 1, 0,
            0, 0, ground_height,
            0, 0, 1;

    const Eigen::Matrix3d bev_to_pv =
        calib.projection * calib.rect_rotation * calib.lidar_to_cam * lift * bev_to_ground;
    if (std::abs(bev_to_pv.determinant()) < 1e-12)
        throw std::runtime_error("ipm_from_calibration: camera parallel to ground plane");

    Homography out;
    out.matrix = bev_to_pv.inverse();
    out.matrix /= out.matrix(2, 2);
    return out;
}

Image8 warp_to_bev(const Image8& mask, const Homography& h, const BevConfig& bev)
{
    Image8 out(bev.width, bev.height);
    const Eigen::Matrix3d inv = h.matrix.inverse();
    for (int v = 0; v < bev.height; ++v)
    {
        for (int u = 0; u < bev.width; ++u)
        {
            const Eigen::Vector3d q = inv * Eigen::Vector3d(u, v, 1.0);
            if (std::abs(q.z()) < 1e-12)
                continue;
            const int sx = static_cast<int>(std::lround(q.x() / q.z()));
            const int sy = static_cast<int>(std::lround(q.y() / q.z()));
            if (sx < 0 || sx >= mask.width || sy < 0 || sy >= mask.height)
                continue;
            out.at(u, v) = mask.at(sx, sy) ? 255 : 0;
        }
    }
    return out;
}

namespace
{

struct Component
{
    int min_row = 1 << 30, max_row = -1;
    int min_col = 1 << 30, max_col = -1;
    std::size_t pixels = 0;
};

int find_root(std::vector<int>& parent, int i)
{
    while (parent[i] != i)
    {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

} // namespace

std::vector<BevCandidate> select_candidates(const Image8& bev, const PostprocessConfig& cfg)
{
    const int w = bev.width, h = bev.height;
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<Component> comps;

    // 8-connected flood fill.
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
    {
        for (int x = 0; x < w; ++x)
        {
            if (!bev.at(x, y) || label[static_cast<std::size_t>(y) * w + x] >= 0)
                continue;
            const int c = static_cast<int>(comps.size());
            comps.emplace_back();
            stack.assign(1, {x, y});
            label[static_cast<std::size_t>(y) * w + x] = c;
            while (!stack.empty())
            {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                Component& comp = comps[c];
                comp.min_row = std::min(comp.min_row, cy);
                comp.max_row = std::max(comp.max_row, cy);
                comp.min_col = std::min(comp.min_col, cx);
                comp.max_col = std::max(comp.max_col, cx);
                ++comp.pixels;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx)
                    {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h)
                            continue;
                        std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
                        if (bev.at(nx, ny) && label[idx] < 0)
                        {
                            label[idx] = c;
                            stack.push_back({nx, ny});
                        }
                    }
            }
        }
    }

    // Merge vertically separated fragments of the same curb: row gap within
    // merge_row_gap and column ranges within merge_col_distance.
    std::vector<int> parent(comps.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (std::size_t j = i + 1; j < comps.size(); ++j)
        {
            const Component& a = comps[i];
            const Component& b = comps[j];
            const int row_gap = std::max(a.min_row, b.min_row) - std::min(a.max_row, b.max_row);
            const int col_gap = std::max(a.min_col, b.min_col) - std::min(a.max_col, b.max_col);
            if (row_gap <= cfg.merge_row_gap && col_gap <= cfg.merge_col_distance)
                parent[find_root(parent, static_cast<int>(i))] =
                    find_root(parent, static_cast<int>(j));
        }

    // Compact instance ids, dropping speckle instances.
    std::map<int, int> instance_of_root;
    std::vector<std::size_t> root_pixels(comps.size(), 0);
    for (std::size_t i = 0; i < comps.size(); ++i)
        root_pixels[find_root(parent, static_cast<int>(i))] += comps[i].pixels;
    for (std::size_t i = 0; i < comps.size(); ++i)
    {
        const int r = find_root(parent, static_cast<int>(i));
        if (root_pixels[r] >= static_cast<std::size_t>(cfg.min_component_pixels) &&
            instance_of_root.find(r) == instance_of_root.end())
            instance_of_root[r] = static_cast<int>(instance_of_root.size());
    }

    // Per instance and row, the median column of that row's pixels.
    std::map<std::pair<int, int>, std::vector<int>> cols_by_instance_row;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
        {
            const int l = label[static_cast<std::size_t>(y) * w + x];
            if (l < 0)
                continue;
            auto it = instance_of_root.find(find_root(parent, l));
            if (it == instance_of_root.end())
                continue;
            cols_by_instance_row[{it->second, y}].push_back(x);
        }

    std::vector<BevCandidate> out;
    out.reserve(cols_by_instance_row.size());
    for (auto& [key, cols] : cols_by_instance_row)
    {
        std::sort(cols.begin(), cols.end());
        const std::size_t n = cols.size();
        const double median = (n % 2 == 1) ? cols[n / 2]
                                           : 0.5 * (cols[n / 2 - 1] + cols[n / 2]);
        out.push_back(BevCandidate{key.first, key.second, median});
    }
    std::sort(out.begin(), out.end(), [](const BevCandidate& a, const BevCandidate& b) {
        return a.instance != b.instance ? a.instance < b.instance : a.row < b.row;
    });
    return out;
}

QuadraticCurve fit_quadratic(const std::vector<BevCandidate>& candidates)
{
    std::vector<double> vs, us;
    for (const BevCandidate& c : candidates)
    {
        vs.push_back(c.row);
        us.push_back(c.col);
    }
    std::vector<double> distinct = vs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw std::invalid_argument("fit_quadratic: underdetermined (need >= 3 distinct rows)");

    const double v_mean = std::accumulate(vs.begin(), vs.end(), 0.0) / vs.size();

    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < vs.size(); ++i)
    {
        const double t = vs[i] - v_mean;
        const Eigen::Vector3d row(t * t, t, 1.0);
        ata += row * row.transpose();
        atb += row * us[i];
    }

    QuadraticCurve curve;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
    lu.setThreshold(1e-10);
    Eigen::Vector3d coef;
    if (lu.isInvertible())
    {
        coef = lu.solve(atb);
    }
    else
    {
        // Near-singular quadratic system: linear fit, a = 0.
        Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
        Eigen::Vector2d r = Eigen::Vector2d::Zero();
        for (std::size_t i = 0; i < vs.size(); ++i)
        {
            const double t = vs[i] - v_mean;
            m += Eigen::Vector2d(t, 1.0) * Eigen::RowVector2d(t, 1.0);
            r += Eigen::Vector2d(t, 1.0) * us[i];
        }
        const Eigen::Vector2d lin = m.ldlt().solve(r);
        coef = Eigen::Vector3d(0.0, lin.x(), lin.y());
        curve.linear_fallback = true;
    }

    // Map centered coefficients back: u = A(t)^2 + B t + C, t = v - m.
    curve.a = coef(0);
    curve.b = coef(1) - 2.0 * coef(0) * v_mean;
    curve.c = coef(0) * v_mean * v_mean - coef(1) * v_mean + coef(2);
    curve.v_min = static_cast<int>(*std::min_element(vs.begin(), vs.end()));
    curve.v_max = static_cast<int>(*std::max_element(vs.begin(), vs.end()));
    return curve;
}

Image8 rasterize_curves(const std::vector<QuadraticCurve>& curves, const BevConfig& bev)
{
    Image8 out(bev.width, bev.height);
    for (const QuadraticCurve& curve : curves)
    {
        for (int v = std::max(curve.v_min, 0); v <= std::min(curve.v_max, bev.height - 1); ++v)
        {
            const double u = curve.a * double(v) * v + curve.b * v + curve.c;
            const int x = static_cast<int>(std::lround(u));
            if (x >= 0 && x < bev.width)
                out.at(x, v) = 255;
        }
    }
    return out;
}

} // namespace adicurb

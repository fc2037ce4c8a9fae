#include "ground_seg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace adicurb
{

namespace
{

void append_point(PointCloud& cloud, const RawPoint& p, int ring)
{
    cloud.points.push_back(p);
    cloud.ring_ids.push_back(ring);
}

int segment_index(double x, double x_min, double bin_width, int n_segments)
{
    if (bin_width <= 0.0)
        return 0;
    const double t = (x - x_min) / bin_width;
    int b = static_cast<int>(std::floor(t));
    if (static_cast<double>(b) == t && b > 0)
        --b; // boundary x belongs to the lower bin
    return std::clamp(b, 0, n_segments - 1);
}

} // namespace

std::vector<PointCloud> split_segments(const PointCloud& cloud, int n_segments)
{
    if (n_segments < 1)
        throw std::invalid_argument("split_segments: n_segments must be >= 1");
    std::vector<PointCloud> segments(n_segments);
    for (auto& s : segments)
        s.num_rings = cloud.num_rings;
    if (cloud.empty())
        return segments;

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    for (const RawPoint& p : cloud.points)
    {
        x_min = std::min<double>(x_min, p.x);
        x_max = std::max<double>(x_max, p.x);
    }
    const double bin_width = (x_max - x_min) / n_segments;
    const bool rings = cloud.ring_ids.size() == cloud.size();
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        const int b = segment_index(cloud.points[i].x, x_min, bin_width, n_segments);
        append_point(segments[b], cloud.points[i], rings ? cloud.ring_ids[i] : 0);
    }
    return segments;
}

PlaneModel fit_ground_plane(const PointCloud& segment, int num_lpr, double seed_margin,
                            int n_iter, double inlier_threshold)
{
    const std::size_t n = segment.size();
    if (n < 3)
        throw std::invalid_argument("fit_ground_plane: degenerate segment (< 3 points)");

    std::vector<float> zs(n);
    for (std::size_t i = 0; i < n; ++i)
        zs[i] = segment.points[i].z;
    const std::size_t k = std::min<std::size_t>(std::max(num_lpr, 1), n);
    std::nth_element(zs.begin(), zs.begin() + (k - 1), zs.end());
    double lpr = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        lpr += zs[i];
    lpr /= static_cast<double>(k);

    std::vector<std::size_t> inliers;
    for (std::size_t i = 0; i < n; ++i)
        if (segment.points[i].z <= lpr + seed_margin)
            inliers.push_back(i);

    auto mean_z_plane = [&]() {
        double mz = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mz += segment.points[i].z;
        PlaneModel pm;
        pm.normal = Eigen::Vector3d::UnitZ();
        pm.offset = -mz / static_cast<double>(n);
        pm.inlier_threshold = inlier_threshold;
        return pm;
    };

    PlaneModel model;
    model.inlier_threshold = inlier_threshold;
    for (int iter = 0; iter < std::max(n_iter, 1); ++iter)
    {
        if (inliers.size() < 3)
            return mean_z_plane();
        Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
        for (std::size_t i : inliers)
        {
            const RawPoint& p = segment.points[i];
            centroid += Eigen::Vector3d(p.x, p.y, p.z);
        }
        centroid /= static_cast<double>(inliers.size());

        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (std::size_t i : inliers)
        {
            const RawPoint& p = segment.points[i];
            const Eigen::Vector3d d = Eigen::Vector3d(p.x, p.y, p.z) - centroid;
            cov += d * d.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
        // Two vanishing eigenvalues means the seeds are collinear.
        if (eig.eigenvalues()(1) < 1e-12)
            return mean_z_plane();
        Eigen::Vector3d normal = eig.eigenvectors().col(0);
        if (normal.z() < 0)
            normal = -normal;
        if (std::abs(normal.z()) < 1e-12)
            return mean_z_plane();
        normal.normalize();

        model.normal = normal;
        model.offset = -normal.dot(centroid);

        std::vector<std::size_t> next;
        for (std::size_t i = 0; i < n; ++i)
            if (model.distance(segment.points[i]) <= inlier_threshold)
                next.push_back(i);
        if (next == inliers)
            break;
        inliers = std::move(next);
    }
    return model;
}

GroundPartition segment_ground(const PointCloud& cloud, const GroundSegConfig& cfg)
{
    GroundPartition part;
    part.ground.num_rings = cloud.num_rings;
    part.non_ground.num_rings = cloud.num_rings;
    part.is_ground.assign(cloud.size(), 0);
    if (cloud.empty())
        return part;

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    for (const RawPoint& p : cloud.points)
    {
        x_min = std::min<double>(x_min, p.x);
        x_max = std::max<double>(x_max, p.x);
    }
    const int n_seg = std::max(cfg.n_segments, 1);
    const double bin_width = (x_max - x_min) / n_seg;

    std::vector<PointCloud> segments(n_seg);
    std::vector<std::size_t> seg_of_point(cloud.size());
    const bool rings = cloud.ring_ids.size() == cloud.size();
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        const int b = segment_index(cloud.points[i].x, x_min, bin_width, n_seg);
        seg_of_point[i] = static_cast<std::size_t>(b);
        append_point(segments[b], cloud.points[i], rings ? cloud.ring_ids[i] : 0);
    }

    std::vector<bool> fitted(n_seg, false);
    part.segment_planes.assign(n_seg, PlaneModel{});
    for (int s = 0; s < n_seg; ++s)
    {
        if (segments[s].size() < 3)
            continue;
        part.segment_planes[s] = fit_ground_plane(segments[s], cfg.num_lpr, cfg.seed_margin,
                                                  cfg.n_iter, cfg.inlier_threshold);
        fitted[s] = true;
    }
    // Segments too small to fit inherit the nearest fitted segment's plane.
    for (int s = 0; s < n_seg; ++s)
    {
        if (fitted[s])
            continue;
        int best = -1;
        for (int t = 0; t < n_seg; ++t)
            if (fitted[t] && (best < 0 || std::abs(t - s) < std::abs(best - s)))
                best = t;
        if (best >= 0)
            part.segment_planes[s] = part.segment_planes[best];
    }

    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        const PlaneModel& plane = part.segment_planes[seg_of_point[i]];
        const bool g = plane.distance(cloud.points[i]) <= cfg.inlier_threshold;
        part.is_ground[i] = g ? 1 : 0;
        append_point(g ? part.ground : part.non_ground, cloud.points[i],
                     rings ? cloud.ring_ids[i] : 0);
    }
    return part;
}

PointCloud remove_dynamic_objects(const PointCloud& non_ground, const DynamicObjectConfig& cfg,
                                  double ground_z)
{
    const std::size_t n = non_ground.size();
    PointCloud out;
    out.num_rings = non_ground.num_rings;
    if (n == 0)
        return out;

    // Voxel-hash Euclidean clustering at the configured distance threshold.
    const double cell = std::max(cfg.cluster_distance, 1e-3);
    auto key = [&](const RawPoint& p) {
        const long long ix = static_cast<long long>(std::floor(p.x / cell));
        const long long iy = static_cast<long long>(std::floor(p.y / cell));
        const long long iz = static_cast<long long>(std::floor(p.z / cell));
        return (ix * 73856093LL) ^ (iy * 19349663LL) ^ (iz * 83492791LL);
    };
    std::unordered_map<long long, std::vector<std::size_t>> voxels;
    for (std::size_t i = 0; i < n; ++i)
        voxels[key(non_ground.points[i])].push_back(i);

    const double d2 = cfg.cluster_distance * cfg.cluster_distance;
    std::vector<int> label(n, -1);
    int n_clusters = 0;
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < n; ++seed)
    {
        if (label[seed] >= 0)
            continue;
        const int c = n_clusters++;
        label[seed] = c;
        stack.assign(1, seed);
        while (!stack.empty())
        {
            const std::size_t i = stack.back();
            stack.pop_back();
            const RawPoint& pi = non_ground.points[i];
            const long long ix = static_cast<long long>(std::floor(pi.x / cell));
            const long long iy = static_cast<long long>(std::floor(pi.y / cell));
            const long long iz = static_cast<long long>(std::floor(pi.z / cell));
            for (long long dx = -1; dx <= 1; ++dx)
                for (long long dy = -1; dy <= 1; ++dy)
                    for (long long dz = -1; dz <= 1; ++dz)
                    {
                        const long long k = ((ix + dx) * 73856093LL) ^ ((iy + dy) * 19349663LL) ^
                                            ((iz + dz) * 83492791LL);
                        auto it = voxels.find(k);
                        if (it == voxels.end())
                            continue;
                        for (std::size_t j : it->second)
                        {
                            if (label[j] >= 0)
                                continue;
                            const RawPoint& pj = non_ground.points[j];
                            const double ddx = pi.x - pj.x, ddy = pi.y - pj.y, ddz = pi.z - pj.z;
                            if (ddx * ddx + ddy * ddy + ddz * ddz <= d2)
                            {
                                label[j] = c;
                                stack.push_back(j);
                            }
                        }
                    }
        }
    }

    struct Box
    {
        double min_x = 1e30, max_x = -1e30;
        double min_y = 1e30, max_y = -1e30;
        double min_z = 1e30, max_z = -1e30;
        std::size_t count = 0;
    };
    std::vector<Box> boxes(n_clusters);
    for (std::size_t i = 0; i < n; ++i)
    {
        Box& b = boxes[label[i]];
        const RawPoint& p = non_ground.points[i];
        b.min_x = std::min<double>(b.min_x, p.x);
        b.max_x = std::max<double>(b.max_x, p.x);
        b.min_y = std::min<double>(b.min_y, p.y);
        b.max_y = std::max<double>(b.max_y, p.y);
        b.min_z = std::min<double>(b.min_z, p.z);
        b.max_z = std::max<double>(b.max_z, p.z);
        ++b.count;
    }

    std::vector<bool> removed(n_clusters, false);
    for (int c = 0; c < n_clusters; ++c)
    {
        const Box& b = boxes[c];
        if (b.count < static_cast<std::size_t>(cfg.min_cluster_size))
            continue;
        const double ex = b.max_x - b.min_x;
        const double ey = b.max_y - b.min_y;
        const double footprint_long = std::max(ex, ey);
        const double footprint_short = std::min(ex, ey);
        const double height = b.max_z - b.min_z;
        const bool envelope = footprint_long <= cfg.max_footprint_long &&
                              footprint_short <= cfg.max_footprint_short &&
                              height >= cfg.min_height && height <= cfg.max_height &&
                              std::abs(b.min_z - ground_z) <= cfg.ground_tolerance;
        removed[c] = envelope;
    }

    const bool rings = non_ground.ring_ids.size() == n;
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[label[i]])
            append_point(out, non_ground.points[i], rings ? non_ground.ring_ids[i] : 0);
    return out;
}

} // namespace adicurb

#include "projection.hpp"

namespace adicurb
{

std::optional<PixelSample> project_point(const Calibration& calib, double x, double y, double z)
{
    Eigen::Vector4d p(x, y, z, 1.0);
    Eigen::Vector4d cam = calib.rect_rotation * (calib.lidar_to_cam * p);
    Eigen::Vector3d img = calib.projection * cam;
    if (img.z() <= 1e-6)
        return std::nullopt;
    PixelSample s;
    s.u = img.x() / img.z();
    s.v = img.y() / img.z();
    s.depth = img.z();
    s.altitude = z;
    return s;
}

std::vector<std::pair<std::size_t, PixelSample>> project_cloud(const Calibration& calib,
                                                               const PointCloud& cloud)
{
    std::vector<std::pair<std::size_t, PixelSample>> out;
    out.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        const RawPoint& p = cloud.points[i];
        auto s = project_point(calib, p.x, p.y, p.z);
        if (!s)
            continue;
        if (s->u < 0.0 || s->u >= calib.image_width || s->v < 0.0 || s->v >= calib.image_height)
            continue;
        out.emplace_back(i, *s);
    }
    return out;
}

} // namespace adicurb

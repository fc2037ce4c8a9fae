#include "kitti_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "projection.hpp"

namespace adicurb
{

PointCloud load_point_cloud(const std::string& path, LoadStats* stats)
{
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in)
        throw ParseError(path + ": cannot open");
    const std::streamsize bytes = in.tellg();
    in.seekg(0);

    if (bytes % 16 != 0)
        throw ParseError(path + ": trailing " + std::to_string(bytes % 16) +
                         " byte(s) at offset " + std::to_string(bytes - bytes % 16));

    PointCloud cloud;
    const std::size_t n = static_cast<std::size_t>(bytes) / 16;
    cloud.points.reserve(n);
    std::vector<float> buf(n * 4);
    if (n > 0 && !in.read(reinterpret_cast<char*>(buf.data()), bytes))
        throw ParseError(path + ": short read");

    std::size_t dropped = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        RawPoint p{buf[4 * i], buf[4 * i + 1], buf[4 * i + 2], buf[4 * i + 3]};
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        {
            ++dropped;
            continue;
        }
        cloud.points.push_back(p);
    }
    if (stats)
        stats->dropped_non_finite = dropped;
    cloud.ring_ids.assign(cloud.points.size(), 0);
    cloud.num_rings = 0;
    return cloud;
}

void save_point_cloud(const std::string& path, const PointCloud& cloud)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError(path + ": cannot open for writing");
    for (const RawPoint& p : cloud.points)
        out.write(reinterpret_cast<const char*>(&p), 16);
}

namespace
{

void validate_rotation(const Eigen::Matrix3d& r, const std::string& path, const std::string& name)
{
    const double ortho = (r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho > 1e-3 || std::abs(r.determinant() - 1.0) > 1e-3)
        throw ParseError(path + ": " + name + " is not a rotation (orthonormality residual " +
                         std::to_string(ortho) + ")");
}

} // namespace

Calibration load_calibration(const std::string& path, const std::string& camera_key)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError(path + ": cannot open");

    std::map<std::string, std::vector<double>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            continue;
        std::string key = line.substr(0, colon);
        std::istringstream vals(line.substr(colon + 1));
        std::vector<double> v;
        double x;
        while (vals >> x)
            v.push_back(x);
        if (vals.fail() && !vals.eof())
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad value for key " + key);
        entries[key] = std::move(v);
    }

    auto require = [&](const std::string& key, std::size_t count) -> const std::vector<double>& {
        auto it = entries.find(key);
        if (it == entries.end())
            throw ParseError(path + ": " + key + " not found");
        if (it->second.size() != count)
            throw ParseError(path + ": " + key + " has " + std::to_string(it->second.size()) +
                             " values, expected " + std::to_string(count));
        return it->second;
    };

    Calibration calib;
    const auto& p = require(camera_key, 12);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            calib.projection(r, c) = p[4 * r + c];

    const auto& r0 = require("R0_rect", 9);
    calib.rect_rotation = Eigen::Matrix4d::Identity();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            calib.rect_rotation(r, c) = r0[3 * r + c];

    const auto& tr = require("Tr_velo_to_cam", 12);
    calib.lidar_to_cam = Eigen::Matrix4d::Identity();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            calib.lidar_to_cam(r, c) = tr[4 * r + c];

    if (auto it = entries.find("image_width"); it != entries.end() && !it->second.empty())
        calib.image_width = static_cast<int>(it->second[0]);
    if (auto it = entries.find("image_height"); it != entries.end() && !it->second.empty())
        calib.image_height = static_cast<int>(it->second[0]);

    validate_rotation(calib.lidar_to_cam.topLeftCorner<3, 3>(), path, "Tr_velo_to_cam");
    validate_rotation(calib.rect_rotation.topLeftCorner<3, 3>(), path, "R0_rect");
    return calib;
}

void save_calibration(const std::string& path, const Calibration& calib,
                      const std::string& camera_key)
{
    std::ofstream out(path);
    if (!out)
        throw ParseError(path + ": cannot open for writing");
    out.precision(12);
    out << camera_key << ":";
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            out << " " << calib.projection(r, c);
    out << "\nR0_rect:";
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out << " " << calib.rect_rotation(r, c);
    out << "\nTr_velo_to_cam:";
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            out << " " << calib.lidar_to_cam(r, c);
    out << "\nimage_width: " << calib.image_width;
    out << "\nimage_height: " << calib.image_height << "\n";
}

void assign_ring_ids(PointCloud& cloud, int num_rings)
{
    if (num_rings < 1)
        throw std::invalid_argument("assign_ring_ids: num_rings must be >= 1");
    cloud.num_rings = num_rings;
    cloud.ring_ids.assign(cloud.size(), 0);
    if (cloud.empty())
        return;

    std::vector<double> angles(cloud.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        const RawPoint& p = cloud.points[i];
        angles[i] = std::atan2(p.z, std::sqrt(double(p.x) * p.x + double(p.y) * p.y));
        lo = std::min(lo, angles[i]);
        hi = std::max(hi, angles[i]);
    }
    if (!(hi > lo))
        return; // < 2 distinct vertical angles: everything stays on ring 0

    const double span = hi - lo;
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        int r = static_cast<int>((angles[i] - lo) / span * num_rings);
        cloud.ring_ids[i] = std::clamp(r, 0, num_rings - 1);
    }
}

PointCloud crop_to_frustum(const PointCloud& cloud, const Calibration& calib)
{
    PointCloud out;
    out.num_rings = cloud.num_rings;
    const bool rings = cloud.ring_ids.size() == cloud.size();
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        const RawPoint& p = cloud.points[i];
        auto s = project_point(calib, p.x, p.y, p.z);
        if (!s)
            continue;
        if (s->u < 0.0 || s->u >= calib.image_width || s->v < 0.0 || s->v >= calib.image_height)
            continue;
        out.points.push_back(p);
        out.ring_ids.push_back(rings ? cloud.ring_ids[i] : 0);
    }
    return out;
}

} // namespace adicurb

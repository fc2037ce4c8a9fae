#include "synth.hpp"

#include <cmath>
#include <random>

namespace adicurb
{

double curb_lateral(const SynthConfig& spec, bool left, double x)
{
    const double base = left ? spec.road_width / 2.0 : -spec.road_width / 2.0;
    const double a1 = left ? spec.left_a1 : spec.right_a1;
    const double a2 = left ? spec.left_a2 : spec.right_a2;
    return base + a1 * x + a2 * x * x;
}

namespace
{

bool in_road(const SynthConfig& spec, double x, double y)
{
    return y < curb_lateral(spec, true, x) && y > curb_lateral(spec, false, x);
}

// Slab intersection with the obstacle box; returns entry t or a negative
// value when the ray misses.
double intersect_box(const SynthConfig& spec, const Eigen::Vector3d& dir, double road_z)
{
    if (!spec.obstacle)
        return -1.0;
    const SynthObstacle& b = spec.box;
    const double lo[3] = {b.cx - b.dx / 2.0, b.cy - b.dy / 2.0, road_z + b.bottom_offset};
    const double hi[3] = {b.cx + b.dx / 2.0, b.cy + b.dy / 2.0,
                          road_z + b.bottom_offset + b.dz};
    double t_near = 0.0, t_far = 1e30;
    for (int a = 0; a < 3; ++a)
    {
        if (std::abs(dir[a]) < 1e-12)
        {
            if (0.0 < lo[a] || 0.0 > hi[a])
                return -1.0;
            continue;
        }
        double t0 = lo[a] / dir[a];
        double t1 = hi[a] / dir[a];
        if (t0 > t1)
            std::swap(t0, t1);
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
        if (t_near > t_far)
            return -1.0;
    }
    return t_near > 1e-6 ? t_near : -1.0;
}

Calibration synthetic_calibration()
{
    Calibration calib;
    calib.projection << 721.5, 0.0, 609.6, 0.0,
                        0.0, 721.5, 172.9, 0.0,
                        0.0, 0.0, 1.0, 0.0;
    calib.rect_rotation = Eigen::Matrix4d::Identity();
    calib.lidar_to_cam = Eigen::Matrix4d::Identity();
    // Sensor x forward / y left / z up to camera x right / y down / z forward.
    calib.lidar_to_cam.topLeftCorner<3, 3>() <<  0.0, -1.0,  0.0,
                                                 0.0,  0.0, -1.0,
                                                 1.0,  0.0,  0.0;
    calib.image_width = 1242;
    calib.image_height = 375;
    return calib;
}

} // namespace

Scene generate_scene(const SynthConfig& spec)
{
    Scene scene;
    scene.calib = synthetic_calibration();
    scene.cloud.num_rings = spec.rings;

    const double road_z = -spec.sensor_height;
    const double side_z = road_z + spec.curb_height;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    const int n_az = static_cast<int>(std::floor(2.0 * M_PI / spec.azimuth_resolution));
    for (int r = 0; r < spec.rings; ++r)
    {
        const double theta_v = spec.rings > 1
                                   ? spec.vfov_min +
                                         r * (spec.vfov_max - spec.vfov_min) / (spec.rings - 1)
                                   : spec.vfov_min;
        const double cv = std::cos(theta_v), sv = std::sin(theta_v);
        for (int i = 0; i < n_az; ++i)
        {
            const double phi = -M_PI + i * spec.azimuth_resolution;
            const Eigen::Vector3d dir(cv * std::cos(phi), cv * std::sin(phi), sv);

            double t_hit = -1.0;
            float intensity = 0.3f;
            if (dir.z() < -1e-9)
            {
                const double t_side = side_z / dir.z();
                const double t_road = road_z / dir.z();
                const Eigen::Vector3d p_side = t_side * dir;
                if (!in_road(spec, p_side.x(), p_side.y()))
                {
                    t_hit = t_side;
                    intensity = 0.5f;
                }
                else
                {
                    const Eigen::Vector3d p_road = t_road * dir;
                    if (in_road(spec, p_road.x(), p_road.y()))
                    {
                        t_hit = t_road;
                        intensity = 0.3f;
                    }
                    else
                    {
                        // The ray crosses a curb face between the two levels.
                        const bool left = p_road.y() > curb_lateral(spec, true, p_road.x());
                        double lo = t_side, hi = t_road;
                        for (int it = 0; it < 48; ++it)
                        {
                            const double mid = 0.5 * (lo + hi);
                            const Eigen::Vector3d pm = mid * dir;
                            const double g = pm.y() - curb_lateral(spec, left, pm.x());
                            const bool outside = left ? g > 0.0 : g < 0.0;
                            if (outside)
                                hi = mid;
                            else
                                lo = mid;
                        }
                        t_hit = 0.5 * (lo + hi);
                        intensity = 0.7f;
                    }
                }
            }

            const double t_box = intersect_box(spec, dir, road_z);
            if (t_box > 0.0 && (t_hit < 0.0 || t_box < t_hit))
            {
                t_hit = t_box;
                intensity = 0.9f;
            }
            if (t_hit < 0.0 || t_hit > spec.max_range)
                continue;

            Eigen::Vector3d p = t_hit * dir;
            if (spec.noise_sigma > 0.0)
                p.z() += spec.noise_sigma * noise(rng);
            scene.cloud.points.push_back(RawPoint{static_cast<float>(p.x()),
                                                  static_cast<float>(p.y()),
                                                  static_cast<float>(p.z()), intensity});
            scene.cloud.ring_ids.push_back(r);
        }
    }

    for (double x = spec.gt_x_min; x <= spec.gt_x_max + 1e-9; x += spec.gt_step)
    {
        scene.left_curb.emplace_back(x, curb_lateral(spec, true, x), road_z);
        scene.right_curb.emplace_back(x, curb_lateral(spec, false, x), road_z);
    }
    return scene;
}

namespace
{

void draw_segment(Image8& img, int x0, int y0, int x1, int y1)
{
    // Bresenham; produces an 8-connected line.
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true)
    {
        if (x0 >= 0 && x0 < img.width && y0 >= 0 && y0 < img.height)
            img.at(x0, y0) = 255;
        if (x0 == x1 && y0 == y1)
            break;
        const int e2 = 2 * err;
        if (e2 >= dy)
        {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx)
        {
            err += dx;
            y0 += sy;
        }
    }
}

} // namespace

Image8 ground_truth_bev(const std::vector<Eigen::Vector3d>& left,
                        const std::vector<Eigen::Vector3d>& right, const BevConfig& bev)
{
    Image8 img(bev.width, bev.height);
    auto draw_polyline = [&](const std::vector<Eigen::Vector3d>& line) {
        for (std::size_t i = 0; i + 1 < line.size(); ++i)
        {
            const int x0 = static_cast<int>(std::lround(bev.width / 2.0 - line[i].y() / bev.resolution));
            const int y0 = static_cast<int>(std::lround(bev.height - line[i].x() / bev.resolution));
            const int x1 = static_cast<int>(std::lround(bev.width / 2.0 - line[i + 1].y() / bev.resolution));
            const int y1 = static_cast<int>(std::lround(bev.height - line[i + 1].x() / bev.resolution));
            draw_segment(img, x0, y0, x1, y1);
        }
        if (line.size() == 1)
        {
            const int x0 = static_cast<int>(std::lround(bev.width / 2.0 - line[0].y() / bev.resolution));
            const int y0 = static_cast<int>(std::lround(bev.height - line[0].x() / bev.resolution));
            if (x0 >= 0 && x0 < img.width && y0 >= 0 && y0 < img.height)
                img.at(x0, y0) = 255;
        }
    };
    draw_polyline(left);
    draw_polyline(right);
    return img;
}

} // namespace adicurb

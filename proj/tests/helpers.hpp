#ifndef ADICURB_TEST_HELPERS_HPP
#define ADICURB_TEST_HELPERS_HPP

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "types.hpp"

namespace testutil
{

// Unique scratch directory, removed on destruction.
class TempDir
{
  public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("adicurb_test_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

inline adicurb::Calibration simple_calibration(double f = 100.0, double cu = 50.0,
                                               double cv = 50.0, int width = 100,
                                               int height = 100)
{
    adicurb::Calibration calib;
    calib.projection << f, 0, cu, 0, 0, f, cv, 0, 0, 0, 1, 0;
    calib.rect_rotation = Eigen::Matrix4d::Identity();
    calib.lidar_to_cam = Eigen::Matrix4d::Identity();
    calib.image_width = width;
    calib.image_height = height;
    return calib;
}

inline adicurb::PointCloud random_cloud(std::size_t n, std::uint64_t seed, float span = 20.f)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(-span, span);
    adicurb::PointCloud cloud;
    cloud.num_rings = 1;
    for (std::size_t i = 0; i < n; ++i)
    {
        cloud.points.push_back({dist(rng), dist(rng), dist(rng), 0.5f});
        cloud.ring_ids.push_back(0);
    }
    return cloud;
}

} // namespace testutil

#endif

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gpr_filter.hpp"
#include "helpers.hpp"

using namespace adicurb;

TEST_CASE("se_kernel closed-form values")
{
    GprConfig hyper;
    hyper.length_scale = 2.0;
    hyper.signal_variance = 1.5;
    CHECK(se_kernel(3.0, 3.0, hyper) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(se_kernel(0.0, 2.0, hyper) ==
          doctest::Approx(1.5 * std::exp(-4.0 / (2.0 * 4.0))).epsilon(1e-12));
    CHECK(se_kernel(1.0, 5.0, hyper) == doctest::Approx(se_kernel(5.0, 1.0, hyper)));
    CHECK(se_kernel(0.0, 100.0, hyper) < 1e-12);
}

TEST_CASE("posterior mean interpolates the data at negligible noise")
{
    GprConfig hyper;
    hyper.length_scale = 3.0;
    hyper.signal_variance = 1.0;
    hyper.noise_variance = 1e-8;
    const std::vector<double> x = {0.0, 1.0, 2.5, 4.0, 6.0};
    const std::vector<double> y = {0.1, -0.2, 0.3, 0.05, -0.1};
    const BoundaryModel model(x, y, hyper);
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const auto [mean, var] = model.predict(x[i]);
        CHECK(std::abs(mean - y[i]) < 1e-5);
        CHECK(var >= 0.0);
        CHECK(var < 1e-5);
    }
}

TEST_CASE("posterior reverts to the prior far from the data")
{
    GprConfig hyper;
    hyper.length_scale = 1.0;
    hyper.signal_variance = 2.0;
    hyper.noise_variance = 0.01;
    const BoundaryModel model({0.0, 1.0, 2.0}, {5.0, 4.0, 5.5}, hyper);
    const auto [mean, var] = model.predict(50.0);
    CHECK(std::abs(mean) < 1e-6);
    CHECK(var == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("posterior variance never exceeds the prior and shrinks near data")
{
    GprConfig hyper;
    const std::vector<double> x = {0.0, 2.0, 4.0, 6.0, 8.0};
    const std::vector<double> y = {0.0, 0.5, -0.5, 0.2, 0.0};
    const BoundaryModel model(x, y, hyper);
    for (double q = -5.0; q <= 15.0; q += 0.25)
    {
        const auto [mean, var] = model.predict(q);
        (void)mean;
        CHECK(var <= hyper.signal_variance + 1e-9);
        CHECK(var >= 0.0);
    }
    CHECK(model.predict(2.0).second < model.predict(20.0).second);
}

TEST_CASE("prediction is invariant to training-point order")
{
    GprConfig hyper;
    std::vector<double> x = {0.0, 1.5, 3.0, 4.5, 6.0, 7.5};
    std::vector<double> y = {0.3, -0.1, 0.4, 0.0, 0.2, -0.3};
    const BoundaryModel a(x, y, hyper);
    std::reverse(x.begin(), x.end());
    std::reverse(y.begin(), y.end());
    const BoundaryModel b(x, y, hyper);
    for (double q : {-1.0, 0.7, 3.2, 9.0})
    {
        CHECK(a.predict(q).first == doctest::Approx(b.predict(q).first).epsilon(1e-9));
        CHECK(a.predict(q).second == doctest::Approx(b.predict(q).second).epsilon(1e-9));
    }
}

TEST_CASE("duplicate support points do not break the factorization")
{
    GprConfig hyper;
    const BoundaryModel model({1.0, 1.0, 1.0, 2.0}, {0.5, 0.5, 0.5, 1.0}, hyper);
    const auto [mean, var] = model.predict(1.0);
    CHECK(std::isfinite(mean));
    CHECK(var >= 0.0);
    CHECK(model.effective_noise() >= hyper.noise_variance);
}

TEST_CASE("iterative_filter keeps a clean smooth boundary intact")
{
    GprConfig hyper;
    std::vector<double> x, y;
    for (int i = 0; i < 40; ++i)
    {
        x.push_back(0.5 * i);
        y.push_back(4.0 + 0.02 * x.back() + 0.05 * std::sin(0.3 * x.back()));
    }
    const FilterResult result = iterative_filter(x, y, hyper);
    CHECK(result.outlier_indices.empty());
    CHECK(result.inlier_indices.size() == x.size());
    CHECK_FALSE(result.warning_small_input);
}

TEST_CASE("iterative_filter rejects a planted 2 m outlier")
{
    GprConfig hyper;
    std::vector<double> x, y;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (int i = 0; i < 30; ++i)
    {
        x.push_back(0.6 * i);
        y.push_back(4.0 + noise(rng));
    }
    x.push_back(9.3);
    y.push_back(6.0); // 2 m off the boundary
    const std::size_t outlier = x.size() - 1;

    const FilterResult result = iterative_filter(x, y, hyper);
    // The planted point must go; at most one boundary point may fall with it
    // (rejected points never re-enter the fit).
    const bool planted_gone =
        std::find(result.outlier_indices.begin(), result.outlier_indices.end(), outlier) !=
        result.outlier_indices.end();
    CHECK(planted_gone);
    CHECK(result.outlier_indices.size() <= 2);
    CHECK(result.inlier_indices.size() >= 29);
    CHECK(result.iterations >= 1);
}

TEST_CASE("iterative_filter partitions the index set exactly")
{
    GprConfig hyper;
    std::vector<double> x, y;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (int i = 0; i < 50; ++i)
    {
        x.push_back(0.4 * i);
        y.push_back(3.5 + noise(rng) + ((i % 17 == 3) ? 1.5 : 0.0));
    }
    const FilterResult result = iterative_filter(x, y, hyper);
    std::vector<std::size_t> all = result.inlier_indices;
    all.insert(all.end(), result.outlier_indices.begin(), result.outlier_indices.end());
    std::sort(all.begin(), all.end());
    REQUIRE(all.size() == x.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        CHECK(all[i] == i);
    CHECK(result.iterations <= hyper.max_iterations);
}

TEST_CASE("iterative_filter small inputs pass through with a warning")
{
    GprConfig hyper;
    const FilterResult three = iterative_filter({0, 1, 2}, {0, 5, 0}, hyper);
    CHECK(three.warning_small_input);
    CHECK(three.inlier_indices.size() == 3);
    CHECK(three.outlier_indices.empty());

    const FilterResult none = iterative_filter({}, {}, hyper);
    CHECK(none.warning_small_input);
    CHECK(none.inlier_indices.empty());
}

TEST_CASE("iterative_filter is deterministic")
{
    GprConfig hyper;
    std::vector<double> x, y;
    std::mt19937_64 rng(23);
    std::normal_distribution<double> noise(0.0, 0.1);
    for (int i = 0; i < 60; ++i)
    {
        x.push_back(0.3 * i);
        y.push_back(noise(rng));
    }
    const FilterResult a = iterative_filter(x, y, hyper);
    const FilterResult b = iterative_filter(x, y, hyper);
    CHECK(a.inlier_indices == b.inlier_indices);
    CHECK(a.outlier_indices == b.outlier_indices);
    CHECK(a.iterations == b.iterations);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "locus/pathloss.hpp"

using namespace locus;

TEST_CASE("model validation") {
    CHECK_NOTHROW(validate_model({2.0, -40.0}));
    CHECK_LOCUS_ERROR(validate_model({0.0, -40.0}), invalid_model);
    CHECK_LOCUS_ERROR(validate_model({-1.5, -40.0}), invalid_model);
    CHECK_LOCUS_ERROR(validate_model({std::nan(""), -40.0}), invalid_model);
    CHECK_LOCUS_ERROR(validate_model({2.0, std::nan("")}), invalid_model);
}

TEST_CASE("prediction follows the log-distance curve") {
    const PathLossModel model{2.935, -50.33};
    // At one meter the prediction is the offset itself.
    CHECK(predict_rssi(model, 1.0) == model.offset);
    // Value pinned from an independent evaluation of the same formula.
    CHECK(predict_rssi(model, 4.0) == doctest::Approx(-68.00046074547569).epsilon(1e-12));
    // Doubling the distance always costs the same number of dB.
    const double drop1 = predict_rssi(model, 1.0) - predict_rssi(model, 2.0);
    const double drop2 = predict_rssi(model, 2.0) - predict_rssi(model, 4.0);
    CHECK(drop1 == doctest::Approx(drop2).epsilon(1e-12));

    CHECK_LOCUS_ERROR(predict_rssi(model, 0.0), non_positive_distance);
    CHECK_LOCUS_ERROR(predict_rssi(model, -2.0), non_positive_distance);
    CHECK_LOCUS_ERROR(predict_rssi(model, std::nan("")), non_positive_distance);
    CHECK_LOCUS_ERROR(predict_rssi({0.0, -40.0}, 1.0), invalid_model);
}

TEST_CASE("distance estimation inverts prediction") {
    const PathLossModel model{2.935, -50.33};
    for (double d : {0.5, 1.0, 2.5, 4.0, 10.0}) {
        const double rssi = predict_rssi(model, d);
        CHECK(estimate_distance(model, rssi) == doctest::Approx(d).epsilon(1e-12));
    }
    CHECK_LOCUS_ERROR(estimate_distance(model, 0.5), invalid_rssi);
    // A nearly flat model pushes the inversion past the double range.
    CHECK_LOCUS_ERROR(estimate_distance({1e-3, 0.0}, -120.0), model_out_of_range);
}

namespace {

std::vector<CalibrationSample> exact_samples(const PathLossModel& model,
                                             const std::vector<double>& distances) {
    std::vector<CalibrationSample> samples;
    for (double d : distances) {
        samples.push_back({d, predict_rssi(model, d)});
    }
    return samples;
}

} // namespace

TEST_CASE("fit recovers an exact model") {
    const PathLossModel truth{2.35, -47.2};
    const auto samples = exact_samples(truth, {0.7, 1.0, 2.0, 3.3, 5.0, 8.0});
    const PathLossFit fit = fit_path_loss(samples);
    CHECK(fit.model.exponent == doctest::Approx(truth.exponent).epsilon(1e-12));
    CHECK(fit.model.offset == doctest::Approx(truth.offset).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit result does not depend on sample order") {
    const PathLossModel truth{1.912, -52.73};
    auto samples = exact_samples(truth, {0.9, 1.4, 2.2, 3.1, 4.8, 7.5, 9.0});
    // Perturb the readings so the fit is not exact and rounding differences
    // would show.
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i].rssi += (i % 2 == 0 ? 0.37 : -0.53);
    }
    const PathLossFit reference = fit_path_loss(samples);

    std::mt19937 shuffler(7);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(samples.begin(), samples.end(), shuffler);
        const PathLossFit fit = fit_path_loss(samples);
        CHECK(fit.model.exponent == reference.model.exponent);
        CHECK(fit.model.offset == reference.model.offset);
        CHECK(fit.r_squared == reference.r_squared);
    }
}

TEST_CASE("fit failure modes") {
    const PathLossModel model{2.0, -40.0};
    CHECK_LOCUS_ERROR(fit_path_loss(exact_samples(model, {1.0, 2.0})), too_few_samples);
    CHECK_LOCUS_ERROR(fit_path_loss({{2.0, -50.0}, {2.0, -51.0}, {2.0, -49.0}}),
                      degenerate_geometry);
    CHECK_LOCUS_ERROR(fit_path_loss({{0.0, -50.0}, {1.0, -51.0}, {2.0, -49.0}}),
                      non_positive_distance);
    CHECK_LOCUS_ERROR(fit_path_loss({{1.0, 10.0}, {2.0, -51.0}, {4.0, -49.0}}), invalid_rssi);
    // Signal growing with distance has no physical exponent.
    CHECK_LOCUS_ERROR(fit_path_loss({{1.0, -70.0}, {2.0, -60.0}, {4.0, -50.0}}), invalid_model);
}

TEST_CASE("noisy fit reports imperfect goodness of fit") {
    const PathLossModel truth{2.935, -50.33};
    auto samples = exact_samples(truth, {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0});
    double flip = 1.0;
    for (auto& s : samples) {
        s.rssi += flip * 1.5;
        flip = -flip;
    }
    const PathLossFit fit = fit_path_loss(samples);
    CHECK(fit.r_squared < 1.0);
    CHECK(fit.r_squared > 0.5);
    CHECK(fit.model.exponent == doctest::Approx(truth.exponent).epsilon(0.25));
}

TEST_CASE("kalman parameter validation") {
    CHECK_NOTHROW(validate_kalman_params({0.008, 4.0, 1.0}));
    CHECK_LOCUS_ERROR(validate_kalman_params({0.0, 4.0, 1.0}), invalid_kalman_params);
    CHECK_LOCUS_ERROR(validate_kalman_params({0.008, -4.0, 1.0}), invalid_kalman_params);
    CHECK_LOCUS_ERROR(validate_kalman_params({0.008, 4.0, 0.0}), invalid_kalman_params);
    CHECK_LOCUS_ERROR(validate_kalman_params({std::nan(""), 4.0, 1.0}), invalid_kalman_params);
    CHECK_LOCUS_ERROR(KalmanFilter({0.0, 0.0, 0.0}), invalid_kalman_params);
}

TEST_CASE("kalman filter settles between the extremes of an alternating series") {
    // Readings flip between -50 and -60; the filter should converge near the
    // midpoint. Final value pinned from an independent run of the same
    // recurrence.
    std::vector<double> series;
    for (int i = 0; i < 20; ++i) {
        series.push_back(i % 2 == 0 ? -50.0 : -60.0);
    }
    const std::vector<double> smoothed = smooth_rssi(series, {0.008, 4.0, 1.0});
    REQUIRE(smoothed.size() == series.size());
    CHECK(smoothed.front() == -50.0);
    CHECK(smoothed.back() == doctest::Approx(-54.49616504892265).epsilon(1e-12));
    CHECK(std::abs(smoothed.back() - (-55.0)) < 1.0);
}

TEST_CASE("kalman filter basics") {
    KalmanFilter filter({0.008, 4.0, 1.0});
    CHECK_FALSE(filter.initialized());
    CHECK_LOCUS_ERROR(filter.estimate(), empty_series);
    CHECK(filter.update(-62.0) == -62.0);
    CHECK(filter.initialized());
    // A second, different reading moves the estimate toward it but not past.
    const double second = filter.update(-58.0);
    CHECK(second > -62.0);
    CHECK(second < -58.0);

    // A constant series stays put.
    KalmanFilter constant;
    for (int i = 0; i < 50; ++i) {
        CHECK(constant.update(-71.5) == -71.5);
    }

    CHECK_LOCUS_ERROR(smooth_rssi({}, {}), empty_series);
}

TEST_CASE("model set lookup with fallback") {
    ModelSet models;
    models.add("a1", {2.0, -40.0});
    CHECK(models.lookup("a1").exponent == 2.0);
    CHECK_FALSE(models.has_default());
    CHECK_LOCUS_ERROR(models.lookup("a2"), unknown_anchor);

    models.set_default({3.0, -45.0});
    CHECK(models.has_default());
    CHECK(models.lookup("a2").exponent == 3.0);
    CHECK(models.lookup("a1").exponent == 2.0);

    CHECK_LOCUS_ERROR(models.add("a1", {2.5, -41.0}), duplicate_anchor);
    CHECK_LOCUS_ERROR(models.set_default({2.5, -41.0}), duplicate_anchor);
    CHECK_LOCUS_ERROR(models.add("a3", {0.0, -41.0}), invalid_model);
}

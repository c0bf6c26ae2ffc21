#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "locus/core.hpp"

namespace locus {

// Log-distance propagation model: rssi(d) = -10 * exponent * log10(d) + offset,
// with d in meters and offset the expected rssi at d = 1 m.
struct PathLossModel {
    double exponent = 2.0;
    double offset = -50.0;
};

// Throws Error{invalid_model} unless exponent > 0 and both fields are finite.
void validate_model(const PathLossModel& model);

// Expected rssi at `distance_m` meters. The result is the raw model value
// and may fall outside the measurable range. Throws non_positive_distance
// for distances that are not finite and > 0.
double predict_rssi(const PathLossModel& model, double distance_m);

// Inverts the model: distance at which `rssi` is expected. Validates the
// reading and throws model_out_of_range if the inversion overflows.
double estimate_distance(const PathLossModel& model, Rssi rssi);

// One calibration observation at a known distance from the transmitter.
struct CalibrationSample {
    double distance_m = 0.0;
    Rssi rssi = 0.0;
};

struct PathLossFit {
    PathLossModel model;
    double r_squared = 0.0; // goodness of fit against the mean baseline
};

// Least-squares fit of the model over (log10 distance, rssi) pairs.
// Needs at least 3 samples with distinct distances. The fit is invariant
// to the ordering of `samples` (bit-exact). Throws too_few_samples,
// non_positive_distance, invalid_rssi, degenerate_geometry (all distances
// equal) or invalid_model (fitted exponent not positive).
PathLossFit fit_path_loss(const std::vector<CalibrationSample>& samples);

// Per-anchor calibration: each anchor may carry its own model, with an
// optional fallback used for anchors that have no entry of their own.
class ModelSet {
public:
    // Registers the model for one anchor. Throws duplicate_anchor when the
    // anchor already has one, plus the usual id/model validation errors.
    void add(const std::string& anchor_id, const PathLossModel& model);

    // Sets the fallback model. Throws duplicate_anchor if already set.
    void set_default(const PathLossModel& model);

    bool has_default() const { return default_.has_value(); }

    // Model for `anchor_id`, falling back to the default. Throws
    // Error{unknown_anchor} when neither exists.
    const PathLossModel& lookup(const std::string& anchor_id) const;

    const std::vector<std::pair<std::string, PathLossModel>>& entries() const { return entries_; }
    const std::optional<PathLossModel>& default_model() const { return default_; }

private:
    std::vector<std::pair<std::string, PathLossModel>> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    std::optional<PathLossModel> default_;
};

// Scalar constant-state Kalman filter tuning. q is process noise added per
// step, r the measurement noise, p0 the initial estimate covariance, all in
// dB^2.
struct KalmanParams {
    double q = 0.008;
    double r = 4.0;
    double p0 = 1.0;
};

// Throws Error{invalid_kalman_params} unless all fields are finite and > 0.
void validate_kalman_params(const KalmanParams& params);

// Streaming scalar Kalman filter over an rssi series. The first update
// initializes the estimate to the reading itself.
class KalmanFilter {
public:
    explicit KalmanFilter(const KalmanParams& params = {});

    // Feeds one reading, returns the updated estimate.
    double update(double reading);

    bool initialized() const { return initialized_; }

    // Current estimate. Throws Error{empty_series} before any update.
    double estimate() const;

private:
    KalmanParams params_;
    bool initialized_ = false;
    double estimate_ = 0.0;
    double covariance_ = 0.0;
};

// Runs the filter over a full series and returns the per-step estimates
// (same length as the input). Throws Error{empty_series} on empty input.
std::vector<double> smooth_rssi(const std::vector<double>& series,
                                const KalmanParams& params = {});

} // namespace locus

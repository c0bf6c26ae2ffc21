#include "locus/pathloss.hpp"

#include <algorithm>
#include <cmath>

namespace locus {

void validate_model(const PathLossModel& model) {
    if (!std::isfinite(model.exponent) || !std::isfinite(model.offset) || model.exponent <= 0.0) {
        throw Error(ErrorCode::invalid_model,
                    "path-loss model requires a finite positive exponent and finite offset");
    }
}

double predict_rssi(const PathLossModel& model, double distance_m) {
    validate_model(model);
    if (!std::isfinite(distance_m) || distance_m <= 0.0) {
        throw Error(ErrorCode::non_positive_distance,
                    "distance must be finite and positive, got " + std::to_string(distance_m));
    }
    return -10.0 * model.exponent * std::log10(distance_m) + model.offset;
}

double estimate_distance(const PathLossModel& model, Rssi rssi) {
    validate_model(model);
    validate_rssi(rssi);
    const double d = std::pow(10.0, (model.offset - rssi) / (10.0 * model.exponent));
    if (!std::isfinite(d) || d <= 0.0) {
        throw Error(ErrorCode::model_out_of_range, "distance inversion left the finite range");
    }
    return d;
}

PathLossFit fit_path_loss(const std::vector<CalibrationSample>& samples) {
    if (samples.size() < 3) {
        throw Error(ErrorCode::too_few_samples,
                    "path-loss fit needs at least 3 samples, got " + std::to_string(samples.size()));
    }
    for (const auto& s : samples) {
        if (!std::isfinite(s.distance_m) || s.distance_m <= 0.0) {
            throw Error(ErrorCode::non_positive_distance,
                        "calibration distance must be finite and positive");
        }
        validate_rssi(s.rssi);
    }

    // Sort a copy so the accumulation order, and therefore the result, does
    // not depend on the order the caller supplied the samples in.
    std::vector<CalibrationSample> sorted = samples;
    std::sort(sorted.begin(), sorted.end(), [](const CalibrationSample& a, const CalibrationSample& b) {
        if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
        return a.rssi < b.rssi;
    });

    const double n = static_cast<double>(sorted.size());
    double sum_t = 0.0;
    double sum_y = 0.0;
    for (const auto& s : sorted) {
        sum_t += std::log10(s.distance_m);
        sum_y += s.rssi;
    }
    const double mean_t = sum_t / n;
    const double mean_y = sum_y / n;

    double stt = 0.0;
    double sty = 0.0;
    for (const auto& s : sorted) {
        const double dt = std::log10(s.distance_m) - mean_t;
        const double dy = s.rssi - mean_y;
        stt += dt * dt;
        sty += dt * dy;
    }
    if (stt <= 0.0) {
        throw Error(ErrorCode::degenerate_geometry,
                    "calibration samples need at least two distinct distances");
    }

    const double slope = sty / stt;
    const double intercept = mean_y - slope * mean_t;

    PathLossFit fit;
    fit.model.exponent = -slope / 10.0;
    fit.model.offset = intercept;
    if (!std::isfinite(fit.model.exponent) || fit.model.exponent <= 0.0) {
        throw Error(ErrorCode::invalid_model,
                    "fitted exponent is not positive; signal does not decay with distance");
    }

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (const auto& s : sorted) {
        const double pred = slope * std::log10(s.distance_m) + intercept;
        const double res = s.rssi - pred;
        const double dev = s.rssi - mean_y;
        ss_res += res * res;
        ss_tot += dev * dev;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
    return fit;
}

void ModelSet::add(const std::string& anchor_id, const PathLossModel& model) {
    validate_anchor_id(anchor_id);
    validate_model(model);
    if (index_.count(anchor_id) != 0) {
        throw Error(ErrorCode::duplicate_anchor,
                    "model set already has an entry for anchor '" + anchor_id + "'");
    }
    index_.emplace(anchor_id, entries_.size());
    entries_.emplace_back(anchor_id, model);
}

void ModelSet::set_default(const PathLossModel& model) {
    validate_model(model);
    if (default_) {
        throw Error(ErrorCode::duplicate_anchor, "model set already has a default entry");
    }
    default_ = model;
}

const PathLossModel& ModelSet::lookup(const std::string& anchor_id) const {
    auto it = index_.find(anchor_id);
    if (it != index_.end()) {
        return entries_[it->second].second;
    }
    if (default_) {
        return *default_;
    }
    throw Error(ErrorCode::unknown_anchor,
                "no model for anchor '" + anchor_id + "' and no default model");
}

void validate_kalman_params(const KalmanParams& params) {
    const bool ok = std::isfinite(params.q) && params.q > 0.0 &&
                    std::isfinite(params.r) && params.r > 0.0 &&
                    std::isfinite(params.p0) && params.p0 > 0.0;
    if (!ok) {
        throw Error(ErrorCode::invalid_kalman_params,
                    "kalman q, r and p0 must all be finite and positive");
    }
}

KalmanFilter::KalmanFilter(const KalmanParams& params) : params_(params) {
    validate_kalman_params(params);
}

double KalmanFilter::update(double reading) {
    if (!initialized_) {
        estimate_ = reading;
        covariance_ = params_.p0;
        initialized_ = true;
        return estimate_;
    }
    covariance_ += params_.q;
    const double gain = covariance_ / (covariance_ + params_.r);
    estimate_ += gain * (reading - estimate_);
    covariance_ = (1.0 - gain) * covariance_;
    return estimate_;
}

double KalmanFilter::estimate() const {
    if (!initialized_) {
        throw Error(ErrorCode::empty_series, "kalman filter has seen no readings");
    }
    return estimate_;
}

std::vector<double> smooth_rssi(const std::vector<double>& series, const KalmanParams& params) {
    if (series.empty()) {
        throw Error(ErrorCode::empty_series, "cannot smooth an empty series");
    }
    KalmanFilter filter(params);
    std::vector<double> out;
    out.reserve(series.size());
    for (double reading : series) {
        out.push_back(filter.update(reading));
    }
    return out;
}

} // namespace locus

#include "locus/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace locus {

namespace {

void validate_stats(const std::string& anchor_id, const AnchorStats& stats) {
    validate_anchor_id(anchor_id);
    if (!is_valid_rssi(stats.mean)) {
        throw Error(ErrorCode::invalid_rssi,
                    "fingerprint mean for anchor '" + anchor_id + "' outside [-120, 0] dBm");
    }
    if (!std::isfinite(stats.variance) || stats.variance < 0.0) {
        throw Error(ErrorCode::invalid_rssi,
                    "fingerprint variance for anchor '" + anchor_id + "' must be finite and >= 0");
    }
    if (stats.count == 0) {
        throw Error(ErrorCode::empty_sequence,
                    "fingerprint entry for anchor '" + anchor_id + "' has zero samples");
    }
}

} // namespace

void FingerprintDatabase::add(const Fingerprint& fingerprint) {
    validate_position(fingerprint.position);
    for (const auto& [id, stats] : fingerprint.stats) {
        validate_stats(id, stats);
    }
    const std::pair<double, double> key{fingerprint.position.x, fingerprint.position.y};
    if (position_index_.count(key) != 0) {
        throw Error(ErrorCode::duplicate_position,
                    "fingerprint at (" + std::to_string(fingerprint.position.x) + ", " +
                        std::to_string(fingerprint.position.y) + ") already present");
    }
    position_index_.emplace(key, fingerprints_.size());
    fingerprints_.push_back(fingerprint);
}

std::vector<std::string> FingerprintDatabase::anchor_ids() const {
    std::set<std::string> ids;
    for (const auto& fp : fingerprints_) {
        for (const auto& [id, stats] : fp.stats) {
            ids.insert(id);
        }
    }
    return {ids.begin(), ids.end()};
}

FingerprintDatabase build_database(const std::vector<SurveySample>& samples) {
    if (samples.empty()) {
        throw Error(ErrorCode::empty_survey, "survey has no samples");
    }

    std::vector<Position> order;
    std::map<std::pair<double, double>, std::map<std::string, std::vector<double>>> groups;
    for (const auto& s : samples) {
        validate_position(s.position);
        validate_anchor_id(s.anchor_id);
        validate_rssi(s.rssi);
        const std::pair<double, double> key{s.position.x, s.position.y};
        auto it = groups.find(key);
        if (it == groups.end()) {
            order.push_back(s.position);
            it = groups.emplace(key, std::map<std::string, std::vector<double>>{}).first;
        }
        it->second[s.anchor_id].push_back(s.rssi);
    }

    FingerprintDatabase db;
    for (const auto& pos : order) {
        const auto& by_anchor = groups.at({pos.x, pos.y});
        Fingerprint fp;
        fp.position = pos;
        for (const auto& [id, values] : by_anchor) {
            AnchorStats stats;
            stats.mean = mean(values);
            stats.variance = variance(values);
            stats.count = values.size();
            fp.stats.emplace(id, stats);
        }
        db.add(fp);
    }
    return db;
}

Position locate_knn(const FingerprintDatabase& db, const RssiScan& scan, int k) {
    if (k < 1) {
        throw Error(ErrorCode::invalid_knn_config, "k must be >= 1, got " + std::to_string(k));
    }
    if (db.empty()) {
        throw Error(ErrorCode::empty_survey, "fingerprint database is empty");
    }

    struct Candidate {
        double distance;
        std::size_t index;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(db.size());
    for (std::size_t i = 0; i < db.size(); ++i) {
        const Fingerprint& fp = db.at(i);
        double sum = 0.0;
        std::size_t common = 0;
        for (const auto& [id, rssi] : scan.entries()) {
            auto it = fp.stats.find(id);
            if (it == fp.stats.end()) continue;
            const double d = rssi - it->second.mean;
            sum += d * d;
            ++common;
        }
        if (common == 0) continue;
        candidates.push_back({std::sqrt(sum), i});
    }
    if (candidates.empty()) {
        throw Error(ErrorCode::no_common_anchors,
                    "scan shares no anchors with any fingerprint");
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());

    Position out{0.0, 0.0};
    for (std::size_t i = 0; i < take; ++i) {
        const Position& p = db.at(candidates[i].index).position;
        out.x += p.x;
        out.y += p.y;
    }
    out.x /= static_cast<double>(take);
    out.y /= static_cast<double>(take);
    return out;
}

BayesResult bayes_posteriors(const FingerprintDatabase& db, const RssiScan& scan) {
    if (db.empty()) {
        throw Error(ErrorCode::empty_survey, "fingerprint database is empty");
    }

    BayesResult result;
    result.scores.assign(db.size(), 0.0);

    for (const auto& [anchor_id, reading] : scan.entries()) {
        // Log-likelihood per fingerprint that knows this anchor; the uniform
        // prior cancels in the normalization.
        std::vector<double> loglik(db.size(), -std::numeric_limits<double>::infinity());
        bool any = false;
        double max_ll = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < db.size(); ++i) {
            auto it = db.at(i).stats.find(anchor_id);
            if (it == db.at(i).stats.end()) continue;
            const double var = std::max(it->second.variance, kBayesVarianceFloor);
            const double diff = reading - it->second.mean;
            const double ll = -0.5 * std::log(2.0 * M_PI * var) - diff * diff / (2.0 * var);
            loglik[i] = ll;
            max_ll = std::max(max_ll, ll);
            any = true;
        }
        if (!any) continue;

        double denom = 0.0;
        for (std::size_t i = 0; i < db.size(); ++i) {
            if (std::isinf(loglik[i])) continue;
            denom += std::exp(loglik[i] - max_ll);
        }

        std::vector<double> posterior(db.size(), 0.0);
        for (std::size_t i = 0; i < db.size(); ++i) {
            if (std::isinf(loglik[i])) continue;
            posterior[i] = std::exp(loglik[i] - max_ll) / denom;
        }
        result.anchors_used.push_back(anchor_id);
        result.posteriors.push_back(std::move(posterior));
    }

    if (result.anchors_used.empty()) {
        throw Error(ErrorCode::no_common_anchors,
                    "scan shares no anchors with any fingerprint");
    }

    const double n_anchors = static_cast<double>(result.anchors_used.size());
    for (const auto& row : result.posteriors) {
        for (std::size_t i = 0; i < db.size(); ++i) {
            result.scores[i] += row[i];
        }
    }
    for (double& s : result.scores) s /= n_anchors;

    result.best_index = 0;
    for (std::size_t i = 1; i < db.size(); ++i) {
        if (result.scores[i] > result.scores[result.best_index]) {
            result.best_index = i;
        }
    }
    return result;
}

Position locate_bayes(const FingerprintDatabase& db, const RssiScan& scan) {
    return db.at(bayes_posteriors(db, scan).best_index).position;
}

} // namespace locus

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "locus/core.hpp"

namespace locus {

// Signal statistics for one anchor at one surveyed position.
struct AnchorStats {
    double mean = 0.0;     // dBm
    double variance = 0.0; // dB^2, population variance of the survey readings
    std::uint64_t count = 0;
};

// One surveyed position with per-anchor statistics, keyed and iterated in
// anchor-id order.
struct Fingerprint {
    Position position;
    std::map<std::string, AnchorStats> stats;
};

// Ordered list of fingerprints at distinct positions.
class FingerprintDatabase {
public:
    // Throws duplicate_position when the exact same coordinates were already
    // added, plus validation errors for the position and stats.
    void add(const Fingerprint& fingerprint);

    std::size_t size() const { return fingerprints_.size(); }
    bool empty() const { return fingerprints_.empty(); }
    const Fingerprint& at(std::size_t index) const { return fingerprints_.at(index); }

    std::vector<Fingerprint>::const_iterator begin() const { return fingerprints_.begin(); }
    std::vector<Fingerprint>::const_iterator end() const { return fingerprints_.end(); }

    // Sorted union of all anchor ids appearing in any fingerprint.
    std::vector<std::string> anchor_ids() const;

private:
    std::vector<Fingerprint> fingerprints_;
    std::map<std::pair<double, double>, std::size_t> position_index_;
};

// One raw survey reading tagged with the position it was taken at.
struct SurveySample {
    Position position;
    std::string anchor_id;
    Rssi rssi = kRssiMin;
};

// Groups samples by exact position (first-appearance order) and anchor,
// reducing each group to mean / population variance / count. Throws
// Error{empty_survey} when `samples` is empty.
FingerprintDatabase build_database(const std::vector<SurveySample>& samples);

// Nearest-neighbour match in signal space: fingerprints are ranked by the
// Euclidean distance between the scan and the stored means over the anchors
// they share, and the positions of the k best are averaged (unweighted).
// Fingerprints sharing no anchor with the scan are skipped; if none share
// any, throws no_common_anchors. k < 1 throws invalid_knn_config; k larger
// than the candidate count uses all candidates. Ties in distance keep
// database order.
Position locate_knn(const FingerprintDatabase& db, const RssiScan& scan, int k = 4);

// Probabilistic match detail. For each scan anchor known to the database
// there is one posterior row over the fingerprints (entries for
// fingerprints lacking that anchor are 0, each row sums to 1); `scores` is
// the per-fingerprint mean over those rows and `best_index` its argmax
// (first index on ties).
struct BayesResult {
    std::vector<std::string> anchors_used;       // scan order
    std::vector<std::vector<double>> posteriors; // [anchor][fingerprint]
    std::vector<double> scores;                  // [fingerprint]
    std::size_t best_index = 0;
};

// Gaussian likelihoods per anchor with a 1 dB^2 variance floor and a
// uniform prior over fingerprints. Throws empty_survey on an empty
// database and no_common_anchors when the scan shares no anchor with it.
BayesResult bayes_posteriors(const FingerprintDatabase& db, const RssiScan& scan);

// Position of the highest-scoring fingerprint under bayes_posteriors.
Position locate_bayes(const FingerprintDatabase& db, const RssiScan& scan);

// Variance floor applied before evaluating Gaussian likelihoods, in dB^2.
inline constexpr double kBayesVarianceFloor = 1.0;

} // namespace locus

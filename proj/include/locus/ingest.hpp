#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "locus/core.hpp"
#include "locus/fingerprint.hpp"

namespace locus {

// One row of a scan stream: a sequence number, the anchor heard, the
// reading, optionally the surveyed position, and the radio label.
struct ScanRecord {
    std::int64_t seq = 0;
    std::string anchor_id;
    Rssi rssi = kRssiMin;
    bool has_position = false;
    Position position;
    std::string tech;
};

// Trailing moving average: out[i] is the mean of the last `window` values
// ending at i (fewer at the start of the series). window must be >= 1
// (config_invalid); an empty series throws empty_series. A window of 1
// returns the input unchanged.
std::vector<double> moving_average(const std::vector<double>& series, int window);

// Readings for one anchor at one surveyed position, ordered by seq (file
// order breaks ties).
struct SurveySeries {
    Position position;
    std::vector<std::pair<std::string, std::vector<double>>> by_anchor; // first-appearance order
};

// Groups a survey stream by exact position, then by anchor. Every record
// must carry a position (missing_position_label). Positions appear in the
// order the stream first mentions them.
std::vector<SurveySeries> group_survey(const std::vector<ScanRecord>& records);

// Smooths every per-anchor series with moving_average(window) and flattens
// the smoothed values into samples for build_database.
std::vector<SurveySample> smoothed_samples(const std::vector<SurveySeries>& groups, int window);

// How a reading series collapses to the single value used for a live fix.
enum class Reduce {
    final_value, // last output of moving_average(window), the settled estimate
    mean_value,  // plain mean of the raw series (window is not applied)
};

// Collapses a (position-free) scan stream to one reading per anchor: group
// by anchor, order by seq, then reduce each series per `mode`. Throws
// empty_sequence when `records` is empty.
RssiScan reduce_stream(const std::vector<ScanRecord>& records, int window, Reduce mode);

} // namespace locus

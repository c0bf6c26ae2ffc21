#include "locus/ingest.hpp"

#include <algorithm>
#include <map>

namespace locus {

std::vector<double> moving_average(const std::vector<double>& series, int window) {
    if (window < 1) {
        throw Error(ErrorCode::config_invalid,
                    "moving-average window must be >= 1, got " + std::to_string(window));
    }
    if (series.empty()) {
        throw Error(ErrorCode::empty_series, "cannot average an empty series");
    }
    std::vector<double> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t lo = i + 1 >= static_cast<std::size_t>(window)
                                   ? i + 1 - static_cast<std::size_t>(window)
                                   : 0;
        double sum = 0.0;
        for (std::size_t j = lo; j <= i; ++j) sum += series[j];
        out.push_back(sum / static_cast<double>(i + 1 - lo));
    }
    return out;
}

namespace {

// Stable ordering of a group's records by seq; ties keep stream order.
std::vector<ScanRecord> sorted_by_seq(std::vector<ScanRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const ScanRecord& a, const ScanRecord& b) { return a.seq < b.seq; });
    return records;
}

} // namespace

std::vector<SurveySeries> group_survey(const std::vector<ScanRecord>& records) {
    std::vector<SurveySeries> groups;
    std::map<std::pair<double, double>, std::size_t> group_index;

    for (const ScanRecord& rec : sorted_by_seq(records)) {
        if (!rec.has_position) {
            throw Error(ErrorCode::missing_position_label,
                        "survey record (anchor '" + rec.anchor_id + "', seq " +
                            std::to_string(rec.seq) + ") carries no position");
        }
        validate_position(rec.position);
        validate_anchor_id(rec.anchor_id);
        validate_rssi(rec.rssi);

        const std::pair<double, double> key{rec.position.x, rec.position.y};
        auto it = group_index.find(key);
        if (it == group_index.end()) {
            it = group_index.emplace(key, groups.size()).first;
            groups.push_back({rec.position, {}});
        }
        SurveySeries& group = groups[it->second];
        auto series = std::find_if(group.by_anchor.begin(), group.by_anchor.end(),
                                   [&](const auto& entry) { return entry.first == rec.anchor_id; });
        if (series == group.by_anchor.end()) {
            group.by_anchor.emplace_back(rec.anchor_id, std::vector<double>{});
            series = std::prev(group.by_anchor.end());
        }
        series->second.push_back(rec.rssi);
    }
    return groups;
}

std::vector<SurveySample> smoothed_samples(const std::vector<SurveySeries>& groups, int window) {
    std::vector<SurveySample> samples;
    for (const SurveySeries& group : groups) {
        for (const auto& [anchor_id, series] : group.by_anchor) {
            for (double value : moving_average(series, window)) {
                samples.push_back({group.position, anchor_id, value});
            }
        }
    }
    return samples;
}

RssiScan reduce_stream(const std::vector<ScanRecord>& records, int window, Reduce mode) {
    if (records.empty()) {
        throw Error(ErrorCode::empty_sequence, "scan stream has no records");
    }

    std::vector<std::pair<std::string, std::vector<double>>> by_anchor;
    for (const ScanRecord& rec : sorted_by_seq(records)) {
        validate_anchor_id(rec.anchor_id);
        validate_rssi(rec.rssi);
        auto it = std::find_if(by_anchor.begin(), by_anchor.end(),
                               [&](const auto& entry) { return entry.first == rec.anchor_id; });
        if (it == by_anchor.end()) {
            by_anchor.emplace_back(rec.anchor_id, std::vector<double>{});
            it = std::prev(by_anchor.end());
        }
        it->second.push_back(rec.rssi);
    }

    RssiScan scan;
    for (const auto& [anchor_id, series] : by_anchor) {
        double value = 0.0;
        switch (mode) {
        case Reduce::final_value:
            value = moving_average(series, window).back();
            break;
        case Reduce::mean_value:
            value = mean(series);
            break;
        }
        scan.add(anchor_id, value);
    }
    return scan;
}

} // namespace locus

#include "locus/core.hpp"

#include <algorithm>
#include <cmath>

namespace locus {

bool is_valid_rssi(Rssi value) {
    return std::isfinite(value) && value >= kRssiMin && value <= kRssiMax;
}

void validate_rssi(Rssi value) {
    if (!is_valid_rssi(value)) {
        throw Error(ErrorCode::invalid_rssi,
                    "rssi reading " + std::to_string(value) + " outside [-120, 0] dBm");
    }
}

void validate_position(const Position& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error(ErrorCode::invalid_position, "position coordinates must be finite");
    }
}

double euclidean_distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

void validate_anchor_id(const std::string& id) {
    if (id.empty()) {
        throw Error(ErrorCode::invalid_anchor_id, "anchor id must not be empty");
    }
    for (char c : id) {
        if (c == ',' || c == ':' || c == '\n' || c == '\r' || c == ' ' || c == '\t') {
            throw Error(ErrorCode::invalid_anchor_id,
                        "anchor id '" + id + "' contains a delimiter character");
        }
    }
}

void AnchorSet::add(const Anchor& anchor) {
    validate_anchor_id(anchor.id);
    validate_position(anchor.position);
    if (index_.count(anchor.id) != 0) {
        throw Error(ErrorCode::duplicate_anchor, "anchor '" + anchor.id + "' already present");
    }
    index_.emplace(anchor.id, anchors_.size());
    anchors_.push_back(anchor);
}

bool AnchorSet::contains(const std::string& id) const {
    return index_.count(id) != 0;
}

const Anchor& AnchorSet::get(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw Error(ErrorCode::unknown_anchor, "anchor '" + id + "' not in set");
    }
    return anchors_[it->second];
}

void RssiScan::add(const std::string& anchor_id, Rssi value) {
    validate_anchor_id(anchor_id);
    validate_rssi(value);
    if (index_.count(anchor_id) != 0) {
        throw Error(ErrorCode::duplicate_scan_entry,
                    "scan already holds a reading for anchor '" + anchor_id + "'");
    }
    index_.emplace(anchor_id, entries_.size());
    entries_.emplace_back(anchor_id, value);
}

bool RssiScan::contains(const std::string& anchor_id) const {
    return index_.count(anchor_id) != 0;
}

Rssi RssiScan::get(const std::string& anchor_id) const {
    auto it = index_.find(anchor_id);
    if (it == index_.end()) {
        throw Error(ErrorCode::unknown_anchor, "no reading for anchor '" + anchor_id + "'");
    }
    return entries_[it->second].second;
}

double mean(const std::vector<double>& values) {
    if (values.empty()) {
        throw Error(ErrorCode::empty_sequence, "mean of empty sequence");
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double variance(const std::vector<double>& values) {
    if (values.empty()) {
        throw Error(ErrorCode::empty_sequence, "variance of empty sequence");
    }
    const double m = mean(values);
    double sum = 0.0;
    for (double v : values) {
        const double d = v - m;
        sum += d * d;
    }
    return sum / static_cast<double>(values.size());
}

} // namespace locus

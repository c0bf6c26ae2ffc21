#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "locus/error.hpp"

namespace locus {

// Received signal strength in dBm. Valid readings are finite and lie in
// [kRssiMin, kRssiMax]; anything else is rejected at the API boundary.
using Rssi = double;

inline constexpr Rssi kRssiMin = -120.0;
inline constexpr Rssi kRssiMax = 0.0;

// True when `value` is a finite dBm reading within the accepted range.
bool is_valid_rssi(Rssi value);

// Throws Error{invalid_rssi} unless is_valid_rssi(value).
void validate_rssi(Rssi value);

// A point on the floor plan, in meters.
struct Position {
    double x = 0.0;
    double y = 0.0;
};

// Throws Error{invalid_position} if either coordinate is not finite.
void validate_position(const Position& p);

// Straight-line distance between two positions, in meters.
double euclidean_distance(const Position& a, const Position& b);

// A fixed transmitter with a known position.
struct Anchor {
    std::string id;
    Position position;
};

// Throws Error{invalid_anchor_id} for ids that are empty or contain
// characters used as field delimiters in the on-disk formats.
void validate_anchor_id(const std::string& id);

// Ordered collection of anchors with unique ids. Iteration order is
// insertion order.
class AnchorSet {
public:
    // Throws duplicate_anchor / invalid_anchor_id / invalid_position.
    void add(const Anchor& anchor);

    bool contains(const std::string& id) const;

    // Throws Error{unknown_anchor} when the id is absent.
    const Anchor& get(const std::string& id) const;

    std::size_t size() const { return anchors_.size(); }
    bool empty() const { return anchors_.empty(); }
    const Anchor& at(std::size_t index) const { return anchors_.at(index); }

    std::vector<Anchor>::const_iterator begin() const { return anchors_.begin(); }
    std::vector<Anchor>::const_iterator end() const { return anchors_.end(); }

private:
    std::vector<Anchor> anchors_;
    std::unordered_map<std::string, std::size_t> index_;
};

// One observation: at most one reading per anchor, entries kept in the
// order they were added.
class RssiScan {
public:
    // Throws duplicate_scan_entry / invalid_anchor_id / invalid_rssi.
    void add(const std::string& anchor_id, Rssi value);

    bool contains(const std::string& anchor_id) const;

    // Throws Error{unknown_anchor} when the anchor is absent.
    Rssi get(const std::string& anchor_id) const;

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    const std::vector<std::pair<std::string, Rssi>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, Rssi>> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Arithmetic mean. Throws Error{empty_sequence} on an empty input.
double mean(const std::vector<double>& values);

// Population variance (divides by N). Throws Error{empty_sequence} on an
// empty input.
double variance(const std::vector<double>& values);

} // namespace locus

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace locus {

// Every failure the library can signal. Codes are stable identifiers so
// callers can branch on them instead of parsing message text.
enum class ErrorCode {
    invalid_rssi,
    too_few_samples,
    non_positive_distance,
    model_out_of_range,
    invalid_model,
    empty_sequence,
    too_few_anchors,
    degenerate_geometry,
    duplicate_position,
    empty_survey,
    no_common_anchors,
    insufficient_matches,
    invalid_knn_config,
    empty_list,
    invalid_quantile,
    empty_test_set,
    config_invalid,
    malformed_row,
    missing_position_label,
    empty_series,
    io_error,
    duplicate_anchor,
    unknown_anchor,
    empty_anchor_set,
    duplicate_scan_entry,
    invalid_position,
    invalid_anchor_id,
    invalid_kalman_params,
};

// Short stable name for a code, e.g. "invalid_rssi".
const char* error_code_name(ErrorCode code);

// Library-wide exception. Carries a code, a human-readable message and,
// for file parsing failures, the 1-based line number.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    Error(ErrorCode code, const std::string& message, int line);

    ErrorCode code() const { return code_; }
    std::optional<int> line() const { return line_; }

private:
    ErrorCode code_;
    std::optional<int> line_;
};

} // namespace locus

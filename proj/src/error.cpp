#include "locus/error.hpp"

namespace locus {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_rssi: return "invalid_rssi";
    case ErrorCode::too_few_samples: return "too_few_samples";
    case ErrorCode::non_positive_distance: return "non_positive_distance";
    case ErrorCode::model_out_of_range: return "model_out_of_range";
    case ErrorCode::invalid_model: return "invalid_model";
    case ErrorCode::empty_sequence: return "empty_sequence";
    case ErrorCode::too_few_anchors: return "too_few_anchors";
    case ErrorCode::degenerate_geometry: return "degenerate_geometry";
    case ErrorCode::duplicate_position: return "duplicate_position";
    case ErrorCode::empty_survey: return "empty_survey";
    case ErrorCode::no_common_anchors: return "no_common_anchors";
    case ErrorCode::insufficient_matches: return "insufficient_matches";
    case ErrorCode::invalid_knn_config: return "invalid_knn_config";
    case ErrorCode::empty_list: return "empty_list";
    case ErrorCode::invalid_quantile: return "invalid_quantile";
    case ErrorCode::empty_test_set: return "empty_test_set";
    case ErrorCode::config_invalid: return "config_invalid";
    case ErrorCode::malformed_row: return "malformed_row";
    case ErrorCode::missing_position_label: return "missing_position_label";
    case ErrorCode::empty_series: return "empty_series";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::duplicate_anchor: return "duplicate_anchor";
    case ErrorCode::unknown_anchor: return "unknown_anchor";
    case ErrorCode::empty_anchor_set: return "empty_anchor_set";
    case ErrorCode::duplicate_scan_entry: return "duplicate_scan_entry";
    case ErrorCode::invalid_position: return "invalid_position";
    case ErrorCode::invalid_anchor_id: return "invalid_anchor_id";
    case ErrorCode::invalid_kalman_params: return "invalid_kalman_params";
    }
    return "unknown";
}

namespace {

std::string format_what(ErrorCode code, const std::string& message, std::optional<int> line) {
    std::string out = error_code_name(code);
    out += ": ";
    out += message;
    if (line) {
        out += " (line ";
        out += std::to_string(*line);
        out += ")";
    }
    return out;
}

} // namespace

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(format_what(code, message, std::nullopt)), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(format_what(code, message, line)), code_(code), line_(line) {}

} // namespace locus

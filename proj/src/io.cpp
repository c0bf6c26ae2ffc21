#include "locus/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace locus::io {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::string format_count(std::uint64_t value) {
    return std::to_string(value);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == delim) {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

double parse_double_field(const std::string& field, const char* what, int line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw Error(ErrorCode::malformed_row,
                    std::string("expected a number for ") + what + ", got '" + field + "'", line);
    }
    return value;
}

template <typename Int>
Int parse_int_field(const std::string& field, const char* what, int line) {
    Int value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw Error(ErrorCode::malformed_row,
                    std::string("expected an integer for ") + what + ", got '" + field + "'", line);
    }
    return value;
}

void check_rssi_field(double value, int line) {
    if (!is_valid_rssi(value)) {
        throw Error(ErrorCode::invalid_rssi,
                    "rssi " + format_double(value) + " outside [-120, 0] dBm", line);
    }
}

void check_anchor_id_field(const std::string& id, int line) {
    if (id.empty()) {
        throw Error(ErrorCode::invalid_anchor_id, "anchor id must not be empty", line);
    }
    if (id.find_first_of(",: \t\r\n") != std::string::npos) {
        throw Error(ErrorCode::invalid_anchor_id,
                    "anchor id '" + id + "' contains a delimiter character", line);
    }
}

void check_position_field(double x, double y, int line) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw Error(ErrorCode::invalid_position, "position coordinates must be finite", line);
    }
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io_error, "cannot open '" + path + "' for reading");
    }
    return in;
}

class FileWriter {
public:
    explicit FileWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) {
            throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
        }
    }

    void line(const std::string& text) { out_ << text << '\n'; }

    void finish() {
        out_.flush();
        if (!out_) {
            throw Error(ErrorCode::io_error, "failed while writing '" + path_ + "'");
        }
    }

private:
    std::string path_;
    std::ofstream out_;
};

// Reads logical lines, dropping a trailing '\r' so CRLF input parses too.
bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

void require_header(std::istream& in, const std::string& expected, const std::string& path) {
    std::string line;
    if (!read_line(in, line) || line != expected) {
        throw Error(ErrorCode::malformed_row,
                    "'" + path + "' must start with header '" + expected + "'", 1);
    }
}

constexpr const char* kDbSignature = "rssi-locus-db v1";
constexpr const char* kScanHeader = "seq,anchor_id,rssi_dbm,x_m,y_m,tech";
constexpr const char* kCalibrationHeader = "distance_m,rssi_dbm";
constexpr const char* kAnchorsHeader = "anchor_id,x_m,y_m";
constexpr const char* kModelsHeader = "anchor_id,n,c";
constexpr const char* kSummaryHeader = "technique,mean_m,variance_m2,p50,p95,n_excluded";
constexpr const char* kErrorsHeader = "technique,test_index,error_m";
constexpr const char* kCdfHeader = "technique,error_m,cum_fraction";

} // namespace

void save_database(const FingerprintDatabase& db, const std::string& path) {
    FileWriter out(path);
    out.line(kDbSignature);
    for (const Fingerprint& fp : db) {
        std::string line = format_double(fp.position.x) + "," + format_double(fp.position.y);
        for (const auto& [id, stats] : fp.stats) {
            line += "," + id + ":" + format_double(stats.mean) + ":" +
                    format_double(stats.variance) + ":" + format_count(stats.count);
        }
        out.line(line);
    }
    out.finish();
}

FingerprintDatabase load_database(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::string line;
    if (!read_line(in, line) || line != kDbSignature) {
        throw Error(ErrorCode::malformed_row,
                    "'" + path + "' must start with signature '" + std::string(kDbSignature) + "'",
                    1);
    }

    FingerprintDatabase db;
    int line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() < 3) {
            throw Error(ErrorCode::malformed_row,
                        "fingerprint line needs x, y and at least one anchor entry", line_no);
        }
        Fingerprint fp;
        fp.position.x = parse_double_field(fields[0], "x", line_no);
        fp.position.y = parse_double_field(fields[1], "y", line_no);
        check_position_field(fp.position.x, fp.position.y, line_no);
        for (std::size_t i = 2; i < fields.size(); ++i) {
            const std::vector<std::string> parts = split(fields[i], ':');
            if (parts.size() != 4) {
                throw Error(ErrorCode::malformed_row,
                            "anchor entry must be id:mean:variance:count, got '" + fields[i] + "'",
                            line_no);
            }
            check_anchor_id_field(parts[0], line_no);
            AnchorStats stats;
            stats.mean = parse_double_field(parts[1], "mean", line_no);
            stats.variance = parse_double_field(parts[2], "variance", line_no);
            stats.count = parse_int_field<std::uint64_t>(parts[3], "count", line_no);
            check_rssi_field(stats.mean, line_no);
            if (!std::isfinite(stats.variance) || stats.variance < 0.0) {
                throw Error(ErrorCode::malformed_row,
                            "variance must be finite and >= 0, got '" + parts[2] + "'", line_no);
            }
            if (stats.count == 0) {
                throw Error(ErrorCode::malformed_row, "count must be >= 1", line_no);
            }
            if (!fp.stats.emplace(parts[0], stats).second) {
                throw Error(ErrorCode::duplicate_anchor,
                            "anchor '" + parts[0] + "' listed twice in one fingerprint", line_no);
            }
        }
        db.add(fp);
    }
    if (db.empty()) {
        throw Error(ErrorCode::empty_survey, "'" + path + "' holds no fingerprints");
    }
    return db;
}

void save_scan_csv(const std::vector<ScanRecord>& records, const std::string& path) {
    FileWriter out(path);
    out.line(kScanHeader);
    for (const ScanRecord& rec : records) {
        std::string line = std::to_string(rec.seq) + "," + rec.anchor_id + "," +
                           format_double(rec.rssi) + ",";
        if (rec.has_position) {
            line += format_double(rec.position.x) + "," + format_double(rec.position.y);
        } else {
            line += ",";
        }
        line += "," + rec.tech;
        out.line(line);
    }
    out.finish();
}

std::vector<ScanRecord> load_scan_csv(const std::string& path) {
    std::ifstream in = open_for_read(path);
    require_header(in, kScanHeader, path);

    std::vector<ScanRecord> records;
    std::string line;
    int line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 6) {
            throw Error(ErrorCode::malformed_row,
                        "scan row needs 6 fields, got " + std::to_string(fields.size()), line_no);
        }
        ScanRecord rec;
        rec.seq = parse_int_field<std::int64_t>(fields[0], "seq", line_no);
        check_anchor_id_field(fields[1], line_no);
        rec.anchor_id = fields[1];
        rec.rssi = parse_double_field(fields[2], "rssi_dbm", line_no);
        check_rssi_field(rec.rssi, line_no);
        const bool has_x = !fields[3].empty();
        const bool has_y = !fields[4].empty();
        if (has_x != has_y) {
            throw Error(ErrorCode::malformed_row,
                        "x_m and y_m must be both present or both empty", line_no);
        }
        rec.has_position = has_x;
        if (rec.has_position) {
            rec.position.x = parse_double_field(fields[3], "x_m", line_no);
            rec.position.y = parse_double_field(fields[4], "y_m", line_no);
            check_position_field(rec.position.x, rec.position.y, line_no);
        }
        rec.tech = fields[5];
        records.push_back(std::move(rec));
    }
    return records;
}

void save_calibration_csv(const std::vector<CalibrationSample>& samples, const std::string& path) {
    FileWriter out(path);
    out.line(kCalibrationHeader);
    for (const CalibrationSample& s : samples) {
        out.line(format_double(s.distance_m) + "," + format_double(s.rssi));
    }
    out.finish();
}

std::vector<CalibrationSample> load_calibration_csv(const std::string& path) {
    std::ifstream in = open_for_read(path);
    require_header(in, kCalibrationHeader, path);

    std::vector<CalibrationSample> samples;
    std::string line;
    int line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 2) {
            throw Error(ErrorCode::malformed_row,
                        "calibration row needs 2 fields, got " + std::to_string(fields.size()),
                        line_no);
        }
        CalibrationSample s;
        s.distance_m = parse_double_field(fields[0], "distance_m", line_no);
        if (!std::isfinite(s.distance_m) || s.distance_m <= 0.0) {
            throw Error(ErrorCode::non_positive_distance,
                        "distance must be finite and positive, got '" + fields[0] + "'", line_no);
        }
        s.rssi = parse_double_field(fields[1], "rssi_dbm", line_no);
        check_rssi_field(s.rssi, line_no);
        samples.push_back(s);
    }
    return samples;
}

void save_anchors_csv(const AnchorSet& anchors, const std::string& path) {
    FileWriter out(path);
    out.line(kAnchorsHeader);
    for (const Anchor& anchor : anchors) {
        out.line(anchor.id + "," + format_double(anchor.position.x) + "," +
                 format_double(anchor.position.y));
    }
    out.finish();
}

AnchorSet load_anchors_csv(const std::string& path) {
    std::ifstream in = open_for_read(path);
    require_header(in, kAnchorsHeader, path);

    AnchorSet anchors;
    std::string line;
    int line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 3) {
            throw Error(ErrorCode::malformed_row,
                        "anchor row needs 3 fields, got " + std::to_string(fields.size()), line_no);
        }
        check_anchor_id_field(fields[0], line_no);
        Anchor anchor;
        anchor.id = fields[0];
        anchor.position.x = parse_double_field(fields[1], "x_m", line_no);
        anchor.position.y = parse_double_field(fields[2], "y_m", line_no);
        check_position_field(anchor.position.x, anchor.position.y, line_no);
        if (anchors.contains(anchor.id)) {
            throw Error(ErrorCode::duplicate_anchor,
                        "anchor '" + anchor.id + "' listed twice", line_no);
        }
        anchors.add(anchor);
    }
    return anchors;
}

void save_models_csv(const ModelSet& models, const std::string& path) {
    FileWriter out(path);
    out.line(kModelsHeader);
    for (const auto& [id, model] : models.entries()) {
        out.line(id + "," + format_double(model.exponent) + "," + format_double(model.offset));
    }
    if (models.default_model()) {
        out.line("*," + format_double(models.default_model()->exponent) + "," +
                 format_double(models.default_model()->offset));
    }
    out.finish();
}

ModelSet load_models_csv(const std::string& path) {
    std::ifstream in = open_for_read(path);
    require_header(in, kModelsHeader, path);

    ModelSet models;
    std::string line;
    int line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 3) {
            throw Error(ErrorCode::malformed_row,
                        "model row needs 3 fields, got " + std::to_string(fields.size()), line_no);
        }
        PathLossModel model;
        model.exponent = parse_double_field(fields[1], "n", line_no);
        model.offset = parse_double_field(fields[2], "c", line_no);
        if (!std::isfinite(model.exponent) || !std::isfinite(model.offset) ||
            model.exponent <= 0.0) {
            throw Error(ErrorCode::invalid_model,
                        "model needs a finite positive n and finite c", line_no);
        }
        if (fields[0] == "*") {
            if (models.has_default()) {
                throw Error(ErrorCode::duplicate_anchor, "default model listed twice", line_no);
            }
            models.set_default(model);
        } else {
            check_anchor_id_field(fields[0], line_no);
            try {
                models.add(fields[0], model);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::duplicate_anchor) {
                    throw Error(ErrorCode::duplicate_anchor,
                                "anchor '" + fields[0] + "' listed twice", line_no);
                }
                throw;
            }
        }
    }
    return models;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    FileWriter out(path);
    out.line(kSummaryHeader);
    for (const SummaryRow& row : rows) {
        out.line(row.technique + "," + format_double(row.summary.mean) + "," +
                 format_double(row.summary.variance) + "," + format_double(row.summary.p50) + "," +
                 format_double(row.summary.p95) + "," + std::to_string(row.n_excluded));
    }
    out.finish();
}

void write_errors_csv(const std::vector<ErrorRow>& rows, const std::string& path) {
    FileWriter out(path);
    out.line(kErrorsHeader);
    for (const ErrorRow& row : rows) {
        out.line(row.technique + "," + std::to_string(row.test_index) + "," +
                 format_double(row.error_m));
    }
    out.finish();
}

void write_cdf_csv(const std::vector<CdfRow>& rows, const std::string& path) {
    FileWriter out(path);
    out.line(kCdfHeader);
    for (const CdfRow& row : rows) {
        out.line(row.technique + "," + format_double(row.error_m) + "," +
                 format_double(row.cum_fraction));
    }
    out.finish();
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in = open_for_read(path);

    ScenarioConfig cfg;
    std::set<std::string> seen;
    std::set<std::string> required = {"room_w", "room_h", "n",        "c",
                                      "layout", "region_x", "region_y", "region_w",
                                      "region_h", "spacing", "sigma"};
    bool any_anchor = false;

    auto as_double = [](const std::string& v, int ln) {
        try {
            return parse_double_field(v, "value", ln);
        } catch (const Error&) {
            throw Error(ErrorCode::config_invalid, "expected a number, got '" + v + "'", ln);
        }
    };
    auto as_int = [](const std::string& v, int ln) {
        try {
            return parse_int_field<int>(v, "value", ln);
        } catch (const Error&) {
            throw Error(ErrorCode::config_invalid, "expected an integer, got '" + v + "'", ln);
        }
    };
    auto as_uint64 = [](const std::string& v, int ln) {
        try {
            return parse_int_field<std::uint64_t>(v, "value", ln);
        } catch (const Error&) {
            throw Error(ErrorCode::config_invalid, "expected an integer, got '" + v + "'", ln);
        }
    };

    std::string raw;
    int line_no = 0;
    while (read_line(in, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::config_invalid, "expected 'key = value'", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw Error(ErrorCode::config_invalid, "expected 'key = value'", line_no);
        }

        if (key == "anchor") {
            const std::vector<std::string> fields = split(value, ',');
            if (fields.size() != 3) {
                throw Error(ErrorCode::config_invalid,
                            "anchor value must be 'id,x,y', got '" + value + "'", line_no);
            }
            const std::string id = trim(fields[0]);
            check_anchor_id_field(id, line_no);
            Anchor anchor;
            anchor.id = id;
            anchor.position.x = as_double(trim(fields[1]), line_no);
            anchor.position.y = as_double(trim(fields[2]), line_no);
            check_position_field(anchor.position.x, anchor.position.y, line_no);
            if (cfg.anchors.contains(anchor.id)) {
                throw Error(ErrorCode::duplicate_anchor,
                            "anchor '" + anchor.id + "' listed twice", line_no);
            }
            cfg.anchors.add(anchor);
            any_anchor = true;
            continue;
        }

        if (!seen.insert(key).second) {
            throw Error(ErrorCode::config_invalid, "key '" + key + "' set twice", line_no);
        }

        if (key == "room_w") cfg.room_w = as_double(value, line_no);
        else if (key == "room_h") cfg.room_h = as_double(value, line_no);
        else if (key == "n") cfg.model.exponent = as_double(value, line_no);
        else if (key == "c") cfg.model.offset = as_double(value, line_no);
        else if (key == "layout") {
            try {
                cfg.layout = parse_layout(value);
            } catch (const Error&) {
                throw Error(ErrorCode::config_invalid, "unknown layout '" + value + "'", line_no);
            }
        } else if (key == "region_x") cfg.region_x = as_double(value, line_no);
        else if (key == "region_y") cfg.region_y = as_double(value, line_no);
        else if (key == "region_w") cfg.region_w = as_double(value, line_no);
        else if (key == "region_h") cfg.region_h = as_double(value, line_no);
        else if (key == "spacing") cfg.spacing = as_double(value, line_no);
        else if (key == "sigma") cfg.sigma = as_double(value, line_no);
        else if (key == "scans_per_anchor") cfg.scans_per_anchor = as_int(value, line_no);
        else if (key == "test_points") cfg.test_points = as_int(value, line_no);
        else if (key == "seed") cfg.seed = as_uint64(value, line_no);
        else if (key == "tech") cfg.tech = value;
        else {
            throw Error(ErrorCode::config_invalid, "unknown key '" + key + "'", line_no);
        }
        required.erase(key);
    }

    if (!required.empty()) {
        throw Error(ErrorCode::config_invalid,
                    "missing required key '" + *required.begin() + "' in '" + path + "'");
    }
    if (!any_anchor) {
        throw Error(ErrorCode::empty_anchor_set, "'" + path + "' defines no anchors");
    }
    validate_scenario(cfg);
    return cfg;
}

} // namespace locus::io

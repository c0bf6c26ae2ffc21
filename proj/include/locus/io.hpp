#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "locus/core.hpp"
#include "locus/eval.hpp"
#include "locus/fingerprint.hpp"
#include "locus/ingest.hpp"
#include "locus/pathloss.hpp"
#include "locus/synth.hpp"

namespace locus::io {

// Doubles are written with 17 significant digits so parsing them back
// restores the exact same bit pattern.
std::string format_double(double value);

// Fingerprint database file. First line is the literal signature
// "rssi-locus-db v1"; each following line is one fingerprint:
//   x,y,anchor:mean:variance:count,anchor:mean:variance:count,...
// with entries ordered by anchor id. Saving a loaded file reproduces it
// byte for byte.
void save_database(const FingerprintDatabase& db, const std::string& path);
FingerprintDatabase load_database(const std::string& path);

// Scan stream csv with header seq,anchor_id,rssi_dbm,x_m,y_m,tech. The two
// position fields are either both numeric or both empty.
void save_scan_csv(const std::vector<ScanRecord>& records, const std::string& path);
std::vector<ScanRecord> load_scan_csv(const std::string& path);

// Calibration csv with header distance_m,rssi_dbm.
void save_calibration_csv(const std::vector<CalibrationSample>& samples, const std::string& path);
std::vector<CalibrationSample> load_calibration_csv(const std::string& path);

// Anchor placement csv with header anchor_id,x_m,y_m.
void save_anchors_csv(const AnchorSet& anchors, const std::string& path);
AnchorSet load_anchors_csv(const std::string& path);

// Path-loss model csv with header anchor_id,n,c. The anchor id "*" names
// the fallback model.
void save_models_csv(const ModelSet& models, const std::string& path);
ModelSet load_models_csv(const std::string& path);

// Result tables produced by the evaluation pipeline.
struct SummaryRow {
    std::string technique;
    ErrorSummary summary;
    std::size_t n_excluded = 0;
};
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

struct ErrorRow {
    std::string technique;
    std::size_t test_index = 0;
    double error_m = 0.0;
};
void write_errors_csv(const std::vector<ErrorRow>& rows, const std::string& path);

struct CdfRow {
    std::string technique;
    double error_m = 0.0;
    double cum_fraction = 0.0;
};
void write_cdf_csv(const std::vector<CdfRow>& rows, const std::string& path);

// Scenario description file: `key = value` lines, '#' starts a comment.
// Scalar keys: room_w room_h n c layout region_x region_y region_w region_h
// spacing sigma scans_per_anchor test_points seed tech. The repeatable key
// `anchor = id,x,y` adds one anchor per line.
ScenarioConfig load_scenario_config(const std::string& path);

} // namespace locus::io

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "locus/core.hpp"
#include "locus/eval.hpp"
#include "locus/fingerprint.hpp"
#include "locus/pathloss.hpp"

namespace locus {

// Deterministic random source with a pinned algorithm (mt19937_64 plus the
// Box-Muller transform) so identical seeds give identical scenarios on any
// platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform draw in (0, 1], from the top 53 bits of the engine.
    double next_uniform();

    // Standard normal draw: two uniforms through Box-Muller, cosine branch
    // only (the paired sine value is discarded).
    double next_normal();

private:
    std::mt19937_64 engine_;
};

// How survey positions are laid out inside the survey region.
enum class Layout { dense_grid, sparse_grid, alternating };

const char* layout_name(Layout layout);

// Accepts "dense-grid", "sparse-grid" or "alternating"; throws
// Error{config_invalid} otherwise.
Layout parse_layout(const std::string& name);

// Full description of a synthetic benchmark scenario.
struct ScenarioConfig {
    double room_w = 0.0; // meters
    double room_h = 0.0;
    AnchorSet anchors;
    PathLossModel model;
    Layout layout = Layout::dense_grid;
    double region_x = 0.0; // survey region origin
    double region_y = 0.0;
    double region_w = 0.0;
    double region_h = 0.0;
    double spacing = 0.0; // grid step, meters
    double sigma = 0.0;   // shadowing noise, dB
    int scans_per_anchor = 100;
    int test_points = 100;
    std::uint64_t seed = 42;
    std::string tech = "zigbee"; // radio label carried into the csv output
};

// Checks dimensions, region containment, spacing, noise level and counts.
// Throws config_invalid, or empty_anchor_set when no anchors are given.
void validate_scenario(const ScenarioConfig& cfg);

// Survey positions for the configured layout, row by row bottom-up. Grid
// layouts step every `spacing` meters along both axes; the alternating
// layout shifts every odd row right by half a step.
std::vector<Position> fingerprint_positions(const ScenarioConfig& cfg);

// One noisy reading at `distance_m`: model prediction plus sigma times a
// standard normal draw, clamped into the measurable rssi range.
Rssi sample_rssi(const PathLossModel& model, double distance_m, double sigma, Rng& rng);

// Survey data collected at one position: one reading series per anchor,
// indexed like the scenario's anchor set.
struct SurveyPoint {
    Position position;
    std::vector<std::vector<double>> readings; // [anchor index][scan index]
};

struct SyntheticScenario {
    std::vector<SurveyPoint> survey;
    std::vector<TestCase> tests; // truth positions with single-draw scans
};

// Generates the scenario deterministically from cfg.seed: every survey
// position gets scans_per_anchor readings per anchor, then every test point
// gets a uniform position inside the survey region and a single noisy
// reading per anchor.
SyntheticScenario generate_scenario(const ScenarioConfig& cfg);

// Flattens raw survey readings into per-reading samples for
// build_database.
std::vector<SurveySample> to_survey_samples(const ScenarioConfig& cfg,
                                            const SyntheticScenario& scenario);

struct TechniqueRun {
    Technique technique;
    EvalResult result;
};

// End-to-end benchmark for one scenario: generate, aggregate the survey
// into a fingerprint database, then evaluate each requested technique over
// the test points. The scenario's own model drives the range estimates.
std::vector<TechniqueRun> run_scenario(const ScenarioConfig& cfg,
                                       const std::vector<Technique>& techniques,
                                       int k = 4);

} // namespace locus

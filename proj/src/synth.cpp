#include "locus/synth.hpp"

#include <algorithm>
#include <cmath>

namespace locus {

double Rng::next_uniform() {
    // (x >> 11) is uniform over [0, 2^53); the +1 keeps the result strictly
    // positive so it is safe inside a logarithm.
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

const char* layout_name(Layout layout) {
    switch (layout) {
    case Layout::dense_grid: return "dense-grid";
    case Layout::sparse_grid: return "sparse-grid";
    case Layout::alternating: return "alternating";
    }
    return "unknown";
}

Layout parse_layout(const std::string& name) {
    if (name == "dense-grid") return Layout::dense_grid;
    if (name == "sparse-grid") return Layout::sparse_grid;
    if (name == "alternating") return Layout::alternating;
    throw Error(ErrorCode::config_invalid,
                "unknown layout '" + name + "' (expected dense-grid, sparse-grid or alternating)");
}

void validate_scenario(const ScenarioConfig& cfg) {
    auto fail = [](const std::string& what) {
        throw Error(ErrorCode::config_invalid, what);
    };
    if (!(std::isfinite(cfg.room_w) && cfg.room_w > 0.0) ||
        !(std::isfinite(cfg.room_h) && cfg.room_h > 0.0)) {
        fail("room dimensions must be finite and positive");
    }
    if (cfg.anchors.empty()) {
        throw Error(ErrorCode::empty_anchor_set, "scenario has no anchors");
    }
    for (const auto& anchor : cfg.anchors) {
        if (anchor.position.x < 0.0 || anchor.position.x > cfg.room_w ||
            anchor.position.y < 0.0 || anchor.position.y > cfg.room_h) {
            fail("anchor '" + anchor.id + "' lies outside the room");
        }
    }
    validate_model(cfg.model);
    if (!(std::isfinite(cfg.region_w) && cfg.region_w > 0.0) ||
        !(std::isfinite(cfg.region_h) && cfg.region_h > 0.0) ||
        !std::isfinite(cfg.region_x) || !std::isfinite(cfg.region_y)) {
        fail("survey region must have finite origin and positive size");
    }
    if (cfg.region_x < 0.0 || cfg.region_y < 0.0 ||
        cfg.region_x + cfg.region_w > cfg.room_w ||
        cfg.region_y + cfg.region_h > cfg.room_h) {
        fail("survey region must lie inside the room");
    }
    if (!(std::isfinite(cfg.spacing) && cfg.spacing > 0.0)) {
        fail("grid spacing must be finite and positive");
    }
    if (!(std::isfinite(cfg.sigma) && cfg.sigma >= 0.0)) {
        fail("noise sigma must be finite and >= 0");
    }
    if (cfg.scans_per_anchor < 1) fail("scans_per_anchor must be >= 1");
    if (cfg.test_points < 1) fail("test_points must be >= 1");
    if (cfg.tech.empty()) fail("tech label must not be empty");
    if (cfg.tech.find_first_of(",\r\n") != std::string::npos) {
        fail("tech label must not contain commas or line breaks");
    }
}

std::vector<Position> fingerprint_positions(const ScenarioConfig& cfg) {
    validate_scenario(cfg);
    // The epsilon absorbs binary representation error in region/spacing
    // ratios so an exact fit still yields the boundary point.
    constexpr double eps = 1e-9;
    std::vector<Position> out;
    const int rows = static_cast<int>(cfg.region_h / cfg.spacing + eps) + 1;
    if (cfg.layout == Layout::alternating) {
        for (int j = 0; j < rows; ++j) {
            const double offset = (j % 2 == 1) ? cfg.spacing / 2.0 : 0.0;
            for (int i = 0; offset + static_cast<double>(i) * cfg.spacing <= cfg.region_w + eps; ++i) {
                out.push_back({cfg.region_x + offset + static_cast<double>(i) * cfg.spacing,
                               cfg.region_y + static_cast<double>(j) * cfg.spacing});
            }
        }
    } else {
        const int cols = static_cast<int>(cfg.region_w / cfg.spacing + eps) + 1;
        for (int j = 0; j < rows; ++j) {
            for (int i = 0; i < cols; ++i) {
                out.push_back({cfg.region_x + static_cast<double>(i) * cfg.spacing,
                               cfg.region_y + static_cast<double>(j) * cfg.spacing});
            }
        }
    }
    return out;
}

Rssi sample_rssi(const PathLossModel& model, double distance_m, double sigma, Rng& rng) {
    const double raw = predict_rssi(model, distance_m) + sigma * rng.next_normal();
    return std::clamp(raw, kRssiMin, kRssiMax);
}

SyntheticScenario generate_scenario(const ScenarioConfig& cfg) {
    validate_scenario(cfg);
    Rng rng(cfg.seed);
    SyntheticScenario scenario;

    for (const Position& pos : fingerprint_positions(cfg)) {
        SurveyPoint point;
        point.position = pos;
        point.readings.reserve(cfg.anchors.size());
        for (const auto& anchor : cfg.anchors) {
            const double d = euclidean_distance(pos, anchor.position);
            std::vector<double> series;
            series.reserve(static_cast<std::size_t>(cfg.scans_per_anchor));
            for (int s = 0; s < cfg.scans_per_anchor; ++s) {
                series.push_back(sample_rssi(cfg.model, d, cfg.sigma, rng));
            }
            point.readings.push_back(std::move(series));
        }
        scenario.survey.push_back(std::move(point));
    }

    for (int t = 0; t < cfg.test_points; ++t) {
        TestCase test;
        test.truth.x = cfg.region_x + cfg.region_w * rng.next_uniform();
        test.truth.y = cfg.region_y + cfg.region_h * rng.next_uniform();
        for (const auto& anchor : cfg.anchors) {
            const double d = euclidean_distance(test.truth, anchor.position);
            test.scan.add(anchor.id, sample_rssi(cfg.model, d, cfg.sigma, rng));
        }
        scenario.tests.push_back(std::move(test));
    }
    return scenario;
}

std::vector<SurveySample> to_survey_samples(const ScenarioConfig& cfg,
                                            const SyntheticScenario& scenario) {
    std::vector<SurveySample> samples;
    for (const auto& point : scenario.survey) {
        for (std::size_t a = 0; a < point.readings.size(); ++a) {
            const std::string& id = cfg.anchors.at(a).id;
            for (double value : point.readings[a]) {
                samples.push_back({point.position, id, value});
            }
        }
    }
    return samples;
}

std::vector<TechniqueRun> run_scenario(const ScenarioConfig& cfg,
                                       const std::vector<Technique>& techniques,
                                       int k) {
    const SyntheticScenario scenario = generate_scenario(cfg);
    const FingerprintDatabase db = build_database(to_survey_samples(cfg, scenario));
    ModelSet models;
    models.set_default(cfg.model);

    std::vector<TechniqueRun> runs;
    runs.reserve(techniques.size());
    for (Technique technique : techniques) {
        runs.push_back({technique,
                        evaluate_technique(technique, db, cfg.anchors, models, scenario.tests, k)});
    }
    return runs;
}

} // namespace locus

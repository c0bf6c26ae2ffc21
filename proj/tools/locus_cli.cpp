// locus: command-line front end for the rssi-locus library.
//
// Subcommands cover the full workflow: fit a path-loss model from
// calibration data, build a fingerprint database from a survey, localize a
// scan, and generate/evaluate synthetic benchmark scenarios.
//
// Exit codes: 0 success, 1 domain error (bad data, degenerate geometry,
// ...), 2 usage or file-access error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locus/eval.hpp"
#include "locus/fingerprint.hpp"
#include "locus/ingest.hpp"
#include "locus/io.hpp"
#include "locus/pathloss.hpp"
#include "locus/synth.hpp"
#include "locus/trilat.hpp"

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double value) { return locus::io::format_double(value); }

// ---------------------------------------------------------------- fit-pathloss

struct FitOptions {
    std::string input;
    std::string output;
};

int cmd_fit_pathloss(const FitOptions& opt) {
    const auto samples = locus::io::load_calibration_csv(opt.input);
    const locus::PathLossFit fit = locus::fit_path_loss(samples);
    std::cout << "n=" << fmt(fit.model.exponent) << " c=" << fmt(fit.model.offset)
              << " r2=" << fmt(fit.r_squared) << "\n";
    if (!opt.output.empty()) {
        locus::ModelSet models;
        models.set_default(fit.model);
        locus::io::save_models_csv(models, opt.output);
    }
    return 0;
}

// ------------------------------------------------------------------- build-db

struct BuildDbOptions {
    std::string scans;
    std::string output;
    int window = 10;
};

int cmd_build_db(const BuildDbOptions& opt) {
    const auto records = locus::io::load_scan_csv(opt.scans);
    const auto groups = locus::group_survey(records);
    const auto samples = locus::smoothed_samples(groups, opt.window);
    const locus::FingerprintDatabase db = locus::build_database(samples);
    locus::io::save_database(db, opt.output);
    std::cout << "fingerprints=" << db.size() << " anchors=" << db.anchor_ids().size() << "\n";
    return 0;
}

// ------------------------------------------------------------------- localize

struct LocalizeOptions {
    std::string technique = "knn";
    std::string scan;
    std::string db;
    std::string anchors;
    std::string models;
    int k = 4;
    int window = 10;
    std::string smooth = "ma";
    std::string reduce = "final";
};

locus::RssiScan reduce_scan_stream(const LocalizeOptions& opt,
                                   const std::vector<locus::ScanRecord>& records) {
    if (opt.smooth == "kalman") {
        // Group per anchor in seq order and keep each filter's settled
        // estimate.
        std::vector<std::pair<std::string, locus::KalmanFilter>> filters;
        std::vector<locus::ScanRecord> sorted = records;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const auto& a, const auto& b) { return a.seq < b.seq; });
        for (const auto& rec : sorted) {
            auto it = std::find_if(filters.begin(), filters.end(),
                                   [&](const auto& f) { return f.first == rec.anchor_id; });
            if (it == filters.end()) {
                filters.emplace_back(rec.anchor_id, locus::KalmanFilter{});
                it = std::prev(filters.end());
            }
            it->second.update(rec.rssi);
        }
        if (filters.empty()) {
            throw locus::Error(locus::ErrorCode::empty_sequence, "scan stream has no records");
        }
        locus::RssiScan scan;
        for (auto& [id, filter] : filters) {
            scan.add(id, filter.estimate());
        }
        return scan;
    }
    const locus::Reduce mode =
        opt.reduce == "mean" ? locus::Reduce::mean_value : locus::Reduce::final_value;
    return locus::reduce_stream(records, opt.window, mode);
}

int cmd_localize(const LocalizeOptions& opt) {
    const locus::Technique technique = locus::parse_technique(opt.technique);
    if (technique == locus::Technique::trilateration) {
        if (opt.anchors.empty() || opt.models.empty()) {
            throw UsageError("--technique trilat needs --anchors and --models");
        }
    } else if (opt.db.empty()) {
        throw UsageError("--technique " + opt.technique + " needs --db");
    }

    const auto records = locus::io::load_scan_csv(opt.scan);
    const locus::RssiScan scan = reduce_scan_stream(opt, records);

    locus::Position estimate;
    switch (technique) {
    case locus::Technique::trilateration: {
        const locus::AnchorSet anchors = locus::io::load_anchors_csv(opt.anchors);
        const locus::ModelSet models = locus::io::load_models_csv(opt.models);
        estimate = locus::locate_trilateration(anchors, models, scan);
        break;
    }
    case locus::Technique::knn: {
        const locus::FingerprintDatabase db = locus::io::load_database(opt.db);
        estimate = locus::locate_knn(db, scan, opt.k);
        break;
    }
    case locus::Technique::bayes: {
        const locus::FingerprintDatabase db = locus::io::load_database(opt.db);
        estimate = locus::locate_bayes(db, scan);
        break;
    }
    }
    std::cout << fmt(estimate.x) << " " << fmt(estimate.y) << "\n";
    return 0;
}

// ------------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string config;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double sigma = 0.0;
    bool sigma_set = false;
};

void apply_overrides(locus::ScenarioConfig& cfg, bool seed_set, std::uint64_t seed,
                     bool sigma_set, double sigma) {
    if (seed_set) cfg.seed = seed;
    if (sigma_set) cfg.sigma = sigma;
    locus::validate_scenario(cfg);
}

std::vector<locus::ScanRecord> survey_records(const locus::ScenarioConfig& cfg,
                                              const locus::SyntheticScenario& scenario) {
    std::vector<locus::ScanRecord> records;
    std::int64_t seq = 0;
    for (const auto& point : scenario.survey) {
        for (int s = 0; s < cfg.scans_per_anchor; ++s) {
            for (std::size_t a = 0; a < point.readings.size(); ++a) {
                locus::ScanRecord rec;
                rec.seq = seq + s;
                rec.anchor_id = cfg.anchors.at(a).id;
                rec.rssi = point.readings[a][static_cast<std::size_t>(s)];
                rec.has_position = true;
                rec.position = point.position;
                rec.tech = cfg.tech;
                records.push_back(std::move(rec));
            }
        }
        seq += cfg.scans_per_anchor;
    }
    return records;
}

std::vector<locus::ScanRecord> test_records(const locus::ScenarioConfig& cfg,
                                            const locus::SyntheticScenario& scenario) {
    std::vector<locus::ScanRecord> records;
    for (std::size_t t = 0; t < scenario.tests.size(); ++t) {
        const locus::TestCase& test = scenario.tests[t];
        for (const auto& [anchor_id, rssi] : test.scan.entries()) {
            locus::ScanRecord rec;
            rec.seq = static_cast<std::int64_t>(t);
            rec.anchor_id = anchor_id;
            rec.rssi = rssi;
            rec.has_position = true;
            rec.position = test.truth;
            rec.tech = cfg.tech;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw locus::Error(locus::ErrorCode::io_error,
                           "cannot create directory '" + dir + "': " + ec.message());
    }
}

int cmd_simulate(const SimulateOptions& opt) {
    locus::ScenarioConfig cfg = locus::io::load_scenario_config(opt.config);
    apply_overrides(cfg, opt.seed_set, opt.seed, opt.sigma_set, opt.sigma);
    const locus::SyntheticScenario scenario = locus::generate_scenario(cfg);

    ensure_dir(opt.out_dir);
    const fs::path dir(opt.out_dir);
    locus::io::save_scan_csv(survey_records(cfg, scenario), (dir / "survey.csv").string());
    locus::io::save_scan_csv(test_records(cfg, scenario), (dir / "tests.csv").string());
    locus::io::save_anchors_csv(cfg.anchors, (dir / "anchors.csv").string());
    locus::ModelSet models;
    models.set_default(cfg.model);
    locus::io::save_models_csv(models, (dir / "models.csv").string());

    std::cout << "survey_points=" << scenario.survey.size()
              << " test_points=" << scenario.tests.size() << "\n";
    return 0;
}

// ------------------------------------------------------------------- evaluate

struct EvaluateOptions {
    std::string config;
    std::string out_dir;
    int k = 4;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double sigma = 0.0;
    bool sigma_set = false;
};

int cmd_evaluate(const EvaluateOptions& opt) {
    locus::ScenarioConfig cfg = locus::io::load_scenario_config(opt.config);
    apply_overrides(cfg, opt.seed_set, opt.seed, opt.sigma_set, opt.sigma);

    const std::vector<locus::Technique> techniques = {
        locus::Technique::trilateration, locus::Technique::knn, locus::Technique::bayes};
    const auto runs = locus::run_scenario(cfg, techniques, opt.k);

    std::vector<locus::io::SummaryRow> summary_rows;
    std::vector<locus::io::ErrorRow> error_rows;
    std::vector<locus::io::CdfRow> cdf_rows;
    for (const auto& run : runs) {
        const char* name = locus::technique_name(run.technique);
        const locus::ErrorSummary summary = locus::summarize(run.result.errors);
        summary_rows.push_back({name, summary, run.result.n_excluded});
        for (std::size_t i = 0; i < run.result.errors.size(); ++i) {
            error_rows.push_back({name, run.result.indices[i], run.result.errors[i]});
        }
        for (const locus::CdfPoint& point : locus::make_cdf(run.result.errors)) {
            cdf_rows.push_back({name, point.value, point.cum_fraction});
        }
        std::printf("%-6s mean=%.3f m  var=%.3f m^2  p50=%.3f m  p95=%.3f m  excluded=%zu\n",
                    name, summary.mean, summary.variance, summary.p50, summary.p95,
                    run.result.n_excluded);
    }

    ensure_dir(opt.out_dir);
    const fs::path dir(opt.out_dir);
    locus::io::write_summary_csv(summary_rows, (dir / "summary.csv").string());
    locus::io::write_errors_csv(error_rows, (dir / "errors.csv").string());
    locus::io::write_cdf_csv(cdf_rows, (dir / "cdf.csv").string());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rssi-locus: RSSI indoor localization toolkit"};
    app.require_subcommand(1);

    FitOptions fit_opt;
    auto* fit = app.add_subcommand("fit-pathloss",
                                   "Fit a log-distance path-loss model to calibration data");
    fit->add_option("--input", fit_opt.input, "calibration csv (distance_m,rssi_dbm)")
        ->required();
    fit->add_option("--output", fit_opt.output, "write the fitted model as a model csv");

    BuildDbOptions build_opt;
    auto* build = app.add_subcommand("build-db",
                                     "Aggregate a survey scan stream into a fingerprint database");
    build->add_option("--scans", build_opt.scans, "survey scan csv with positions")->required();
    build->add_option("--output", build_opt.output, "database file to write")->required();
    build->add_option("--window", build_opt.window, "moving-average window (1 disables)")
        ->default_val(10);

    LocalizeOptions loc_opt;
    auto* loc = app.add_subcommand("localize", "Estimate the position for one scan stream");
    loc->add_option("--technique", loc_opt.technique, "trilat, knn or bayes")->required();
    loc->add_option("--scan", loc_opt.scan, "scan csv to localize")->required();
    loc->add_option("--db", loc_opt.db, "fingerprint database (knn and bayes)");
    loc->add_option("--anchors", loc_opt.anchors, "anchor placement csv (trilat)");
    loc->add_option("--models", loc_opt.models, "path-loss model csv (trilat)");
    loc->add_option("--k", loc_opt.k, "neighbours to average (knn)")->default_val(4);
    loc->add_option("--window", loc_opt.window, "moving-average window")->default_val(10);
    loc->add_option("--smooth", loc_opt.smooth, "ma or kalman")
        ->default_val("ma")
        ->check(CLI::IsMember({"ma", "kalman"}));
    loc->add_option("--reduce", loc_opt.reduce, "final or mean (ma smoothing only)")
        ->default_val("final")
        ->check(CLI::IsMember({"final", "mean"}));

    SimulateOptions sim_opt;
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic scenario to csv files");
    sim->add_option("--config", sim_opt.config, "scenario config file")->required();
    sim->add_option("--out-dir", sim_opt.out_dir, "directory for the generated files")
        ->required();
    auto* sim_seed = sim->add_option("--seed", sim_opt.seed, "override the config seed");
    auto* sim_sigma = sim->add_option("--sigma", sim_opt.sigma, "override the config noise level");

    EvaluateOptions eval_opt;
    auto* eval = app.add_subcommand("evaluate",
                                    "Run all three techniques over a synthetic scenario");
    eval->add_option("--config", eval_opt.config, "scenario config file")->required();
    eval->add_option("--out-dir", eval_opt.out_dir, "directory for the result tables")
        ->required();
    eval->add_option("--k", eval_opt.k, "neighbours to average (knn)")->default_val(4);
    auto* eval_seed = eval->add_option("--seed", eval_opt.seed, "override the config seed");
    auto* eval_sigma = eval->add_option("--sigma", eval_opt.sigma,
                                        "override the config noise level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    sim_opt.seed_set = sim_seed->count() > 0;
    sim_opt.sigma_set = sim_sigma->count() > 0;
    eval_opt.seed_set = eval_seed->count() > 0;
    eval_opt.sigma_set = eval_sigma->count() > 0;

    try {
        if (fit->parsed()) return cmd_fit_pathloss(fit_opt);
        if (build->parsed()) return cmd_build_db(build_opt);
        if (loc->parsed()) return cmd_localize(loc_opt);
        if (sim->parsed()) return cmd_simulate(sim_opt);
        if (eval->parsed()) return cmd_evaluate(eval_opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const locus::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == locus::ErrorCode::io_error ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "locus/core.hpp"
#include "locus/fingerprint.hpp"
#include "locus/pathloss.hpp"
#include "locus/trilat.hpp"

namespace locus {

// The three localization techniques under comparison.
enum class Technique { trilateration, knn, bayes };

// Short stable name: "trilat", "knn" or "bayes".
const char* technique_name(Technique technique);

// Inverse of technique_name. Throws Error{config_invalid} on anything else.
Technique parse_technique(const std::string& name);

// Empirical quantile with the inverted-CDF convention: the smallest sample
// value whose cumulative fraction reaches p. p must lie in [0, 1]
// (invalid_quantile); an empty list throws empty_list.
double quantile(const std::vector<double>& values, double p);

struct ErrorSummary {
    double mean = 0.0;     // meters
    double variance = 0.0; // population variance, m^2
    double p50 = 0.0;
    double p95 = 0.0;
    std::size_t n = 0;
};

// Mean, population variance and the 50th / 95th percentiles of a list of
// positioning errors. Bit-exact under permutation of the input. Throws
// Error{empty_list} on an empty input.
ErrorSummary summarize(const std::vector<double>& errors);

struct CdfPoint {
    double value = 0.0;        // error threshold, meters
    double cum_fraction = 0.0; // fraction of samples <= value
};

// Empirical distribution: one point per distinct sample value, ascending,
// ending at fraction 1. Throws Error{empty_list} on an empty input.
std::vector<CdfPoint> make_cdf(const std::vector<double>& errors);

// One evaluation case: where the device really was and what it heard there.
struct TestCase {
    Position truth;
    RssiScan scan;
};

struct EvalResult {
    std::vector<double> errors;       // meters, one per localized test case
    std::vector<std::size_t> indices; // original test index of each error
    std::size_t n_excluded = 0;       // cases the technique could not localize
};

// Runs one technique over a test set and collects the position errors.
// Cases failing with too_few_anchors, no_common_anchors,
// degenerate_geometry or model_out_of_range are counted as excluded rather
// than aborting the run; other errors propagate. Throws
// Error{empty_test_set} when `tests` is empty.
EvalResult evaluate_technique(Technique technique,
                              const FingerprintDatabase& db,
                              const AnchorSet& anchors,
                              const ModelSet& models,
                              const std::vector<TestCase>& tests,
                              int k = 4);

} // namespace locus

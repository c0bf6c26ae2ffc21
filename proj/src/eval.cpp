#include "locus/eval.hpp"

#include <algorithm>
#include <cmath>

namespace locus {

const char* technique_name(Technique technique) {
    switch (technique) {
    case Technique::trilateration: return "trilat";
    case Technique::knn: return "knn";
    case Technique::bayes: return "bayes";
    }
    return "unknown";
}

Technique parse_technique(const std::string& name) {
    if (name == "trilat") return Technique::trilateration;
    if (name == "knn") return Technique::knn;
    if (name == "bayes") return Technique::bayes;
    throw Error(ErrorCode::config_invalid,
                "unknown technique '" + name + "' (expected trilat, knn or bayes)");
}

double quantile(const std::vector<double>& values, double p) {
    if (values.empty()) {
        throw Error(ErrorCode::empty_list, "quantile of empty list");
    }
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw Error(ErrorCode::invalid_quantile, "quantile level must lie in [0, 1]");
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    // Smallest index whose cumulative fraction (index+1)/n reaches p; the
    // epsilon keeps exact products like 0.95*n from rounding up a slot.
    auto index = static_cast<long>(std::ceil(p * n - 1e-9)) - 1;
    index = std::clamp<long>(index, 0, static_cast<long>(sorted.size()) - 1);
    return sorted[static_cast<std::size_t>(index)];
}

ErrorSummary summarize(const std::vector<double>& errors) {
    if (errors.empty()) {
        throw Error(ErrorCode::empty_list, "summary of empty error list");
    }
    // Accumulate in sorted order so the result is bit-exact no matter how
    // the caller ordered the list.
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());

    ErrorSummary out;
    out.n = sorted.size();
    out.mean = mean(sorted);
    out.variance = variance(sorted);
    out.p50 = quantile(sorted, 0.5);
    out.p95 = quantile(sorted, 0.95);
    return out;
}

std::vector<CdfPoint> make_cdf(const std::vector<double>& errors) {
    if (errors.empty()) {
        throw Error(ErrorCode::empty_list, "cdf of empty error list");
    }
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());

    std::vector<CdfPoint> out;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const bool last_of_value = (i + 1 == sorted.size()) || (sorted[i + 1] != sorted[i]);
        if (last_of_value) {
            out.push_back({sorted[i], static_cast<double>(i + 1) / n});
        }
    }
    return out;
}

EvalResult evaluate_technique(Technique technique,
                              const FingerprintDatabase& db,
                              const AnchorSet& anchors,
                              const ModelSet& models,
                              const std::vector<TestCase>& tests,
                              int k) {
    if (tests.empty()) {
        throw Error(ErrorCode::empty_test_set, "no test cases to evaluate");
    }

    EvalResult result;
    result.errors.reserve(tests.size());
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const auto& test = tests[i];
        Position estimate;
        try {
            switch (technique) {
            case Technique::trilateration:
                estimate = locate_trilateration(anchors, models, test.scan);
                break;
            case Technique::knn:
                estimate = locate_knn(db, test.scan, k);
                break;
            case Technique::bayes:
                estimate = locate_bayes(db, test.scan);
                break;
            }
        } catch (const Error& e) {
            switch (e.code()) {
            case ErrorCode::too_few_anchors:
            case ErrorCode::no_common_anchors:
            case ErrorCode::degenerate_geometry:
            case ErrorCode::model_out_of_range:
                ++result.n_excluded;
                continue;
            default:
                throw;
            }
        }
        result.errors.push_back(euclidean_distance(estimate, test.truth));
        result.indices.push_back(i);
    }
    return result;
}

} // namespace locus

#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "locus/fingerprint.hpp"

using namespace locus;

namespace {

Fingerprint make_fp(Position pos, std::vector<std::pair<std::string, AnchorStats>> stats) {
    Fingerprint fp;
    fp.position = pos;
    for (auto& [id, s] : stats) {
        fp.stats.emplace(id, s);
    }
    return fp;
}

// Two-anchor database used by the pinned probabilistic checks.
FingerprintDatabase reference_db() {
    FingerprintDatabase db;
    db.add(make_fp({0.0, 0.0}, {{"A", {-50.0, 4.0, 10}}, {"B", {-62.0, 9.0, 10}}}));
    db.add(make_fp({4.0, 0.0}, {{"A", {-55.0, 4.0, 10}}, {"B", {-58.0, 1.0, 10}}}));
    db.add(make_fp({0.0, 4.0}, {{"A", {-48.0, 16.0, 10}}, {"B", {-66.0, 4.0, 10}}}));
    return db;
}

RssiScan reference_scan() {
    RssiScan scan;
    scan.add("A", -52.0);
    scan.add("B", -60.0);
    return scan;
}

} // namespace

TEST_CASE("database rejects duplicates and bad stats") {
    FingerprintDatabase db;
    db.add(make_fp({1.0, 2.0}, {{"A", {-50.0, 1.0, 5}}}));
    CHECK(db.size() == 1);
    CHECK_LOCUS_ERROR(db.add(make_fp({1.0, 2.0}, {{"B", {-60.0, 1.0, 5}}})), duplicate_position);
    CHECK_LOCUS_ERROR(db.add(make_fp({2.0, 2.0}, {{"A", {-50.0, 1.0, 0}}})), empty_sequence);
    CHECK_LOCUS_ERROR(db.add(make_fp({2.0, 2.0}, {{"A", {-50.0, -1.0, 5}}})), invalid_rssi);
    CHECK_LOCUS_ERROR(db.add(make_fp({2.0, 2.0}, {{"A", {3.0, 1.0, 5}}})), invalid_rssi);
    CHECK_LOCUS_ERROR(db.add(make_fp({std::nan(""), 2.0}, {{"A", {-50.0, 1.0, 5}}})),
                      invalid_position);
}

TEST_CASE("database lists anchors as a sorted union") {
    FingerprintDatabase db;
    db.add(make_fp({0.0, 0.0}, {{"b", {-50.0, 1.0, 5}}, {"a", {-52.0, 1.0, 5}}}));
    db.add(make_fp({1.0, 0.0}, {{"c", {-55.0, 1.0, 5}}}));
    CHECK(db.anchor_ids() == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("survey aggregation computes mean, population variance and count") {
    std::vector<SurveySample> samples;
    // Position P: anchor A readings -50,-52,-54; anchor B single -60.
    samples.push_back({{1.0, 1.0}, "A", -50.0});
    samples.push_back({{1.0, 1.0}, "A", -52.0});
    samples.push_back({{1.0, 1.0}, "A", -54.0});
    samples.push_back({{1.0, 1.0}, "B", -60.0});
    // Position Q appears later in the stream.
    samples.push_back({{2.0, 1.0}, "A", -58.0});
    samples.push_back({{2.0, 1.0}, "A", -58.0});

    const FingerprintDatabase db = build_database(samples);
    REQUIRE(db.size() == 2);
    CHECK(db.at(0).position.x == 1.0);
    CHECK(db.at(1).position.x == 2.0);

    const AnchorStats& a = db.at(0).stats.at("A");
    CHECK(a.mean == -52.0);
    CHECK(a.variance == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(a.count == 3);
    const AnchorStats& b = db.at(0).stats.at("B");
    CHECK(b.mean == -60.0);
    CHECK(b.variance == 0.0);
    CHECK(b.count == 1);
    CHECK(db.at(1).stats.at("A").variance == 0.0);

    CHECK_LOCUS_ERROR(build_database({}), empty_survey);
    CHECK_LOCUS_ERROR(build_database({{{0.0, 0.0}, "A", 5.0}}), invalid_rssi);
}

TEST_CASE("knn with k=1 returns the nearest fingerprint in signal space") {
    const FingerprintDatabase db = reference_db();
    RssiScan scan;
    scan.add("A", -49.5);
    scan.add("B", -62.5);
    const Position p = locate_knn(db, scan, 1);
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
}

TEST_CASE("knn averages the k nearest positions unweighted") {
    const FingerprintDatabase db = reference_db();
    const Position p = locate_knn(db, reference_scan(), 2);
    // Signal distances: fp0 sqrt(8), fp1 sqrt(13), fp2 sqrt(52) -> fp0, fp1.
    CHECK(p.x == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p.y == 0.0);
}

TEST_CASE("knn clamps k to the candidate count") {
    const FingerprintDatabase db = reference_db();
    const Position p = locate_knn(db, reference_scan(), 50);
    CHECK(p.x == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(p.y == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("knn resolves signal-distance ties by database order") {
    FingerprintDatabase db;
    db.add(make_fp({0.0, 0.0}, {{"A", {-52.0, 1.0, 5}}}));
    db.add(make_fp({8.0, 8.0}, {{"A", {-48.0, 1.0, 5}}})); // same |delta| = 2
    RssiScan scan;
    scan.add("A", -50.0);
    const Position p = locate_knn(db, scan, 1);
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
}

TEST_CASE("knn skips anchors a fingerprint never heard") {
    FingerprintDatabase db;
    // fp0 heard only A, fp1 heard A and B.
    db.add(make_fp({0.0, 0.0}, {{"A", {-50.0, 1.0, 5}}}));
    db.add(make_fp({4.0, 0.0}, {{"A", {-50.0, 1.0, 5}}, {"B", {-60.0, 1.0, 5}}}));
    RssiScan scan;
    scan.add("A", -50.0);
    scan.add("B", -60.0);
    // fp0 distance uses A only -> 0; fp1 also 0 -> tie broken to fp0.
    const Position p = locate_knn(db, scan, 1);
    CHECK(p.x == 0.0);

    // A scan over an anchor nobody heard cannot be matched.
    RssiScan lonely;
    lonely.add("Z", -50.0);
    CHECK_LOCUS_ERROR(locate_knn(db, lonely, 1), no_common_anchors);
}

TEST_CASE("knn argument validation") {
    const FingerprintDatabase db = reference_db();
    CHECK_LOCUS_ERROR(locate_knn(db, reference_scan(), 0), invalid_knn_config);
    CHECK_LOCUS_ERROR(locate_knn(db, reference_scan(), -3), invalid_knn_config);
    CHECK_LOCUS_ERROR(locate_knn(FingerprintDatabase{}, reference_scan(), 1), empty_survey);
}

TEST_CASE("bayes posteriors match independently computed values") {
    // Expected numbers pinned from a 60-digit direct evaluation of the
    // Gaussian posterior for this database and scan.
    const FingerprintDatabase db = reference_db();
    const BayesResult result = bayes_posteriors(db, reference_scan());

    REQUIRE(result.anchors_used == std::vector<std::string>{"A", "B"});
    REQUIRE(result.posteriors.size() == 2);
    REQUIRE(result.posteriors[0].size() == 3);

    CHECK(result.posteriors[0][0] == doctest::Approx(0.49133737120330308).epsilon(1e-12));
    CHECK(result.posteriors[0][1] == doctest::Approx(0.26299394319504538).epsilon(1e-12));
    CHECK(result.posteriors[0][2] == doctest::Approx(0.24566868560165154).epsilon(1e-12));

    CHECK(result.posteriors[1][0] == doctest::Approx(0.65451445694270190).epsilon(1e-12));
    CHECK(result.posteriors[1][1] == doctest::Approx(0.33186497504726079).epsilon(1e-12));
    CHECK(result.posteriors[1][2] == doctest::Approx(0.01362056801003731).epsilon(1e-10));

    CHECK(result.scores[0] == doctest::Approx(0.57292591407300249).epsilon(1e-12));
    CHECK(result.scores[1] == doctest::Approx(0.29742945912115309).epsilon(1e-12));
    CHECK(result.scores[2] == doctest::Approx(0.12964462680584442).epsilon(1e-12));

    CHECK(result.best_index == 0);
    const Position p = locate_bayes(db, reference_scan());
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
}

TEST_CASE("bayes posterior rows always sum to one") {
    const FingerprintDatabase db = reference_db();
    for (double a : {-45.0, -52.0, -70.0, -110.0}) {
        for (double b : {-50.0, -60.0, -90.0}) {
            RssiScan scan;
            scan.add("A", a);
            scan.add("B", b);
            const BayesResult result = bayes_posteriors(db, scan);
            for (const auto& row : result.posteriors) {
                double sum = 0.0;
                for (double v : row) sum += v;
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("bayes floors tiny variances at 1 dB^2") {
    FingerprintDatabase sharp;
    sharp.add(make_fp({0.0, 0.0}, {{"A", {-50.0, 0.04, 5}}}));
    sharp.add(make_fp({4.0, 0.0}, {{"A", {-56.0, 0.2, 5}}}));
    FingerprintDatabase floored;
    floored.add(make_fp({0.0, 0.0}, {{"A", {-50.0, 1.0, 5}}}));
    floored.add(make_fp({4.0, 0.0}, {{"A", {-56.0, 1.0, 5}}}));

    RssiScan scan;
    scan.add("A", -53.5);
    const BayesResult a = bayes_posteriors(sharp, scan);
    const BayesResult b = bayes_posteriors(floored, scan);
    REQUIRE(a.scores.size() == b.scores.size());
    for (std::size_t i = 0; i < a.scores.size(); ++i) {
        CHECK(a.scores[i] == doctest::Approx(b.scores[i]).epsilon(1e-15));
    }
}

TEST_CASE("bayes handles fingerprints missing an anchor") {
    FingerprintDatabase db;
    db.add(make_fp({0.0, 0.0}, {{"A", {-50.0, 1.0, 5}}}));
    db.add(make_fp({4.0, 0.0}, {{"A", {-58.0, 1.0, 5}}, {"B", {-60.0, 1.0, 5}}}));

    RssiScan scan;
    scan.add("A", -50.0);
    scan.add("B", -60.0);
    const BayesResult result = bayes_posteriors(db, scan);
    REQUIRE(result.posteriors.size() == 2);
    // Only fp1 heard B, so it takes that whole row.
    CHECK(result.posteriors[1][0] == 0.0);
    CHECK(result.posteriors[1][1] == 1.0);
    double row_sum = result.posteriors[0][0] + result.posteriors[0][1];
    CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bayes resolves score ties by database order") {
    FingerprintDatabase db;
    db.add(make_fp({0.0, 0.0}, {{"A", {-52.0, 1.0, 5}}}));
    db.add(make_fp({4.0, 0.0}, {{"A", {-48.0, 1.0, 5}}}));
    RssiScan scan;
    scan.add("A", -50.0); // equidistant from both means
    const BayesResult result = bayes_posteriors(db, scan);
    CHECK(result.scores[0] == doctest::Approx(result.scores[1]).epsilon(1e-15));
    CHECK(result.best_index == 0);
}

TEST_CASE("bayes failure modes") {
    const FingerprintDatabase db = reference_db();
    RssiScan lonely;
    lonely.add("Z", -50.0);
    CHECK_LOCUS_ERROR(bayes_posteriors(db, lonely), no_common_anchors);
    CHECK_LOCUS_ERROR(bayes_posteriors(FingerprintDatabase{}, lonely), empty_survey);
    CHECK_LOCUS_ERROR(locate_bayes(db, RssiScan{}), no_common_anchors);
}

TEST_CASE("bayes survives far-off scans without underflowing to nan") {
    FingerprintDatabase db;
    db.add(make_fp({0.0, 0.0}, {{"A", {-30.0, 1.0, 5}}}));
    db.add(make_fp({4.0, 0.0}, {{"A", {-31.0, 1.0, 5}}}));
    RssiScan scan;
    scan.add("A", -120.0); // ~90 sigma away: raw densities underflow to 0
    const BayesResult result = bayes_posteriors(db, scan);
    double sum = 0.0;
    for (double v : result.posteriors[0]) {
        CHECK(std::isfinite(v));
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.best_index == 1);
}

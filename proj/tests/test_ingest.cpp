#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "locus/ingest.hpp"
#include "locus/io.hpp"

using namespace locus;

namespace {

std::string data_path(const char* name) {
    return std::string(LOCUS_TEST_DATA_DIR) + "/" + name;
}

} // namespace

TEST_CASE("trailing moving average warms up from the start of the series") {
    const std::vector<double> out = moving_average({-50.0, -60.0, -50.0}, 2);
    CHECK(out == std::vector<double>{-50.0, -55.0, -55.0});

    // Window 1 is the identity.
    const std::vector<double> same = moving_average({-48.0, -51.5, -47.0}, 1);
    CHECK(same == std::vector<double>{-48.0, -51.5, -47.0});

    // A window longer than the series yields running prefix means.
    const std::vector<double> prefix = moving_average({-40.0, -50.0, -60.0}, 100);
    CHECK(prefix[0] == -40.0);
    CHECK(prefix[1] == -45.0);
    CHECK(prefix[2] == -50.0);

    CHECK_LOCUS_ERROR(moving_average({}, 3), empty_series);
    CHECK_LOCUS_ERROR(moving_average({-50.0}, 0), config_invalid);
    CHECK_LOCUS_ERROR(moving_average({-50.0}, -2), config_invalid);
}

TEST_CASE("golden survey stream reduces to the pinned moving averages") {
    // 20 interleaved readings for three anchors at one position; expected
    // values pinned from an independent evaluation of the same series.
    const auto records = io::load_scan_csv(data_path("survey_golden.csv"));
    REQUIRE(records.size() == 60);

    const auto groups = group_survey(records);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].position.x == 2.5);
    CHECK(groups[0].position.y == 1.5);
    REQUIRE(groups[0].by_anchor.size() == 3);
    CHECK(groups[0].by_anchor[0].first == "ap1");
    CHECK(groups[0].by_anchor[1].first == "ap2");
    CHECK(groups[0].by_anchor[2].first == "ap3");
    for (const auto& [id, series] : groups[0].by_anchor) {
        CHECK(series.size() == 20);
    }

    CHECK(moving_average(groups[0].by_anchor[0].second, 10).back() == -50.44498558243637);
    CHECK(moving_average(groups[0].by_anchor[1].second, 10).back() == -63.25);
    CHECK(moving_average(groups[0].by_anchor[2].second, 10).back() == -71.65358185854703);

    CHECK(mean(groups[0].by_anchor[0].second) == -50.1593168517532);
    CHECK(mean(groups[0].by_anchor[1].second) == -63.2375);
    CHECK(mean(groups[0].by_anchor[2].second) == -71.68929092927351);
}

TEST_CASE("stream reduction yields one reading per anchor") {
    const auto records = io::load_scan_csv(data_path("stream_golden.csv"));
    REQUIRE(records.size() == 60);

    const RssiScan settled = reduce_stream(records, 10, Reduce::final_value);
    REQUIRE(settled.size() == 3);
    CHECK(settled.entries()[0].first == "ap1");
    CHECK(settled.get("ap1") == -50.44498558243637);
    CHECK(settled.get("ap2") == -63.25);
    CHECK(settled.get("ap3") == -71.65358185854703);

    const RssiScan averaged = reduce_stream(records, 10, Reduce::mean_value);
    CHECK(averaged.get("ap1") == -50.1593168517532);
    CHECK(averaged.get("ap2") == -63.2375);
    CHECK(averaged.get("ap3") == -71.68929092927351);

    CHECK_LOCUS_ERROR(reduce_stream({}, 10, Reduce::final_value), empty_sequence);
}

TEST_CASE("records are ordered by seq before smoothing") {
    std::vector<ScanRecord> records;
    ScanRecord rec;
    rec.anchor_id = "a";
    rec.tech = "t";
    rec.seq = 2;
    rec.rssi = -70.0;
    records.push_back(rec);
    rec.seq = 0;
    rec.rssi = -50.0;
    records.push_back(rec);
    rec.seq = 1;
    rec.rssi = -60.0;
    records.push_back(rec);

    // In seq order the series is -50,-60,-70; the settled 2-window mean is
    // -65 regardless of arrival order.
    const RssiScan scan = reduce_stream(records, 2, Reduce::final_value);
    CHECK(scan.get("a") == -65.0);
}

TEST_CASE("survey grouping needs positions on every record") {
    const auto records = io::load_scan_csv(data_path("stream_golden.csv"));
    CHECK_LOCUS_ERROR(group_survey(records), missing_position_label);
}

TEST_CASE("survey grouping keeps distinct positions apart") {
    std::vector<ScanRecord> records;
    ScanRecord rec;
    rec.anchor_id = "a";
    rec.tech = "t";
    rec.has_position = true;
    rec.seq = 0;
    rec.position = {1.0, 1.0};
    rec.rssi = -50.0;
    records.push_back(rec);
    rec.seq = 1;
    rec.position = {2.0, 1.0};
    rec.rssi = -70.0;
    records.push_back(rec);
    rec.seq = 2;
    rec.position = {1.0, 1.0};
    rec.rssi = -52.0;
    records.push_back(rec);

    const auto groups = group_survey(records);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].position.x == 1.0);
    CHECK(groups[0].by_anchor[0].second == std::vector<double>{-50.0, -52.0});
    CHECK(groups[1].position.x == 2.0);
    CHECK(groups[1].by_anchor[0].second == std::vector<double>{-70.0});
}

TEST_CASE("smoothed samples feed database construction") {
    const auto records = io::load_scan_csv(data_path("survey_golden.csv"));
    const auto groups = group_survey(records);
    const auto samples = smoothed_samples(groups, 10);
    REQUIRE(samples.size() == 60);
    for (const auto& s : samples) {
        CHECK(is_valid_rssi(s.rssi));
    }

    const FingerprintDatabase db = build_database(samples);
    REQUIRE(db.size() == 1);
    CHECK(db.at(0).stats.at("ap1").count == 20);
    // The last smoothed value matches the stream reduction above.
    CHECK(db.at(0).stats.count("ap2") == 1);
    CHECK(db.at(0).stats.count("ap3") == 1);
}

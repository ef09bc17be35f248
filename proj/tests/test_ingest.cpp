#include <doctest.h>

#include "quasipd/error.hpp"
#include "quasipd/ingest.hpp"
#include "quasipd/plot.hpp"
#include "support.hpp"

using namespace quasipd;
using testing::scratch_dir;
using testing::write_file;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Input;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("segment csv") {
    const auto dir = scratch_dir("ingest_segment");
    write_file(dir / "a.csv", "month,E,NPL\n2019-01,100,10\n2019-02,101,11\n2019-03,103,12\n");
    const auto s = load_segment_csv(dir / "a.csv", "a");
    CHECK(s.size() == 3);
    CHECK(*s.NPL[2] == 12.0);

    write_file(dir / "b.csv", "month,E,NPL\n2019-01,100,10\n2019-02,100,120\n");
    try {
        (void)load_segment_csv(dir / "b.csv", "b");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Input);
        CHECK(std::string(e.what()).find("2019-02") != std::string::npos);
    }

    write_file(dir / "c.csv", "month,E,NPL\n2019-03,103,12\n2019-01,100,10\n");
    const auto c = load_segment_csv(dir / "c.csv", "c");
    CHECK(c.size() == 3);
    CHECK_FALSE(c.E[1].has_value());
    CHECK(c.start().to_string() == "2019-01");

    write_file(dir / "d.csv", "month,E,NPL\n2019-01,100,10\n2019-01,100,10\n");
    CHECK(kind_of([&] { (void)load_segment_csv(dir / "d.csv", "d"); }) == ErrorKind::Input);
    write_file(dir / "e.csv", "month,E\n2019-01,100\n");
    CHECK(kind_of([&] { (void)load_segment_csv(dir / "e.csv", "e"); }) == ErrorKind::Input);
    write_file(dir / "f.csv", "month,E,NPL\n2019-01,abc,10\n");
    CHECK(kind_of([&] { (void)load_segment_csv(dir / "f.csv", "f"); }) == ErrorKind::Input);
    CHECK(kind_of([&] { (void)load_segment_csv(dir / "missing.csv", "x"); }) == ErrorKind::Io);
}

TEST_CASE("reference df csv") {
    const auto dir = scratch_dir("ingest_df");
    write_file(dir / "ok.csv", "month,DF\n2019-01,0.035\n");
    const auto r = load_reference_df_csv(dir / "ok.csv", "x");
    CHECK(r.DF.size() == 1);
    CHECK(*r.DF[0] == 0.035);
    write_file(dir / "hi.csv", "month,DF\n2019-01,1.5\n");
    CHECK_THROWS_AS(load_reference_df_csv(dir / "hi.csv", "x"), Error);
    write_file(dir / "lo.csv", "month,DF\n2019-01,-0.01\n");
    CHECK_THROWS_AS(load_reference_df_csv(dir / "lo.csv", "x"), Error);
}

TEST_CASE("weights csv") {
    const auto dir = scratch_dir("ingest_weights");
    write_file(dir / "ok.csv", "segment_id,weight\nmining,0.2\nbuilding,0.8\n");
    const auto w = load_weights_csv(dir / "ok.csv");
    REQUIRE(w.size() == 2);
    CHECK(w[0].segment_id == "mining");
    CHECK(w[1].weight == 0.8);
    write_file(dir / "zero.csv", "segment_id,weight\nmining,0\nbuilding,0\n");
    CHECK_THROWS_AS(load_weights_csv(dir / "zero.csv"), Error);
    write_file(dir / "neg.csv", "segment_id,weight\nmining,-0.1\n");
    CHECK_THROWS_AS(load_weights_csv(dir / "neg.csv"), Error);
    write_file(dir / "dup.csv", "segment_id,weight\nmining,1\nmining,2\n");
    CHECK_THROWS_AS(load_weights_csv(dir / "dup.csv"), Error);
}

TEST_CASE("written csv files read back unchanged") {
    const auto dir = scratch_dir("ingest_roundtrip");
    synth::XorShift64Star rng(14);
    std::vector<Observation> a, b;
    for (int i = 0; i < 30; ++i) {
        a.emplace_back(rng.uniform() * std::pow(10.0, static_cast<int>(rng.next() % 12) - 6));
        b.emplace_back(i % 7 == 3 ? Observation{} : Observation{1000.0 * rng.uniform()});
    }
    const MonthlySeries sa(MonthIndex(2010, 5), a), sb(MonthIndex(2010, 5), b);
    write_monthly_csv(dir / "t.csv", {"A", "B"}, {sa, sb});
    const auto t = load_monthly_table(dir / "t.csv");
    REQUIRE(t.columns == std::vector<std::string>{"A", "B"});
    for (int i = 0; i < 30; ++i) {
        CHECK(*t.get("A")[i] == doctest::Approx(*a[i]).epsilon(1e-9));
        CHECK(t.get("B")[i].has_value() == b[i].has_value());
    }
    // a second write of what was read is byte-identical
    write_monthly_csv(dir / "u.csv", {"A", "B"}, {t.get("A"), t.get("B")});
    CHECK(testing::read_file(dir / "t.csv") == testing::read_file(dir / "u.csv"));

    const auto seg = SegmentSeries::make("s", testing::dense("2019-01", {100, 101.5}), testing::dense("2019-01", {10, 12.25}));
    write_segment_csv(dir / "seg.csv", seg);
    const auto back = load_segment_csv(dir / "seg.csv", "s");
    CHECK(back.E == seg.E);
    CHECK(back.NPL == seg.NPL);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333");
    CHECK(format_number(1234567.0) == "1234567");
    CHECK(format_number(2.5e-12) == "2.5e-12");
}

TEST_CASE("unwritable path is an IO error") {
    CHECK(kind_of([] { write_text_file("/proc/quasipd/none.txt", "x"); }) == ErrorKind::Io);
}

TEST_CASE("manifest resolves paths next to itself") {
    const auto dir = scratch_dir("ingest_manifest");
    write_file(dir / "m.json", R"({"segments": {"b": "x/b.csv", "a": "/abs/a.csv"}, "weights": "w.csv", "config": {"filter": {"rr": 0.3}}})");
    const auto m = load_manifest(dir / "m.json");
    CHECK(m.segment_ids() == std::vector<std::string>{"b", "a"});
    CHECK(*m.segment_path("b") == dir / "x/b.csv");
    CHECK(*m.segment_path("a") == "/abs/a.csv");
    CHECK_FALSE(m.segment_path("c").has_value());
    CHECK(*m.weights == dir / "w.csv");
    CHECK_FALSE(m.factors.has_value());
    CHECK(m.config["filter"]["rr"] == 0.3);
    write_file(dir / "bad.json", "{nope");
    CHECK(kind_of([&] { (void)load_manifest(dir / "bad.json"); }) == ErrorKind::Input);
    CHECK(kind_of([&] { (void)load_manifest(dir / "absent.json"); }) == ErrorKind::Io);
}

}

TEST_SUITE("plot") {

TEST_CASE("svg has one polyline per series and no external references") {
    const std::vector<PlotLine> lines{{"PD", testing::dense("2019-01", {0.01, 0.02, 0.015, 0.03})},
                                      {"DF", MonthlySeries(MonthIndex(2019, 2), {0.012, std::nullopt, 0.02})}};
    const std::string svg = render_svg_line_chart(lines, "t");
    CHECK(svg.rfind("<svg", 0) == 0);
    std::size_t count = 0;
    for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++count;
    CHECK(count == 2);
    CHECK(svg.find("href") == std::string::npos);
    CHECK(svg.find("2019") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("gnuplot data lists every month of the union span") {
    const std::vector<PlotLine> lines{{"PD", testing::dense("2019-01", {0.01, 0.02})},
                                      {"DF", testing::dense("2019-02", {0.5, 0.6})}};
    const std::string dat = render_gnuplot_data(lines);
    CHECK(dat.find("2019-01") != std::string::npos);
    CHECK(dat.find("2019-03") != std::string::npos);
    CHECK(dat.find("NaN") != std::string::npos);
}

}

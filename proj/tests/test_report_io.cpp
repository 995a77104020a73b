#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmcqoi/report_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace qmcqoi;

namespace {

RunReport sample_report() {
    RunReport r;
    const Shape d_s{2, 2};
    MultiArray lo(d_s), hi(d_s);
    r.s_hat = MultiArray(d_s);
    for (std::size_t l = 0; l < 4; ++l) {
        lo[l] = 0.1 * double(l);
        hi[l] = 0.1 * double(l) + 0.05;
        r.s_hat[l] = 0.1 * double(l) + 0.025;
    }
    hi[3] = std::numeric_limits<double>::infinity();
    r.s_hat[3] = std::numeric_limits<double>::quiet_NaN();
    r.s_bounds = BoundsArray(lo, hi);
    MultiArray mlo(Shape{4}, -1.0), mhi(Shape{4}, 1.0);
    r.mu_bounds = BoundsArray(mlo, mhi);
    r.converged = FlagArray(d_s, true);
    r.converged.set(3, false);
    r.n_total = 1024;
    r.sequences_used = 16;
    r.eval_counts = {1024, 1024, 512, 512};
    r.iterations = 3;
    r.budget_exhausted = true;
    r.wall_time = 0.5;
    return r;
}

std::string render(const RunReport& r, ReportFormat f) {
    std::ostringstream out;
    write_report(out, r, f);
    return out.str();
}

} // namespace

TEST_CASE("json output round-trips and encodes non-finite values as strings") {
    const RunReport r = sample_report();
    const auto j = nlohmann::json::parse(render(r, ReportFormat::Json));
    CHECK(j["shape_s"] == nlohmann::json({2, 2}));
    CHECK(j["shape_mu"] == nlohmann::json({4}));
    CHECK(j["s_hat"][0] == doctest::Approx(0.025));
    CHECK(j["s_hat"][3] == "nan");
    CHECK(j["s_hi"][3] == "inf");
    CHECK(j["s_lo"][3] == doctest::Approx(0.3));
    CHECK(j["converged"] == nlohmann::json({true, true, true, false}));
    CHECK(j["n_total"] == 1024);
    CHECK(j["sequences_used"] == 16);
    CHECK(j["eval_counts"] == nlohmann::json({1024, 1024, 512, 512}));
    CHECK(j["iterations"] == 3);
    CHECK(j["budget_exhausted"] == true);
    CHECK(j.contains("wall_time"));
    // wall_time is the last key so diffs modulo timing stay trivial
    const std::string text = render(r, ReportFormat::Json);
    CHECK(text.rfind("wall_time") > text.rfind("budget_exhausted"));
}

TEST_CASE("json output is deterministic apart from wall_time") {
    RunReport a = sample_report();
    RunReport b = sample_report();
    b.wall_time = 123.0;
    auto strip = [](std::string s) {
        const auto pos = s.find("wall_time");
        return s.substr(0, pos);
    };
    CHECK(render(a, ReportFormat::Json) == render(a, ReportFormat::Json));
    CHECK(strip(render(a, ReportFormat::Json)) == strip(render(b, ReportFormat::Json)));
}

TEST_CASE("csv output has one dotted-index row per QOI") {
    const std::string text = render(sample_report(), ReportFormat::Csv);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,s_hat,s_lo,s_hi,converged");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].substr(0, 4) == "1.1,");
    CHECK(rows[1].substr(0, 4) == "1.2,");
    CHECK(rows[2].substr(0, 4) == "2.1,");
    CHECK(rows[3].substr(0, 4) == "2.2,");
    CHECK(rows[0].back() == '1');
    CHECK(rows[3].back() == '0');
}

TEST_CASE("emit_report writes files and rejects bad paths") {
    const RunReport r = sample_report();
    const std::string path = "report_io_test.json";
    emit_report(path, r, ReportFormat::Json);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == render(r, ReportFormat::Json));
    std::remove(path.c_str());
    CHECK_THROWS_AS(emit_report("no_such_dir/out.json", r, ReportFormat::Json),
                    std::runtime_error);
}

TEST_CASE("exit codes") {
    RunReport r = sample_report();
    CHECK(report_exit_code(r) == 2);
    r.converged.set(3, true);
    CHECK(report_exit_code(r) == 0);
}

#include "seqesc/errors.hpp"
#include "seqesc/output.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace seqesc;

TEST_CASE("header line and CSV layout", "[output]") {
    RunHeader h{"limits", {{"nu", 0.2}, {"alpha", 0.05}}, 17};
    const auto line = header_line(h);
    CHECK(line.find('\n') == std::string::npos);
    const auto parsed = nlohmann::json::parse(line);
    CHECK(parsed["tool"] == "seqesc");
    CHECK(parsed["seed"] == 17);
    CHECK(parsed["config"]["nu"] == 0.2);

    Table t;
    t.columns = {"a", "b"};
    t.add_row({format_number(0.1), format_number(1e-300)});
    CHECK_THROWS_AS(t.add_row({"1"}), DomainError);
    std::ostringstream os;
    write_csv(os, h, t);
    std::istringstream is(os.str());
    std::string first, second, third;
    std::getline(is, first);
    std::getline(is, second);
    std::getline(is, third);
    CHECK(first == line);
    CHECK(second == "a,b");
    CHECK(third == "0.1,1e-300");

    std::ostringstream again;
    write_csv(again, h, t);
    CHECK(again.str() == os.str());
}

TEST_CASE("numbers round-trip", "[output]") {
    for (double v : {0.1, 1.0 / 3.0, 121.63847592308342, -2.5e-17}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("statistics and trajectory dumps", "[output]") {
    SimConfig cfg;
    cfg.ensemble = 3;
    cfg.h = 2e-3;
    cfg.t_max = 3000;
    const auto stats = run_ensemble(NetworkSpec::disconnected(1), {0.2, 0.0, 0.07}, cfg, 1);
    const auto j = to_json(stats);
    CHECK(j["pairs"][0]["n"] == 3);
    CHECK(j["pairs"][0]["samples"].size() == 3);

    cfg.record_path = true;
    cfg.sample_stride = 100;
    const auto rec = simulate_escape(NetworkSpec::disconnected(2), {0.2, 0.0, 0.07}, cfg, 0);
    const auto table = trajectory_table(rec);
    CHECK(table.columns == std::vector<std::string>{"t", "re_z1", "im_z1", "re_z2", "im_z2"});
    CHECK(table.rows.size() == rec.path.size());
}

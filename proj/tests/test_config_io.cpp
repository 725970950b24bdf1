#include <doctest.h>

#include "abcstar/config.hpp"
#include "abcstar/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace abcstar;

TEST_SUITE_BEGIN("config_io");

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("config parsing with defaults and errors") {
    const std::string path = temp_path("abcstar_cfg.json");
    {
        std::ofstream out(path);
        out << R"({
          "seed": 99,
          "model": {"name": "normal", "n": 60, "theta0": [1.0],
                    "prior": {"sigma2": [0.2, 4.0]}},
          "tests": [{"kind": "chi2_dispersion", "alpha": 0.01}],
          "sampler": {"algorithm": "rejection", "iterations": 1000}
        })";
    }
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.seed == 99);
    CHECK(cfg.model.name == "normal");
    CHECK(cfg.model.n == 60);
    CHECK(cfg.tests.size() == 1);
    CHECK(cfg.calibration.target_power == 0.9);
    CHECK(cfg.sampler.iterations == 1000);
    CHECK(config_echo(cfg).find("# seed = 99") != std::string::npos);

    // seed is mandatory
    {
        std::ofstream out(path);
        out << R"({"model": {"name": "normal"}})";
    }
    CHECK_THROWS_AS(load_config(path), config_error);
    // unknown model
    {
        std::ofstream out(path);
        out << R"({"seed": 1, "model": {"name": "weird"}})";
    }
    CHECK_THROWS_AS(load_config(path), config_error);
    CHECK_THROWS_AS(load_config("/nonexistent/nope.json"), config_error);
    std::remove(path.c_str());
}

TEST_CASE("calibration report round trip is bit exact") {
    CalibrationReport r;
    r.config.kind = TestKind::ChiSqDispersion;
    r.config.n = 60;
    r.config.m = 107;
    r.config.alpha = 0.01;
    r.config.s2x = 60.0;
    r.config.tolerance = {0.58675537109375, 1.7556152343749994, 1.0};
    r.critical = {1.3963529666141327, 2.1970768426730844, 0.01};
    r.m = 107;
    r.predicted_kl = 0.008432769646436379;
    r.power_at_rho_star = 0.89999250403827;
    r.power_mode = 1.0000218749999967;
    r.converged = true;
    r.settings.rho_support = Interval(0.2, 4.0);
    const std::string path = temp_path("abcstar_report.json");
    write_calibration_report(r, path);
    const CalibrationReport q = read_calibration_report(path);
    CHECK(q.config.tolerance.tau_minus == r.config.tolerance.tau_minus);
    CHECK(q.config.tolerance.tau_plus == r.config.tolerance.tau_plus);
    CHECK(q.critical.c_minus == r.critical.c_minus);
    CHECK(q.critical.c_plus == r.critical.c_plus);
    CHECK(q.predicted_kl == r.predicted_kl);
    CHECK(q.m == r.m);
    std::remove(path.c_str());
}

TEST_CASE("draws csv format") {
    std::vector<Draw> draws;
    draws.push_back({{1.5}, {0.7071067811865475244}, true});
    draws.push_back({{2.25}, {1.0}, false});
    const std::string path = temp_path("abcstar_draws.csv");
    write_draws_csv(draws, 1, 1, path, "# seed = 5\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# seed = 5");
    std::getline(in, line);
    CHECK(line == "iteration,theta0,z0,accepted");
    std::getline(in, line);
    CHECK(line.find("0,1.5,0.70710678118654757,1") == 0);
    std::remove(path.c_str());
}

TEST_CASE("series csv round trip") {
    const std::string path = temp_path("abcstar_series.csv");
    std::vector<double> v{0.5, -1.25, 3.0e-17};
    write_series_csv(v, "series_x", path);
    const auto back = read_series_csv(path);
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(back[i] == v[i]);
    std::remove(path.c_str());
}

TEST_CASE("binning hash is stable and sensitive") {
    const auto h1 = binning_hash(Interval(0.2, 4.0), Interval(0, 0), 100, 1);
    const auto h2 = binning_hash(Interval(0.2, 4.0), Interval(0, 0), 100, 1);
    const auto h3 = binning_hash(Interval(0.2, 4.0), Interval(0, 0), 101, 1);
    CHECK(h1 == h2);
    CHECK(h1 != h3);
}

TEST_SUITE_END();

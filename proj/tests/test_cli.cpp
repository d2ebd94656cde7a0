#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"
#include "losscal/csv_io.hpp"
#include "losscal/grid.hpp"
#include "losscal/loss_matrix.hpp"

namespace fs = std::filesystem;
using namespace losscal;

namespace {

std::string g_cli;
std::string g_configs;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    RunResult result;
    const std::string cmd = "'" + g_cli + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof(buf), pipe) != nullptr) {
        result.out += buf;
    }
    const int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    result.code = WEXITSTATUS(status);
    return result;
}

fs::path temp_path(const std::string& name) {
    return fs::temp_directory_path() / name;
}

struct PathGuard {
    fs::path path;
    ~PathGuard() { fs::remove_all(path); }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("calibrate picks the first grid point on an all-zero matrix") {
    const fs::path matrix_path = temp_path("cli_zeros.csv");
    const fs::path out_dir = temp_path("cli_zeros_out");
    PathGuard g1{matrix_path};
    PathGuard g2{out_dir};
    const ParamGrid grid = ParamGrid::linspace(0.0, 1.0, 0.25);
    write_loss_matrix_csv(matrix_path,
                          compute_loss_matrix(20, grid, [](std::size_t, const GridPoint&) {
                              return 0.0;
                          }));

    const RunResult r = run_cli("calibrate --matrix '" + matrix_path.string() +
                                "' --alpha 0.1 --delta 0.1 --out '" + out_dir.string() + "'");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "lambda* = 0 (index 0)"));
    CHECK(contains(r.out, "feasible points: 5 of 5"));

    const auto report = nlohmann::json::parse(slurp(out_dir / "calibration.json"));
    CHECK(report.at("lambda_index").get<std::size_t>() == 0);
    CHECK(report.at("lambda_star").get<std::vector<double>>() == std::vector<double>{0.0});
    CHECK(report.at("feasible_indices").get<std::vector<std::size_t>>().size() == 5);
    CHECK(report.at("search").get<std::string>() == "min");

    const std::string quantiles = slurp(out_dir / "quantiles.csv");
    CHECK(contains(quantiles, "lambda,quantile\n"));
    CHECK(contains(quantiles, "0.25,0\n"));
}

TEST_CASE("calibrate finds the 0.8 threshold on a constant-column matrix") {
    const fs::path matrix_path = temp_path("cli_const.csv");
    const fs::path out_a = temp_path("cli_const_a");
    const fs::path out_b = temp_path("cli_const_b");
    PathGuard g1{matrix_path};
    PathGuard g2{out_a};
    PathGuard g3{out_b};
    const ParamGrid grid = ParamGrid::linspace(0.0, 1.0, 0.01);
    write_loss_matrix_csv(matrix_path,
                          compute_loss_matrix(20, grid, [](std::size_t, const GridPoint& p) {
                              return std::max(0.0, 0.9 - p[0]);
                          }));

    const std::string args = "calibrate --matrix '" + matrix_path.string() +
                             "' --alpha 0.1 --delta 0.1 --search min";
    const RunResult r = run_cli(args + " --out '" + out_a.string() + "'");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "lambda* = 0.8 (index 80)"));
    CHECK(contains(r.out, "feasible points: 21 of 101"));

    const RunResult r2 = run_cli(args + " --out '" + out_b.string() + "'");
    CHECK(r2.code == 0);
    CHECK(slurp(out_a / "calibration.json") == slurp(out_b / "calibration.json"));
    CHECK(slurp(out_a / "quantiles.csv") == slurp(out_b / "quantiles.csv"));
}

TEST_CASE("calibrate exit codes split by failure class") {
    const fs::path matrix_path = temp_path("cli_ones.csv");
    PathGuard g1{matrix_path};
    const ParamGrid grid = ParamGrid::linspace(0.0, 1.0, 0.5);
    write_loss_matrix_csv(matrix_path,
                          compute_loss_matrix(20, grid, [](std::size_t, const GridPoint&) {
                              return 1.0;
                          }));

    SUBCASE("missing input file") {
        const RunResult r = run_cli("calibrate --matrix '" +
                                    temp_path("cli_not_there.csv").string() + "' --alpha 0.1");
        CHECK(r.code == 3);
        CHECK(contains(r.out, "no such input"));
    }
    SUBCASE("delta outside (0,1)") {
        const RunResult r = run_cli("calibrate --matrix '" + matrix_path.string() +
                                    "' --alpha 0.1 --delta 1.5");
        CHECK(r.code == 2);
        CHECK(contains(r.out, "delta"));
    }
    SUBCASE("unknown search name") {
        const RunResult r = run_cli("calibrate --matrix '" + matrix_path.string() +
                                    "' --alpha 0.1 --search widest");
        CHECK(r.code == 2);
        CHECK(contains(r.out, "unknown search 'widest'"));
    }
    SUBCASE("no feasible point") {
        const RunResult r = run_cli("calibrate --matrix '" + matrix_path.string() +
                                    "' --alpha 0.5 --delta 0.1");
        CHECK(r.code == 4);
        CHECK(contains(r.out, "no feasible lambda"));
    }
    SUBCASE("missing subcommand") {
        const RunResult r = run_cli("");
        CHECK(r.code == 2);
    }
}

TEST_CASE("validate runs the bundled ideal-mode toy config within tolerance") {
    const fs::path out_a = temp_path("cli_toy_a");
    const fs::path out_b = temp_path("cli_toy_b");
    PathGuard g1{out_a};
    PathGuard g2{out_b};
    const std::string config = "'" + (fs::path(g_configs) / "ideal-mode-toy.json").string() + "'";

    const RunResult r = run_cli("validate --config " + config + " --out '" + out_a.string() + "'");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "violation rate"));

    const auto est = nlohmann::json::parse(slurp(out_a / "estimate.json"));
    CHECK(est.at("mode").get<std::string>() == "ideal");
    CHECK(est.at("trials").get<std::size_t>() == 400);
    CHECK(est.at("violation_rate").get<double>() <=
          est.at("delta").get<double>() + est.at("tolerance").get<double>());
    CHECK(est.at("inclusion_violations").get<std::size_t>() == 0);

    const RunResult r2 = run_cli("validate --config " + config + " --out '" + out_b.string() +
                                 "'");
    CHECK(r2.code == 0);
    CHECK(slurp(out_a / "estimate.json") == slurp(out_b / "estimate.json"));
}

TEST_CASE("validate rejects configs with unknown or misplaced keys") {
    const fs::path config_path = temp_path("cli_bad_config.json");
    PathGuard g1{config_path};

    SUBCASE("unknown key") {
        write_text(config_path,
                   "{\"operation\": \"monte-carlo\", \"family\": \"selective\", \"depth\": 3}\n");
        const RunResult r = run_cli("validate --config '" + config_path.string() + "'");
        CHECK(r.code == 2);
        CHECK(contains(r.out, "unknown key 'depth'"));
    }
    SUBCASE("unknown operation") {
        write_text(config_path, "{\"operation\": \"bootstrap\"}\n");
        const RunResult r = run_cli("validate --config '" + config_path.string() + "'");
        CHECK(r.code == 2);
        CHECK(contains(r.out, "operation"));
    }
    SUBCASE("alphas on a single-loss family") {
        write_text(config_path,
                   "{\"operation\": \"monte-carlo\", \"family\": \"selective\", "
                   "\"alphas\": [0.1, 0.2]}\n");
        const RunResult r = run_cli("validate --config '" + config_path.string() + "'");
        CHECK(r.code == 2);
        CHECK(contains(r.out, "alphas"));
    }
    SUBCASE("model block on the segmentation family") {
        write_text(config_path,
                   "{\"operation\": \"monte-carlo\", \"family\": \"segmentation\", "
                   "\"model\": {\"trees\": 5}}\n");
        const RunResult r = run_cli("validate --config '" + config_path.string() + "'");
        CHECK(r.code == 2);
        CHECK(contains(r.out, "model"));
    }
    SUBCASE("missing config file") {
        const RunResult r = run_cli("validate --config '" +
                                    temp_path("cli_no_config.json").string() + "'");
        CHECK(r.code == 3);
        CHECK(contains(r.out, "no such input"));
    }
}

TEST_CASE("validate split experiment writes a report matching the sweep axes") {
    const fs::path config_path = temp_path("cli_split_config.json");
    const fs::path out_dir = temp_path("cli_split_out");
    PathGuard g1{config_path};
    PathGuard g2{out_dir};
    write_text(config_path,
               "{\n"
               "  \"operation\": \"split\",\n"
               "  \"family\": \"selective\",\n"
               "  \"alphas\": [0.02, 0.05],\n"
               "  \"deltas\": [0.1, 0.2],\n"
               "  \"grid\": \"0:1:0.05\",\n"
               "  \"repeats\": 2,\n"
               "  \"seed\": 3,\n"
               "  \"n\": 300,\n"
               "  \"model\": {\"trees\": 10}\n"
               "}\n");

    const RunResult r = run_cli("validate --config '" + config_path.string() + "' --out '" +
                                out_dir.string() + "'");
    CHECK(r.code == 0);

    const auto report = nlohmann::json::parse(slurp(out_dir / "report.json"));
    CHECK(report.at("family").get<std::string>() == "selective");
    CHECK(report.at("alphas").get<std::vector<double>>() == std::vector<double>{0.02, 0.05});
    CHECK(report.at("deltas").get<std::vector<double>>() == std::vector<double>{0.1, 0.2});
    CHECK(report.at("cells").size() == 2 * 2 * 2);
    CHECK(report.at("summaries").size() == 2 * 2);

    const std::string cells = slurp(out_dir / "cells.csv");
    CHECK(std::count(cells.begin(), cells.end(), '\n') == 1 + 2 * 2 * 2);
    CHECK(contains(slurp(out_dir / "summary.csv"),
                   "alpha,delta,feasible_repeats,mean_lambda,mean_violation,mean_efficiency\n"));
}

TEST_CASE("demo segmentation reports normalized sizes inside the unit interval") {
    const fs::path out_dir = temp_path("cli_demo_seg");
    PathGuard g1{out_dir};
    const RunResult r = run_cli("demo segmentation --n 100 --repeats 2 --seed 21 --out '" +
                                out_dir.string() + "'");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "normalized size"));

    const auto report = nlohmann::json::parse(slurp(out_dir / "report.json"));
    REQUIRE(report.at("cells").size() == 2);
    for (const auto& cell : report.at("cells")) {
        if (!cell.at("feasible").get<bool>()) continue;
        const double size = cell.at("efficiency").get<double>();
        CHECK(size >= 0.0);
        CHECK(size <= 1.0);
        const double violation = cell.at("violation_freq").get<double>();
        CHECK(violation >= 0.0);
        CHECK(violation <= 1.0);
    }
}

TEST_CASE("demo multi stays within the joint tolerance band") {
    const fs::path out_dir = temp_path("cli_demo_multi");
    PathGuard g1{out_dir};
    const RunResult r = run_cli("demo multi --trials 120 --rows 61 --seed 19 --out '" +
                                out_dir.string() + "'");
    CHECK(r.code == 0);

    const auto est = nlohmann::json::parse(slurp(out_dir / "estimate.json"));
    CHECK(est.at("trials").get<std::size_t>() == 120);
    CHECK(est.at("violation_rate").get<double>() <=
          est.at("delta").get<double>() + est.at("tolerance").get<double>());
}

int main(int argc, char** argv) {
    std::vector<char*> args(argv, argv + argc);
    if (args.size() >= 3) {
        g_configs = args.back();
        args.pop_back();
        g_cli = args.back();
        args.pop_back();
    }
    if (g_cli.empty() || !fs::exists(g_cli)) {
        std::fprintf(stderr, "usage: test_cli [doctest flags] <losscal binary> <configs dir>\n");
        return 1;
    }
    doctest::Context ctx(static_cast<int>(args.size()), args.data());
    return ctx.run();
}

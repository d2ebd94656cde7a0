#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "losscal/calibration.hpp"
#include "losscal/errors.hpp"

using namespace losscal;

namespace {

LossMatrix constant_column_matrix(std::size_t n) {
    // Every sample's loss at lambda is 1-lambda: nonincreasing along the grid.
    const auto grid = ParamGrid::linspace(0.0, 1.0, 0.01);
    std::vector<double> values;
    values.reserve(n * grid.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < grid.size(); ++k) values.push_back(1.0 - grid[k][0]);
    }
    return LossMatrix(std::move(values), n, grid);
}

LossMatrix random_matrix(std::mt19937_64& gen, std::size_t n, std::size_t cols) {
    const auto grid = ParamGrid::linspace(0.0, 1.0, 1.0 / static_cast<double>(cols - 1));
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(n * grid.size());
    for (auto& v : values) v = dist(gen);
    return LossMatrix(std::move(values), n, grid);
}

}  // namespace

TEST_CASE("control spec validation") {
    CHECK_NOTHROW(ControlSpec(0.1, 0.1, LossBound(1.0)));
    CHECK_THROWS_AS(ControlSpec(std::nan(""), 0.1, LossBound(1.0)), ConfigError);
    CHECK_THROWS_AS(ControlSpec(0.1, 0.0, LossBound(1.0)), ConfigError);
    CHECK_THROWS_AS(ControlSpec(0.1, 1.0, LossBound(1.0)), ConfigError);
}

TEST_CASE("ideal-mode quantiles and selection on a hand-worked 4-row matrix") {
    const auto grid = ParamGrid::from_values({0.0, 0.5, 1.0});
    // Three calibration rows plus the row of the sample under prediction.
    const LossMatrix m({0.9, 0.4, 0.1,    //
                        0.8, 0.3, 0.2,    //
                        0.7, 0.5, 0.0,    //
                        0.95, 0.2, 0.05},
                       4, grid);
    const ControlSpec spec(0.4, 0.25, LossBound(1.0));

    const auto q = feasibility_quantiles_ideal(m, spec);
    REQUIRE(q.size() == 3);
    CHECK(q[0] == 0.9);
    CHECK(q[1] == 0.4);
    CHECK(q[2] == 0.1);

    CHECK(feasible_set_ideal(m, spec) == std::vector<std::size_t>{1, 2});

    const auto rmin = calibrate_ideal(m, spec, SearchFunction::min());
    CHECK(rmin.lambda_star == GridPoint{0.5});
    CHECK(rmin.lambda_index == 1);
    CHECK(rmin.mode == CalibrationMode::Ideal);
    CHECK(rmin.search_name == "min");
    CHECK(rmin.sample_count == 4);

    const auto rmax = calibrate_ideal(m, spec, SearchFunction::max());
    CHECK(rmax.lambda_star == GridPoint{1.0});
}

TEST_CASE("practical quantiles augment with the bound on the same matrix") {
    const auto grid = ParamGrid::from_values({0.0, 0.5, 1.0});
    const LossMatrix m({0.9, 0.4, 0.1,    //
                        0.8, 0.3, 0.2,    //
                        0.7, 0.5, 0.0},
                       3, grid);
    const ControlSpec spec(0.4, 0.25, LossBound(1.0));

    const auto q = feasibility_quantiles(m, spec);
    CHECK(q[0] == 0.9);
    CHECK(q[1] == 0.5);
    CHECK(q[2] == 0.2);

    CHECK(feasible_set(m, spec) == std::vector<std::size_t>{2});
    const auto r = calibrate(m, spec, SearchFunction::min());
    CHECK(r.lambda_star == GridPoint{1.0});
    CHECK(r.mode == CalibrationMode::Practical);
    CHECK(r.sample_count == 3);
}

TEST_CASE("constant-column matrix calibrates to the frozen thresholds") {
    const auto m = constant_column_matrix(100);
    const ControlSpec spec(0.2, 0.1, LossBound(1.0));

    const auto rmin = calibrate(m, spec, SearchFunction::min());
    CHECK(rmin.lambda_index == 80);
    CHECK(rmin.lambda_star[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(rmin.feasible.size() == 21);

    const auto rmax = calibrate(m, spec, SearchFunction::max());
    CHECK(rmax.lambda_index == 100);
    CHECK(rmax.lambda_star[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("singleton grid returns its only point under any search") {
    const auto grid = ParamGrid::from_values({0.3});
    const LossMatrix m({0.05, 0.05, 0.05}, 3, grid);
    const ControlSpec spec(0.5, 0.25, LossBound(1.0));
    for (const auto& s : {SearchFunction::min(), SearchFunction::max(),
                          SearchFunction::first_in_grid_order()}) {
        CHECK(calibrate(m, spec, s).lambda_star == GridPoint{0.3});
    }
}

TEST_CASE("empty feasible set raises with the requested levels in the message") {
    const auto grid = ParamGrid::from_values({0.0, 1.0});
    const LossMatrix m({0.9, 0.9, 0.9, 0.9}, 2, grid);
    const ControlSpec spec(0.1, 0.25, LossBound(1.0));
    try {
        calibrate(m, spec, SearchFunction::min());
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("no feasible lambda") != std::string::npos);
        CHECK(msg.find("alpha=0.1") != std::string::npos);
        CHECK(msg.find("1-delta=0.75") != std::string::npos);
    }
}

TEST_CASE("alpha at or above the bound makes every grid point feasible") {
    std::mt19937_64 gen(5150u);
    const auto m = random_matrix(gen, 20, 11);
    const ControlSpec spec(1.0, 0.1, LossBound(1.0));
    CHECK(feasible_set(m, spec).size() == m.grid().size());
}

TEST_CASE("search containment and determinism on random matrices") {
    std::mt19937_64 gen(20240818u);
    for (int iter = 0; iter < 50; ++iter) {
        const auto m = random_matrix(gen, 30, 21);
        const ControlSpec spec(0.8, 0.2, LossBound(1.0));
        const auto r1 = calibrate(m, spec, SearchFunction::max());
        const auto r2 = calibrate(m, spec, SearchFunction::max());

        CHECK(std::binary_search(r1.feasible.begin(), r1.feasible.end(), r1.lambda_index));
        for (std::size_t idx : r1.feasible) CHECK(r1.quantiles[idx] <= spec.alpha);

        CHECK(r1.lambda_star == r2.lambda_star);
        CHECK(r1.feasible == r2.feasible);
        CHECK(r1.quantiles == r2.quantiles);
    }
}

TEST_CASE("enlarging alpha or delta never shrinks the feasible set") {
    std::mt19937_64 gen(31337u);
    for (int iter = 0; iter < 30; ++iter) {
        const auto m = random_matrix(gen, 25, 16);
        const auto base = feasible_set(m, ControlSpec(0.6, 0.1, LossBound(1.0)));
        const auto wider_alpha = feasible_set(m, ControlSpec(0.7, 0.1, LossBound(1.0)));
        const auto wider_delta = feasible_set(m, ControlSpec(0.6, 0.2, LossBound(1.0)));
        CHECK(std::includes(wider_alpha.begin(), wider_alpha.end(), base.begin(), base.end()));
        CHECK(std::includes(wider_delta.begin(), wider_delta.end(), base.begin(), base.end()));
    }
}

TEST_CASE("practical feasible set is contained in the ideal one") {
    std::mt19937_64 gen(8675309u);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int iter = 0; iter < 40; ++iter) {
        const auto grid = ParamGrid::linspace(0.0, 1.0, 0.1);
        const std::size_t n = 40;
        std::vector<double> values((n + 1) * grid.size());
        for (auto& v : values) v = dist(gen);
        const LossMatrix with_test(values, n + 1, grid);
        values.resize(n * grid.size());
        const LossMatrix calib_only(values, n, grid);

        const ControlSpec spec(0.75, 0.15, LossBound(1.0));
        const auto practical = feasible_set(calib_only, spec);
        const auto ideal = feasible_set_ideal(with_test, spec);
        CHECK(std::includes(ideal.begin(), ideal.end(), practical.begin(), practical.end()));
    }
}

TEST_CASE("external search is validated against the feasible set") {
    const auto m = constant_column_matrix(50);
    const ControlSpec spec(0.3, 0.1, LossBound(1.0));

    auto pick_middle = [](const std::vector<GridPoint>& candidates) {
        return candidates[candidates.size() / 2];
    };
    const auto r = calibrate(m, spec, SearchFunction::external("holdout-tuner", pick_middle));
    CHECK(r.search_name == "holdout-tuner");
    CHECK(std::binary_search(r.feasible.begin(), r.feasible.end(), r.lambda_index));

    auto pick_rogue = [](const std::vector<GridPoint>&) { return GridPoint{0.015}; };
    CHECK_THROWS_AS(calibrate(m, spec, SearchFunction::external("rogue", pick_rogue)),
                    ConfigError);

    CHECK_THROWS_AS(SearchFunction::external("x", nullptr), ConfigError);
    CHECK_THROWS_AS(SearchFunction::external("", pick_middle), ConfigError);
}

TEST_CASE("losses above the stated bound are rejected in practical mode") {
    const auto grid = ParamGrid::from_values({0.5});
    const LossMatrix m({1.5, 0.2}, 2, grid);
    const ControlSpec spec(0.9, 0.1, LossBound(1.0));
    CHECK_THROWS_AS(calibrate(m, spec, SearchFunction::min()), ConfigError);
}

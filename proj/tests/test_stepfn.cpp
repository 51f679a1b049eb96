#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwnorm/json_io.hpp"
#include "pwnorm/random.hpp"
#include "pwnorm/step_function.hpp"

#include <cmath>

using namespace pwnorm;

namespace {

StepFunction random_fn(int level, Rng& rng, bool non_negative = false) {
    std::vector<double> values(std::size_t{1} << level);
    for (double& v : values) {
        v = rng.normal();
        if (non_negative) v = std::fabs(v);
    }
    return StepFunction(level, std::move(values));
}

}  // namespace

TEST_CASE("refine replicates values onto finer grids") {
    CHECK(refine(StepFunction(0, {3.0}), 1) == StepFunction(1, {3.0, 3.0}));
    CHECK(refine(StepFunction(1, {1.0, 2.0}), 2) == StepFunction(2, {1.0, 1.0, 2.0, 2.0}));
    CHECK_THROWS_WITH_AS(refine(StepFunction(1, {1.0, 2.0}), 0), "cannot coarsen by refine",
                         std::invalid_argument);
}

TEST_CASE("pointwise operations align levels") {
    CHECK(pointwise(PointwiseOp::add, StepFunction(0, {1.0}), StepFunction(1, {1.0, 2.0})) ==
          StepFunction(1, {2.0, 3.0}));
    CHECK(pointwise(PointwiseOp::mul, StepFunction(1, {1.0, -1.0}), StepFunction(1, {1.0, -1.0})) ==
          StepFunction(1, {1.0, 1.0}));
    CHECK(pointwise(PointwiseOp::max, StepFunction(1, {3.0, 0.0}), StepFunction(1, {0.0, 2.0})) ==
          StepFunction(1, {3.0, 2.0}));
}

TEST_CASE("abs_pow") {
    CHECK(abs_pow(StepFunction(1, {4.0, 9.0}), 0.5) == StepFunction(1, {2.0, 3.0}));
    CHECK(abs_pow(StepFunction(1, {-2.0, 2.0}), 2.0) == StepFunction(1, {4.0, 4.0}));
    CHECK(abs_pow(StepFunction(0, {2.0}), 1.0) == StepFunction(0, {2.0}));
    CHECK_THROWS_AS(abs_pow(StepFunction(0, {1.0}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(abs_pow(StepFunction(0, {1.0}), -1.0), std::invalid_argument);
}

TEST_CASE("integral is the exact cell sum") {
    CHECK(integral(StepFunction(0, {1.0})) == 1.0);
    CHECK(integral(StepFunction(1, {1.0, -1.0})) == 0.0);
    CHECK(integral(StepFunction(2, {2.0, 0.0, 0.0, 0.0})) == 0.5);
}

TEST_CASE("lp_norm") {
    const double r = std::pow(2.0, 0.25);
    CHECK(lp_norm(StepFunction(1, {r, 0.0}), 4.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lp_norm(StepFunction(1, {1.0, -1.0}), 2.0) == 1.0);
    CHECK(lp_norm(StepFunction(1, {3.0, 4.0}), 2.0) ==
          doctest::Approx(3.5355339059327378).epsilon(1e-14));
    CHECK_THROWS_AS(lp_norm(StepFunction(0, {1.0}), 0.5), std::invalid_argument);
}

TEST_CASE("cond_expect averages over each set") {
    const StepFunction f(1, {1.0, 3.0});
    CHECK(cond_expect(f, std::vector<DyadicSet>{{{0, 0}}}) == StepFunction(0, {2.0}));
    CHECK(cond_expect(f, std::vector<DyadicSet>{{{1, 0}}, {{1, 1}}}) == f);
    CHECK(cond_expect(StepFunction(2, {4.0, 0.0, 0.0, 0.0}), std::vector<DyadicSet>{{{1, 0}}}) ==
          StepFunction(2, {2.0, 2.0, 0.0, 0.0}));
    CHECK_THROWS_WITH_AS(
        cond_expect(f, std::vector<DyadicSet>{{{1, 0}}, {{2, 1}}}), "overlapping sets",
        std::invalid_argument);
    CHECK_THROWS_WITH_AS(cond_expect(f, std::vector<DyadicSet>{{{1, 0}}, {}}),
                         "empty set in conditioning list", std::invalid_argument);
}

TEST_CASE("equality is modulo refinement") {
    CHECK(StepFunction(0, {2.0}) == StepFunction(1, {2.0, 2.0}));
    CHECK_FALSE(StepFunction(1, {1.0, 2.0}) == StepFunction(1, {1.0, 3.0}));
    CHECK(StepFunction(1, {1.0, 2.0}) == refine(StepFunction(1, {1.0, 2.0}), 4));
}

TEST_CASE("refine preserves integral and lp norms bit for bit up to level 20") {
    Rng rng(11);
    const StepFunction f = random_fn(3, rng);
    for (int target : {5, 12, 20}) {
        const StepFunction fr = refine(f, target);
        CHECK(integral(fr) == integral(f));
        for (double p : {2.5, 3.0, 4.0, 6.0}) CHECK(lp_norm(fr, p) == lp_norm(f, p));
    }
}

TEST_CASE("integral is linear") {
    Rng rng(12);
    for (int i = 0; i < 30; ++i) {
        const StepFunction f = random_fn(4 + i % 3, rng);
        const StepFunction h = random_fn(6, rng);
        CHECK(integral(f + h) == doctest::Approx(integral(f) + integral(h)).epsilon(1e-12));
    }
}

TEST_CASE("pairing obeys the dual exponent inequality") {
    Rng rng(13);
    for (double p : {2.5, 3.0, 4.0, 6.0}) {
        for (int i = 0; i < 25; ++i) {
            const StepFunction f = random_fn(7, rng, true);
            const StepFunction g = random_fn(12, rng, true);
            CHECK(integral(f * g) <= lp_norm(f, p / 2.0) * lp_norm(g, p / (p - 2.0)) + 1e-10);
        }
    }
}

TEST_CASE("cond_expect is idempotent and preserves mass on the union") {
    Rng rng(14);
    const std::vector<DyadicSet> sets = {{{2, 0}}, {{3, 2}, {3, 3}}, {{1, 1}}};
    const StepFunction mask = StepFunction::indicator({{2, 0}, {3, 2}, {3, 3}, {1, 1}});
    for (int i = 0; i < 20; ++i) {
        const StepFunction f = random_fn(6, rng);
        const StepFunction e = cond_expect(f, sets);
        CHECK(approx_equal(cond_expect(e, sets), e, 1e-13));
        CHECK(integral(e * mask) == doctest::Approx(integral(f * mask)).epsilon(1e-12));
    }
}

TEST_CASE("grid cap is enforced") {
    CHECK_THROWS_AS(StepFunction(max_level() + 1, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(refine(StepFunction(0, {1.0}), max_level() + 1), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction(1, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction(0, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("support and measure") {
    const DyadicSet s = support(StepFunction(2, {0.0, 2.0, 0.0, 5.0}));
    REQUIRE(s.size() == 2);
    CHECK(s[0].index == 1);
    CHECK(s[1].index == 3);
    CHECK(measure(s) == 0.5);
    CHECK_THROWS_WITH_AS(measure(DyadicSet{{1, 0}, {2, 1}}), "overlapping sets",
                         std::invalid_argument);
}

TEST_CASE("wire format round-trips") {
    Rng rng(15);
    const StepFunction f = random_fn(5, rng);
    CHECK(parse_step_function(step_function_json(f)) == f);
    const StepFunction g = parse_step_function(R"({"level": 1, "values": [1.0, -1.0]})");
    CHECK(g == StepFunction(1, {1.0, -1.0}));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "cfmm/errors.hpp"
#include "cfmm/payoff.hpp"
#include "cfmm/payoff_io.hpp"
#include "support.hpp"

using namespace cfmm;
using support::kE;

TEST_CASE("catalog payoff values") {
    const auto cash = make_catalog_payoff(CashOrNothing{2.0});
    CHECK(eval_payoff(cash, 1.0) == 0.0);
    CHECK(eval_payoff(cash, 3.0) == 1.0);
    CHECK(eval_payoff(cash, 2.0) == 0.0);  // lower value at the jump

    const auto call = make_catalog_payoff(CappedCall{1.0, kE});
    CHECK(eval_payoff(call, 1.5) == doctest::Approx(0.5).epsilon(1e-15));

    const auto cp = make_catalog_payoff(ConstantProportion{0.5, 1.0});
    CHECK(eval_payoff(cp, 4.0) == doctest::Approx(2.0).epsilon(1e-15));

    const auto lg = make_catalog_payoff(Logarithmic{1.0});
    CHECK(eval_payoff(lg, 1.0) == 0.0);
    CHECK(eval_payoff(lg, kE * kE) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("payoff derivatives") {
    CHECK(eval_payoff_derivative(make_catalog_payoff(CappedCall{1.0, kE}), 2.0) == 1.0);
    CHECK(eval_payoff_derivative(make_catalog_payoff(CappedPower{1.0, 4.0, 2.0}), 2.0) ==
          doctest::Approx(4.0).epsilon(1e-15));
    CHECK(eval_payoff_derivative(make_catalog_payoff(Logarithmic{1.0}), 2.0) == doctest::Approx(0.5).epsilon(1e-15));

    const auto call = make_catalog_payoff(CappedCall{1.0, 3.0}, PriceInterval(0.5, 4.0));
    CHECK_THROWS_AS(eval_payoff_derivative(call, 1.0), BreakpointError);
    CHECK_THROWS_AS(eval_payoff_derivative(call, 3.0), BreakpointError);
    CHECK_THROWS_AS(eval_payoff(call, 0.25), DomainError);
    CHECK_THROWS_AS(eval_payoff(call, 5.0), DomainError);
}

TEST_CASE("breakpoint lists") {
    const auto call = payoff_breakpoints(make_catalog_payoff(CappedCall{1.0, kE}));
    REQUIRE(call.size() == 2);
    CHECK(call[0] == 1.0);
    CHECK(call[1] == kE);
    CHECK(payoff_breakpoints(make_catalog_payoff(CashOrNothing{2.0})) == std::vector<double>{2.0});
    CHECK(payoff_breakpoints(make_catalog_payoff(BlackScholesBinary{1.0, 0.2, 1.0})).empty());

    const auto cash = make_catalog_payoff(CashOrNothing{2.0});
    REQUIRE(cash.jumps().size() == 1);
    CHECK(cash.jumps()[0].price == 2.0);
    CHECK(cash.jumps()[0].size == 1.0);
}

TEST_CASE("catalog parameter validation") {
    CHECK_THROWS_AS(make_catalog_payoff(CashOrNothing{0.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(CappedCall{2.0, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(BlackScholesBinary{0.0, 0.2, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(BlackScholesBinary{1.0, -0.1, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(BlackScholesBinary{1.0, 0.2, 0.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(Logarithmic{-1.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(ConstantProportion{1.0, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(ConstantProportion{0.5, -1.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(CappedPower{2.0, 1.0, 2.0}), InvalidParameter);
    CHECK_THROWS_AS(make_catalog_payoff(CappedPower{1.0, ExtendedPrice::infinity(), 2.0}), InfiniteReplicationCost);
    CHECK_THROWS_AS(make_catalog_payoff(CappedPower{1.0, ExtendedPrice::infinity(), 1.0}), InfiniteReplicationCost);
    CHECK_NOTHROW(make_catalog_payoff(CappedPower{1.0, ExtendedPrice::infinity(), 0.5}));
    CHECK_THROWS_AS(make_catalog_payoff(ConstantProportion{0.5, 1.0}, PriceInterval(0.0, 4.0)),
                    InfiniteReplicationCost);
    CHECK_THROWS_AS(PriceInterval(2.0, 1.0), InvalidParameter);
}

TEST_CASE("black-scholes binary with zero volatility is a step at the strike") {
    const auto spec = make_catalog_payoff(BlackScholesBinary{1.5, 0.0, 1.0});
    CHECK(eval_payoff(spec, 1.5) == 0.0);
    CHECK(eval_payoff(spec, 1.6) == 1.0);
}

TEST_CASE("payoff documents") {
    SUBCASE("catalog") {
        const auto spec = parse_payoff_file(R"({"catalog":"capped_call","p0":1.0,"p1":2.0})");
        REQUIRE(spec.catalog());
        const auto* c = std::get_if<CappedCall>(&*spec.catalog());
        REQUIRE(c);
        CHECK(c->p0 == 1.0);
        CHECK(c->p1 == 2.0);
        CHECK(spec.interval() == PriceInterval(1.0, 2.0));
    }
    SUBCASE("interval override and inf") {
        const auto spec = parse_payoff_file(R"({"catalog":"logarithmic","p0":1,"alpha":0.5,"beta":"inf"})");
        CHECK(spec.interval().alpha() == 0.5);
        CHECK(spec.interval().beta().is_infinite());
    }
    SUBCASE("decreasing table") {
        CHECK_THROWS_AS(parse_payoff_file(R"({"piecewise":{"points":[[1,0],[2,3],[3,2]]}})"), MonotonicityError);
    }
    SUBCASE("negative value") {
        CHECK_THROWS_AS(parse_payoff_file(R"({"piecewise":{"points":[[1,-1],[2,3]]}})"), NegativePayoffError);
    }
    SUBCASE("infinite cost") {
        CHECK_THROWS_AS(parse_payoff_file(R"({"catalog":"capped_power","a":2.0,"p0":1.0,"p1":"inf"})"),
                        InfiniteReplicationCost);
    }
    SUBCASE("syntax error carries the line") {
        try {
            parse_payoff_file("{\n  \"catalog\": \"capped_call\",\n  \"p0\": 1,,\n}");
            FAIL("expected a format error");
        } catch (const PayoffFormatError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("unknown keys and families") {
        CHECK_THROWS_AS(parse_payoff_file(R"({"catalog":"capped_call","p0":1,"p1":2,"strike":3})"),
                        PayoffFormatError);
        CHECK_THROWS_AS(parse_payoff_file(R"({"catalog":"straddle","p0":1})"), PayoffFormatError);
        CHECK_THROWS_AS(parse_payoff_file(R"({"catalog":"capped_call","p0":1})"), PayoffFormatError);
        CHECK_THROWS_AS(parse_payoff_file(R"([1, 2])"), PayoffFormatError);
    }
    SUBCASE("table with jumps") {
        const auto spec = parse_payoff_file(R"({"piecewise":{"points":[[1,0],[3,2]],"jumps":[[2,0.5]]}})");
        CHECK(spec.value(2.0) == doctest::Approx(1.0));
        CHECK(spec.value(2.0 + 1e-12) == doctest::Approx(1.5));
        CHECK(spec.value(3.0) == doctest::Approx(2.5));
        CHECK(spec.value(10.0) == doctest::Approx(2.5));
        CHECK(spec.interval() == PriceInterval(1.0, 3.0));
    }
}

TEST_CASE("serialize then parse reproduces the payoff") {
    std::vector<PayoffSpec> specs;
    for (const auto& c : support::catalog_examples()) specs.push_back(make_catalog_payoff(c.params));
    specs.push_back(make_catalog_payoff(CappedPower{0.5, ExtendedPrice::infinity(), 0.5}));
    specs.push_back(PayoffSpec::from_table({{{1.0, 0.0}, {2.0, 1.0}, {4.0, 1.0}, {5.0, 3.0}}, {{3.0, 0.25}}},
                                           PriceInterval(0.5, ExtendedPrice::infinity())));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& spec : specs) {
        const auto back = parse_payoff_file(serialize_payoff(spec));
        CHECK(back.interval() == spec.interval());
        CHECK(back.breakpoints() == spec.breakpoints());
        for (int i = 0; i < 50; ++i) {
            const double p = std::exp(u(rng));
            CHECK(back.value(p) == spec.value(p));
        }
    }
}

TEST_CASE("payoff properties on catalog families") {
    std::mt19937_64 rng(11);
    for (const auto& c : support::catalog_examples()) {
        CAPTURE(c.name);
        const auto spec = make_catalog_payoff(c.params);
        const double lo = spec.interval().alpha() > 0 ? spec.interval().alpha() : 1e-3;
        const double hi = spec.interval().beta().is_finite() ? spec.interval().beta().value() : 100.0;
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));

        int violations = 0;
        for (int i = 0; i < 1000; ++i) {
            double p = std::exp(u(rng)), q = std::exp(u(rng));
            if (p > q) std::swap(p, q);
            p = std::clamp(p, lo, hi);
            q = std::clamp(q, lo, hi);
            if (eval_payoff(spec, p) > eval_payoff(spec, q)) ++violations;
            if (eval_payoff(spec, p) < 0.0) ++violations;
        }
        CHECK(violations == 0);

        // Central differences away from breakpoints.
        const double h = 1e-5;
        int checked = 0;
        for (int i = 0; i < 200; ++i) {
            const double p = std::exp(u(rng));
            if (p - h < lo || p + h > hi) continue;
            bool near_break = false;
            for (double b : spec.breakpoints()) near_break = near_break || std::abs(b - p) < 2 * h;
            if (near_break) continue;
            const double fd = (spec.value(p + h) - spec.value(p - h)) / (2 * h);
            const double d = eval_payoff_derivative(spec, p);
            CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
            ++checked;
        }
        CHECK(checked > 100);
    }
}

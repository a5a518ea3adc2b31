#include "doctest.h"

#include <random>
#include <vector>

#include "nlb/valuation.hpp"
#include "oracles.hpp"

using namespace nlb;

TEST_CASE("val_p on small values")
{
    const Prime two(2), three(3);
    CHECK(val_p(Rational(48), two) == ExtVal(4));
    CHECK(val_p(parse_rational("5/8"), two) == ExtVal(-3));
    CHECK(val_p(Rational(0), two).is_infinite());
    CHECK(val_p(Rational(7), three) == ExtVal(0));
    CHECK(val_p(Rational(1), two) == ExtVal(0));
    CHECK(val_p(Rational(2), two) == ExtVal(1));
    CHECK(val_p(parse_rational("1/3"), three) == ExtVal(-1));
    CHECK(val_p(parse_rational("-81/10"), three) == ExtVal(4));
}

TEST_CASE("prime construction")
{
    CHECK_NOTHROW(Prime(2));
    CHECK_NOTHROW(Prime(7919));
    CHECK_THROWS_AS(Prime(1), std::invalid_argument);
    CHECK_THROWS_AS(Prime(0), std::invalid_argument);
    CHECK_THROWS_AS(Prime(91), std::invalid_argument);
}

TEST_CASE("extended valuation arithmetic and order")
{
    const ExtVal inf = ExtVal::infinity();
    CHECK(ExtVal(2) + ExtVal(3) == ExtVal(5));
    CHECK((ExtVal(2) + inf).is_infinite());
    CHECK((inf + inf).is_infinite());
    CHECK(ExtVal(1000000) < inf);
    CHECK(ExtVal(-3) < ExtVal(parse_rational("-5/2")));
    CHECK(-ExtVal(4) == ExtVal(-4));
    CHECK_THROWS_AS(-inf, std::logic_error);
    CHECK_THROWS_AS(inf.value(), std::logic_error);
    CHECK((Integer(3) * inf).is_infinite());
    CHECK_THROWS(Integer(0) * inf);
}

TEST_CASE("ultrametric_sum_bound")
{
    const Prime two(2);
    std::vector<ExtVal> equal{ExtVal(2), ExtVal(2)};
    CHECK(ultrametric_sum_bound(equal) == ExtVal(2));
    CHECK(val_p(Rational(4 + 4), two) >= ExtVal(2));
    CHECK(val_p(Rational(4 + 4), two) == ExtVal(3));

    std::vector<ExtVal> distinct{ExtVal(2), ExtVal(3)};
    CHECK(ultrametric_sum_bound(distinct) == ExtVal(2));
    CHECK(val_p(Rational(4 + 8), two) == ExtVal(2));

    std::vector<ExtVal> with_inf{ExtVal::infinity(), ExtVal(5)};
    CHECK(ultrametric_sum_bound(with_inf) == ExtVal(5));

    CHECK_THROWS_AS(ultrametric_sum_bound(std::vector<ExtVal>{}), std::invalid_argument);
}

TEST_CASE("serialization of rationals and valuations")
{
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(Rational(-12)) == "-12");
    CHECK(to_string(ExtVal::infinity()) == "inf");
    CHECK(parse_extval("inf").is_infinite());
    CHECK(parse_extval("-7/3") == ExtVal(parse_rational("-7/3")));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("valuation laws on random rationals")
{
    std::mt19937_64 rng(20261015);
    const std::vector<unsigned long> primes{2, 3, 5, 7, 101};
    std::uniform_int_distribution<long> nd(-100000, 100000), dd(1, 100000);
    for (int iter = 0; iter < 2000; ++iter) {
        const unsigned long p = primes[static_cast<std::size_t>(iter) % primes.size()];
        const Prime pr(p);
        Rational x(nd(rng), dd(rng)), y(nd(rng), dd(rng));
        x.canonicalize();
        y.canonicalize();
        const ExtVal vx = val_p(x, pr), vy = val_p(y, pr);
        if (x != 0)
            CHECK(vx == ExtVal(oracle::valuation(x, p)));
        CHECK(val_p(Rational(x * y), pr) == vx + vy);
        const ExtVal vs = val_p(Rational(x + y), pr);
        CHECK(vs >= std::min(vx, vy));
        if (vx != vy)
            CHECK(vs == std::min(vx, vy));
    }
    for (unsigned long p : primes) {
        const Prime pr(p);
        CHECK(val_p(Rational(1), pr) == ExtVal(0));
        CHECK(val_p(Rational(static_cast<long>(p)), pr) == ExtVal(1));
        CHECK(val_p(Rational(1, p), pr) == ExtVal(-1));
    }
}

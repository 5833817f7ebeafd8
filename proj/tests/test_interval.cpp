#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "idyn/interval.hpp"

#include <random>

using namespace idyn;

TEST_CASE("rational parse and print round-trip") {
    CHECK(rat_str(Rational(2, 6)) == "1/3");
    CHECK(rat_str(Rational(5)) == "5");
    CHECK(*rat_parse("7/13") == Rational(7, 13));
    CHECK(*rat_parse("0.6") == Rational(3, 5));
    CHECK(*rat_parse("-2/4") == Rational(-1, 2));
    CHECK(!rat_parse("1/0"));
    CHECK(!rat_parse("a/b"));
    CHECK(*rat_parse(rat_str(Rational(355, 113))) == Rational(355, 113));
}

TEST_CASE("interval basics") {
    auto iv = Interval::make(rat(1, 4), rat(3, 4), true, false);
    CHECK(iv.contains(rat(1, 4)));
    CHECK(!iv.contains(rat(3, 4)));
    CHECK(iv.contains(rat(1, 2)));
    CHECK_THROWS_AS(Interval::open(rat(1, 2), rat(1, 2)), InputError);
    CHECK(Interval::point(rat(1, 2)).is_point());
}

TEST_CASE("normal form merges compatible touching parts only") {
    auto s = IntervalSet::from_parts({Interval::make(rat(0), rat(1, 2), true, false),
                                      Interval::make(rat(1, 2), rat(1), true, true)});
    CHECK(s.size() == 1);
    CHECK(s == IntervalSet::unit());

    auto t = IntervalSet::from_parts({Interval::make(rat(0), rat(1, 2), true, false),
                                      Interval::make(rat(1, 2), rat(1), false, true)});
    CHECK(t.size() == 2);  // the point 1/2 is missing
    CHECK(!t.contains(rat(1, 2)));
}

TEST_CASE("set algebra agrees with membership") {
    std::mt19937 rng(12345);
    auto rand_rat = [&]() {
        int den = 1 + static_cast<int>(rng() % 40);
        int num = static_cast<int>(rng() % (den + 1));
        return Rational(num, den);
    };
    auto rand_set = [&]() {
        std::vector<Interval> parts;
        int m = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < m; ++i) {
            Rational a = rand_rat(), b = rand_rat();
            if (a > b) std::swap(a, b);
            bool ac = rng() % 2, bc = rng() % 2;
            if (a == b) ac = bc = true;
            parts.push_back(Interval::make(a, b, ac, bc));
        }
        return IntervalSet::from_parts(std::move(parts));
    };
    for (int trial = 0; trial < 300; ++trial) {
        IntervalSet A = rand_set(), B = rand_set();
        IntervalSet I = A.intersect(B), U = A.unite(B), D = A.subtract(B), C = A.complement();
        for (int k = 0; k < 12; ++k) {
            Rational x = rand_rat();
            bool a = A.contains(x), b = B.contains(x);
            CHECK(I.contains(x) == (a && b));
            CHECK(U.contains(x) == (a || b));
            CHECK(D.contains(x) == (a && !b));
            CHECK(C.contains(x) == !a);
        }
        // Normal form is idempotent.
        CHECK(IntervalSet::from_parts({U.parts().begin(), U.parts().end()}) == U);
    }
}

TEST_CASE("distance and hull") {
    auto a = IntervalSet(Interval::closed(rat(0), rat(1, 4)));
    auto b = IntervalSet(Interval::open(rat(1, 2), rat(3, 4)));
    CHECK(set_distance(a, b) == rat(1, 4));
    CHECK(set_distance(a, a) == rat(0));
    auto u = a.unite(b);
    CHECK(u.hull()->lo == rat(0));
    CHECK(u.hull()->hi == rat(3, 4));
    CHECK(u.measure() == rat(1, 2));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "idyn/covers.hpp"

#include <cmath>

using namespace idyn;

namespace {

const PiecewiseLinearMap kTent = PiecewiseLinearMap::tent();
const PiecewiseLinearMap kRefl = PiecewiseLinearMap::reflection();

IntervalSet left_open(long num, long den) {  // [0, num/den)
    return IntervalSet(Interval::make(rat(0), Rational(num, den), true, false));
}
IntervalSet right_open(long num, long den) {  // (num/den, 1]
    return IntervalSet(Interval::make(Rational(num, den), rat(1), false, true));
}

OpenCover two_cover(long a_num, long a_den, long b_num, long b_den) {
    return make_cover({left_open(a_num, a_den), right_open(b_num, b_den)});
}

// Independent oracle: exhaustive subset enumeration, feasible up to ~2^16.
long exhaustive_min_subcover(const OpenCover& u) {
    std::size_t m = u.elements.size();
    REQUIRE(m <= 20);
    long best = m;
    for (std::size_t mask = 1; mask < (1u << m); ++mask) {
        long size = __builtin_popcount(mask);
        if (size >= best) continue;
        IntervalSet cov;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) cov = cov.unite(u.elements[i]);
        if (cov == IntervalSet::unit()) best = size;
    }
    return best;
}

// Independent oracle: spectral radius of a 2x2 nonnegative matrix by power
// iteration.
double spectral_radius_2x2(double a, double b, double c, double d) {
    double v0 = 1, v1 = 1, lam = 0;
    for (int it = 0; it < 200; ++it) {
        double w0 = a * v0 + b * v1;
        double w1 = c * v0 + d * v1;
        lam = std::max(std::abs(w0), std::abs(w1));
        v0 = w0 / lam;
        v1 = w1 / lam;
    }
    return lam;
}

}  // namespace

TEST_CASE("join examples") {
    auto U = two_cover(3, 5, 2, 5);
    auto UU = join(U, U);
    CHECK(UU.elements.size() == 3);
    bool has_middle = false;
    for (const auto& e : UU.elements)
        if (e == IntervalSet(Interval::open(rat(2, 5), rat(3, 5)))) has_middle = true;
    CHECK(has_middle);

    auto full = make_cover({IntervalSet::unit()});
    auto UI = join(U, full);
    CHECK(UI.elements == U.elements);

    auto pulled = pull_back(kRefl, U);
    CHECK(join(U, pulled).elements.size() == 3);
}

TEST_CASE("pull_back examples") {
    auto U = two_cover(3, 5, 2, 5);
    auto P = pull_back(kTent, U);
    IntervalSet e1 = IntervalSet::from_parts({Interval::make(rat(0), rat(3, 10), true, false),
                                              Interval::make(rat(7, 10), rat(1), false, true)});
    IntervalSet e2 = IntervalSet(Interval::open(rat(1, 5), rat(4, 5)));
    CHECK(P.elements.size() == 2);
    CHECK((P.elements[0] == e1 || P.elements[1] == e1));
    CHECK((P.elements[0] == e2 || P.elements[1] == e2));

    auto I = pull_back(PiecewiseLinearMap::identity(), U);
    CHECK(I.elements == U.elements);

    // Constant map: the element containing the value pulls back to [0,1].
    auto C = pull_back(PiecewiseLinearMap::constant(rat(1, 4)), U);
    CHECK(C.elements.size() == 1);
    CHECK(C.elements[0] == IntervalSet::unit());
}

TEST_CASE("min subcover exact and against the oracle") {
    CHECK(min_subcover_count(two_cover(3, 5, 2, 5)) == 2);
    CHECK(min_subcover_count(make_cover({IntervalSet::unit(), left_open(1, 2)})) == 1);
    CHECK_THROWS_AS(make_cover({left_open(1, 2), right_open(3, 4)}), InputError);

    // Joins of the tent cover, cross-checked exhaustively while small.
    auto U = two_cover(3, 5, 2, 5);
    OpenCover joined = U;
    OpenCover pulled = U;
    for (int n = 2; n <= 4; ++n) {
        pulled = pull_back(kTent, pulled);
        joined = join(joined, pulled);
        if (joined.elements.size() <= 16) {
            CHECK(min_subcover_count(joined) == exhaustive_min_subcover(joined));
        }
    }
}

TEST_CASE("N is submultiplicative and monotone under pullback") {
    auto U = two_cover(3, 5, 2, 5);
    auto V = two_cover(4, 7, 1, 3);
    CHECK(min_subcover_count(join(U, V)) <= min_subcover_count(U) * min_subcover_count(V));
    for (const auto& f : {kTent, kRefl}) {
        CHECK(min_subcover_count(pull_back(f, U)) <= min_subcover_count(U));
        CHECK(min_subcover_count(pull_back(f, V)) <= min_subcover_count(V));
    }
}

TEST_CASE("cover entropy of the tent map approaches log 2") {
    auto U = two_cover(51, 100, 49, 100);
    auto est = cover_entropy(kTent, U, 12);
    REQUIRE(est.counts.size() == 12);
    CHECK(!est.partial);
    double target = std::log(spectral_radius_2x2(1, 1, 1, 1));
    CHECK(std::abs(est.slopes.back() - target) < 0.05);
    // Counts nondecreasing; slopes settle.
    for (std::size_t i = 1; i < est.counts.size(); ++i) CHECK(est.counts[i] >= est.counts[i - 1]);
    // Submultiplicativity N_{m+n} <= N_m * N_n along the join sequence.
    for (std::size_t t = 1; t < est.counts.size(); ++t)
        for (std::size_t m = 1; m <= t; ++m)
            CHECK(est.counts[t] <= est.counts[m - 1] * est.counts[t - m]);
}

TEST_CASE("cover entropy of the reflection stabilizes") {
    auto U = two_cover(51, 100, 49, 100);
    auto est = cover_entropy(kRefl, U, 8);
    CHECK(est.stabilized);
    CHECK(est.counts.back() == est.counts[2]);
    CHECK(est.slopes.back() < 0.2);

    auto estI = cover_entropy(PiecewiseLinearMap::identity(), U, 6);
    for (long c : estI.counts) CHECK(c == estI.counts[0]);
}

TEST_CASE("complexity dichotomy") {
    auto U = two_cover(3, 5, 2, 5);
    auto rep = complexity_CU(kTent, U, 10);
    CHECK(rep.verdict == ComplexityReport::Verdict::exceeds_2);
    CHECK(rep.first_n <= 4);

    auto rep2 = complexity_CU(kRefl, U, 10);
    CHECK(rep2.verdict == ComplexityReport::Verdict::stuck_at_2);
    for (long c : rep2.counts) CHECK(c == 2);

    auto dense = make_cover({IntervalSet::unit(), IntervalSet(Interval::open(rat(2, 5), rat(3, 5)))});
    CHECK_THROWS_AS(complexity_CU(kTent, dense, 6), InputError);
}

TEST_CASE("sequence entropy") {
    auto U = two_cover(3, 5, 2, 5);
    // A = 0,1,2,... coincides with cover entropy.
    std::vector<long> lin{0, 1, 2, 3, 4, 5, 6, 7};
    auto a = sequence_entropy(kTent, U, lin, 6);
    auto b = cover_entropy(kTent, U, 6);
    CHECK(a.counts == b.counts);

    // Powers of two on the tent map keep growing (tent is not null).
    std::vector<long> pows{1, 2, 4, 8, 16, 32};
    auto c = sequence_entropy(kTent, U, pows, 5);
    CHECK(c.counts.back() > c.counts.front());
    CHECK(c.slopes.back() > 0.2);

    // The involution is null: joins along any sequence stay bounded.
    auto d = sequence_entropy(kRefl, U, pows, 6);
    CHECK(d.counts.back() <= 3);
}

TEST_CASE("mixing certificate chains") {
    auto cert = mixing_certificate(kTent, Interval::closed(rat(2, 5), rat(3, 5)), rat(1, 10), 16);
    CHECK(cert.ok);
    CHECK(cert.N == 4);
    CHECK(cert.chain[1] == IntervalSet(Interval::closed(rat(4, 5), rat(1))));
    CHECK(cert.chain[2] == IntervalSet(Interval::closed(rat(0), rat(2, 5))));
    CHECK(cert.chain[3] == IntervalSet(Interval::closed(rat(0), rat(4, 5))));
    CHECK(cert.chain[4] == IntervalSet::unit());

    auto fail = mixing_certificate(kRefl, Interval::closed(rat(2, 5), rat(3, 5)), rat(1, 10), 16);
    CHECK(!fail.ok);
    CHECK(fail.largest_violation == 16);

    auto whole = mixing_certificate(kTent, Interval::closed(rat(0), rat(1)), rat(1, 10), 8);
    CHECK(whole.ok);
    CHECK(whole.N == 0);
}

TEST_CASE("lebesgue number of a two-element cover is the overlap") {
    CHECK(lebesgue_number(two_cover(3, 5, 2, 5)) == rat(1, 5));
    CHECK(lebesgue_number(two_cover(51, 100, 49, 100)) == rat(1, 50));
}

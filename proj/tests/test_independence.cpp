#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "idyn/independence.hpp"
#include "idyn/pairs.hpp"

using namespace idyn;

namespace {

const PiecewiseLinearMap kTent = PiecewiseLinearMap::tent();
const PiecewiseLinearMap kRefl = PiecewiseLinearMap::reflection();

IntervalSet open_set(long a_num, long a_den, long b_num, long b_den) {
    return IntervalSet(Interval::open(Rational(a_num, a_den), Rational(b_num, b_den)));
}

IntervalSet ball(const Rational& c, const Rational& r) {
    Rational a = c - r, b = c + r;
    bool ac = false, bc = false;
    if (a < 0) {
        a = 0;
        ac = true;
    }
    if (b > 1) {
        b = 1;
        bc = true;
    }
    return IntervalSet(Interval::make(a, b, ac, bc));
}

// Stage map with the base orbit in the deepest tent copy: inner coordinate
// 2/7, outer least period 3 * 2^m. Carries genuinely interval-shaped deep
// cells, unlike the superstable constant-base tower.
struct ChaoticStage {
    PiecewiseLinearMap map;
    Rational base;
    int stage;
};

ChaoticStage chaotic_stage(int m) {
    DoublingTower tower(m, PiecewiseLinearMap::tent());
    Rational scale = 1;
    for (int i = 0; i < m; ++i) scale /= 3;
    return {tower.realized(), Rational(1) - scale * Rational(5, 7), m};
}

}  // namespace

TEST_CASE("independence certificates on the tent map") {
    std::vector<IntervalSet> tuple{open_set(0, 1, 1, 4), open_set(3, 4, 1, 1)};
    auto cert = independence_check(kTent, tuple, {2, 4, 6, 8});
    CHECK(cert.verified);
    CHECK(cert.patterns_checked == 16);
    CHECK(revalidate_certificate(kTent, cert));

    // Subset closure: dropping times re-verifies.
    for (const auto& sub : std::vector<std::vector<long>>{{2, 4}, {4, 6, 8}, {2}}) {
        CHECK(independence_check(kTent, tuple, sub).verified);
    }
}

TEST_CASE("independence fails on the involution") {
    std::vector<IntervalSet> tuple{open_set(0, 1, 1, 4), open_set(3, 4, 1, 1)};
    auto cert = independence_check(kRefl, tuple, {1, 2});
    CHECK(!cert.verified);
    CHECK(cert.first_failing_pattern >= 0);
}

TEST_CASE("single-set tuples and budgets") {
    std::vector<IntervalSet> one{open_set(0, 1, 1, 1)};
    CHECK(independence_check(kTent, one, {1, 2, 3}).verified);

    std::vector<long> big;
    for (long t = 1; t <= 13; ++t) big.push_back(t);
    CHECK_THROWS_AS(independence_check(kTent, one, big), ResourceError);
}

TEST_CASE("serial and parallel pattern checks agree") {
    std::vector<IntervalSet> tuple{open_set(0, 1, 1, 4), open_set(3, 4, 1, 1)};
    auto a = independence_check(kTent, tuple, {2, 4, 6, 8}, Exec::serial);
    auto b = independence_check(kTent, tuple, {2, 4, 6, 8}, Exec::parallel);
    CHECK(a.verified == b.verified);
    CHECK(a.witnesses == b.witnesses);
}

TEST_CASE("arithmetic independence via mixing") {
    std::vector<IntervalSet> tuple{open_set(0, 1, 1, 4), open_set(3, 4, 1, 1)};
    auto cert = arithmetic_independence(kTent, tuple, 8, 4);
    CHECK(cert.verified);
    CHECK(cert.times.size() == 4);
    CHECK(cert.times[1] == 2 * cert.times[0]);
    CHECK(cert.times[3] == 4 * cert.times[0]);
    CHECK(cert.times[0] <= 8);
    CHECK(revalidate_certificate(kTent, cert));

    auto fail = arithmetic_independence(kRefl, tuple, 8, 4);
    CHECK(!fail.verified);

    std::vector<IntervalSet> one{open_set(1, 8, 7, 8)};
    CHECK(arithmetic_independence(kTent, one, 8, 4).verified);
}

TEST_CASE("pair independence profiles") {
    auto prof = pair_independence_profile(kTent, rat(1, 5), rat(4, 5), {rat(1, 8), rat(1, 16)}, 64);
    CHECK(prof.ie_evidence);
    CHECK(prof.it_evidence);
    for (const auto& rp : prof.per_radius) CHECK(rp.times.size() >= 8);

    // The null involution: no essential separated pair reaches length 2.
    for (int xi = 1; xi <= 9; xi += 2)
        for (int yi = xi + 4; yi <= 9; yi += 2) {
            auto p = pair_independence_profile(kRefl, Rational(xi, 10), Rational(yi, 10), {rat(1, 10)}, 128);
            CHECK(p.per_radius[0].times.size() <= 1);
        }

    CHECK_THROWS_AS(pair_independence_profile(kTent, rat(1, 5), rat(1, 5), {rat(1, 8)}, 64), InputError);
}

TEST_CASE("covering sequences on a chaotic stage map") {
    auto cs = chaotic_stage(6);
    AnyMap am = cs.map;
    OmegaParams op;
    op.burn = 0;
    op.horizon = 1024;
    auto P = compute_portion(am, cs.base, 6, op);
    REQUIRE(P.omega_reps.size() == 192);
    const Interval& cell = P.cell(6, 0);

    NonseparableParams np;
    np.base_x = cs.base;
    np.omega = op;
    np.period_budget = 5;
    auto nv = f_nonseparable_test(cs.map, cell.lo, cell.hi, np);
    REQUIRE(nv.verdict == NonseparableVerdict::nonseparable_evidence);

    auto seq = covering_pair_sequences(cs.map, cell.lo, cell.hi, 5);
    REQUIRE(!seq.stalled);
    REQUIRE(seq.U.size() == 5);
    for (std::size_t n = 1; n < seq.U.size(); ++n) {
        CHECK(seq.U[n].width() < seq.U[n - 1].width());
        CHECK(seq.V[n].width() < seq.V[n - 1].width());
        CHECK(seq.U[n].width() < Rational(1, static_cast<long>(n + 1)));
        // Nesting.
        CHECK(seq.U[n].lo >= seq.U[n - 1].lo);
        CHECK(seq.U[n].hi <= seq.U[n - 1].hi);
    }
    // Containments re-verified from scratch.
    for (std::size_t n = 0; n + 1 < seq.U.size(); ++n) {
        int steps = 1 << seq.k[n];
        IntervalSet img = cs.map.image_iter(IntervalSet(seq.U[n]), steps)
                              .intersect(cs.map.image_iter(IntervalSet(seq.V[n]), steps));
        CHECK(img.superset_of(IntervalSet(seq.U[n + 1]).unite(IntervalSet(seq.V[n + 1]))));
    }

    // The involution spreads nothing: construction stalls at the first stage.
    auto stalled = covering_pair_sequences(kRefl, rat(1, 4), rat(3, 4), 3, 8);
    CHECK(stalled.stalled);
    CHECK(stalled.stalled_stage == 1);
}

TEST_CASE("witness tree at small depth") {
    auto cs = chaotic_stage(6);
    AnyMap am = cs.map;
    OmegaParams op;
    op.burn = 0;
    op.horizon = 1024;
    auto P = compute_portion(am, cs.base, 6, op);
    const Interval& cell = P.cell(6, 0);
    auto seq = covering_pair_sequences(cs.map, cell.lo, cell.hi, 5);
    REQUIRE(!seq.stalled);

    const int M = 3;
    auto tree = scrambled_witness_tree(cs.map, seq, M);
    CHECK(tree.verified);
    CHECK(tree.levels.back().size() == (1u << (M + 1)));
    CHECK(tree.delta == cell.width());
    CHECK(tree.anchors.size() == static_cast<std::size_t>(M + 1));

    // M = 0 base case: two leaves are the first neighborhoods.
    auto base = scrambled_witness_tree(cs.map, seq, 0);
    CHECK(base.levels.back().size() == 2);
    CHECK(base.levels[0][0] == seq.U[0]);
    CHECK(base.levels[0][1] == seq.V[0]);

    // Leaves realize the separation at the anchor where words differ.
    const auto& leaves = tree.levels[M];
    for (std::size_t w1 = 0; w1 < leaves.size(); ++w1)
        for (std::size_t w2 = w1 + 1; w2 < leaves.size(); ++w2) {
            int dm = -1;
            for (int i = 0; i <= M; ++i)
                if (((w1 >> i) & 1) != ((w2 >> i) & 1)) dm = i;
            REQUIRE(dm >= 0);
            Rational p1 = leaves[w1].pick_point();
            Rational p2 = leaves[w2].pick_point();
            Rational d1 = iterate_exact(am, p1, static_cast<int>(tree.anchors[dm]));
            Rational d2 = iterate_exact(am, p2, static_cast<int>(tree.anchors[dm]));
            Rational lower = tree.delta - seq.U[dm].width() - seq.V[dm].width();
            CHECK(rat_abs(d1 - d2) >= lower);
        }

    // Cross-check: the anchor times past t_0 form an independence set for
    // balls around the pair.
    std::vector<long> anchor_times(tree.anchors.begin() + 1, tree.anchors.end());
    Rational r1 = seq.U[0].width() / 2;
    auto cert = independence_check(cs.map, {ball(seq.u, r1), ball(seq.v, r1)}, anchor_times);
    CHECK(cert.verified);

    // Depth beyond the sequences is rejected.
    CHECK_THROWS_AS(scrambled_witness_tree(cs.map, seq, 5), InputError);
}

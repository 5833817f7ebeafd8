#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "idyn/pairs.hpp"

#include <cmath>

using namespace idyn;

namespace {

const PiecewiseLinearMap kTent = PiecewiseLinearMap::tent();

OmegaParams full_orbit(int horizon) {
    OmegaParams p;
    p.burn = 0;
    p.horizon = horizon;
    return p;
}

PeriodicPortion limit_portion(int K, int horizon) {
    AnyMap lim = DoublingTower(8);
    return compute_portion(lim, rat(0), K, full_orbit(horizon));
}

// Two invariant blocks: [0,1/2] attracted to 0, [1/2,1] attracted to 1/2.
PiecewiseLinearMap two_block_map() {
    return PiecewiseLinearMap({rat(0), rat(7, 16), rat(1, 2), rat(1)},
                              {rat(0), rat(7, 32), rat(1, 2), rat(3, 4)});
}

}  // namespace

TEST_CASE("kneading codes on the tower limit") {
    AnyMap lim = DoublingTower(8);
    auto P = limit_portion(6, 2048);

    auto c0 = kneading_code(lim, P, rat(0), 6, 1024);
    for (int k = 1; k <= 6; ++k) CHECK(c0.c[k - 1] == 0);

    // Shifting the orbit shifts the phase: c_{f^3(0)}(k) = -3 (mod 2^k).
    Rational x3 = iterate_exact(lim, rat(0), 3);
    auto c3 = kneading_code(lim, P, x3, 6, 1024);
    CHECK(c3.c[0] == 1);
    for (int k = 2; k <= 6; ++k) CHECK(c3.c[k - 1] == (1L << k) - 3);

    // Congruence invariant c_x(k) = c_x(k+1) (mod 2^k) on sampled points.
    for (int a : {0, 1, 2, 5, 9}) {
        auto cx = kneading_code(lim, P, iterate_exact(lim, rat(0), a), 6, 1024);
        for (int k = 1; k < 6; ++k) {
            long period = 1L << k;
            CHECK(((cx.c[k] - cx.c[k - 1]) % period + period) % period == 0);
        }
    }

    // A generic point is eventually absorbed and aligns; re-verify the
    // itinerary membership directly.
    auto cg = kneading_code(lim, P, rat(1, 5), 4, 1024);
    Orbit o = orbit(lim, rat(1, 5), 1024);
    for (int k = 1; k <= 4; ++k) {
        long nk = cg.c[k - 1];
        for (long n = nk; n <= 1024; ++n) {
            int idx = static_cast<int>(((n - nk) % (1L << k)));
            CHECK(P.padded_cell(k, idx).contains(o.points[n]));
        }
    }

    // The repelling fixed point 8/15 sits in the depth-1 gap forever.
    CHECK(std::get<DoublingTower>(lim).eval_limit(rat(8, 15)) == rat(8, 15));
    CHECK_THROWS_AS(kneading_code(lim, P, rat(8, 15), 4, 512), NotAlignedError);
}

TEST_CASE("pair classification proxies") {
    AnyMap tent = kTent;
    auto r = classify_pair(tent, rat(2, 7), rat(4, 7), 512, 1e-9, 0.1);
    CHECK(!r.proximal);
    CHECK(r.liminf_proxy >= 2.0 / 7 - 1e-9);

    auto diag = classify_pair(tent, rat(1, 3), rat(1, 3), 256, 1e-9, 0.1);
    CHECK(diag.proximal);
    CHECK(diag.asymptotic);
    CHECK(!diag.scrambled);

    // Contraction toward the fixed point 0.
    PiecewiseLinearMap half({rat(0), rat(1)}, {rat(0), rat(1, 2)});
    AnyMap h = half;
    auto as = classify_pair(h, rat(0), rat(1, 2), 128, 1e-9, 0.1);
    CHECK(as.asymptotic);
    CHECK(as.proximal);

    // Symmetry.
    auto r2 = classify_pair(tent, rat(4, 7), rat(2, 7), 512, 1e-9, 0.1);
    CHECK(r.liminf_proxy == r2.liminf_proxy);
    CHECK(r.limsup_proxy == r2.limsup_proxy);
}

TEST_CASE("code proximality versus orbit proximality") {
    AnyMap lim = DoublingTower(8);
    const int K = 8;
    auto P = limit_portion(K, 4096);

    auto code_of = [&](int shift) {
        return kneading_code(lim, P, iterate_exact(lim, rat(0), shift), K, 4096);
    };
    auto c0 = code_of(0);

    // Same point: proximal at any depth.
    CHECK(proximal_by_code(P, c0, c0).proximal);

    // Phase shift 2^K is congruent at every checked level.
    auto cK = code_of(1 << K);
    CHECK(proximal_by_code(P, c0, cK).proximal);

    // Phase shift 1 fails at k = 1 with an explicit separation.
    auto c1 = code_of(1);
    auto v = proximal_by_code(P, c0, c1);
    CHECK(!v.proximal);
    CHECK(v.failing_k == 1);
    CHECK(v.separation > 0);

    // Separation lower-bounds the measured liminf proxy.
    auto rep = classify_pair(lim, rat(0), iterate_exact(lim, rat(0), 1), 4096, 1e-6, 0.1);
    CHECK(rep.liminf_proxy >= to_double(v.separation) - 1e-6);

    // Agreement + transitivity on all pairs from shifts 0..5 (21 pairs).
    std::vector<KneadingCode> codes;
    std::vector<Rational> pts;
    for (int a = 0; a <= 5; ++a) {
        pts.push_back(iterate_exact(lim, rat(0), a));
        codes.push_back(code_of(a));
    }
    std::vector<std::vector<bool>> prox(6, std::vector<bool>(6));
    for (int a = 0; a <= 5; ++a)
        for (int b = a; b <= 5; ++b) {
            auto cv = proximal_by_code(P, codes[a], codes[b]);
            auto cr = classify_pair(lim, pts[a], pts[b], 4096, 1e-6, 0.1);
            CHECK(cv.proximal == cr.proximal);
            if (!cv.proximal) CHECK(cr.liminf_proxy >= to_double(cv.separation) - 1e-6);
            prox[a][b] = prox[b][a] = cr.proximal;
        }
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 5; ++b)
            for (int c = 0; c <= 5; ++c)
                if (prox[a][b] && prox[b][c]) CHECK(prox[a][c]);
}

TEST_CASE("banach density estimates") {
    AnyMap lim = DoublingTower(8);
    std::vector<std::pair<long, long>> windows{{0, 1023}, {1024, 3071}, {0, 4095}};

    auto same = banach_density_estimate(lim, rat(0), rat(0), 4, windows);
    for (const auto& w : same.windows) CHECK(w.fraction == 1.0);

    // Code-proximal pair (0, f^4(0)): phases agree mod 4, so the pair sits
    // in one depth-2 cell at every time.
    auto prox = banach_density_estimate(lim, rat(0), iterate_exact(lim, rat(0), 4), 4, windows);
    for (const auto& w : prox.windows) {
        CHECK(w.fraction >= 0.9);
        CHECK(w.fraction >= prox.benchmark[1]);  // 1 - p/2^k at k = 2
    }

    // Non-proximal pair: fractions bounded away from 1 uniformly.
    auto far = banach_density_estimate(lim, rat(0), iterate_exact(lim, rat(0), 1), 4, windows);
    for (const auto& w : far.windows) CHECK(w.fraction <= 0.6);
}

TEST_CASE("f-nonseparable evidence on a tent-based tower stage") {
    DoublingTower tower(8, PiecewiseLinearMap::tent());
    const auto& stage = tower.realized();
    AnyMap m = stage;
    auto P = compute_portion(m, rat(0), 6, full_orbit(1024));

    NonseparableParams params;
    params.base_x = rat(0);
    params.omega = full_orbit(1024);
    params.period_budget = 5;  // sweep periods up to 32 < 2^6

    // Endpoints of a depth-6 cell: every periodic point inside has period >= 64.
    const Interval& cell = P.cell(6, 0);
    auto rep = f_nonseparable_test(stage, cell.lo, cell.hi, params);
    CHECK(rep.verdict == NonseparableVerdict::nonseparable_evidence);

    // Points in different depth-1 cells are separated by a fixed point.
    auto sep = f_nonseparable_test(stage, P.cell(1, 0).hi, P.cell(1, 1).lo, params);
    CHECK(sep.verdict == NonseparableVerdict::separated);
    CHECK(sep.witness.has_value());
    CHECK(stage.eval(*sep.witness) == *sep.witness);

    CHECK_THROWS_AS(f_nonseparable_test(stage, rat(1, 3), rat(1, 3), params), InputError);

    // Points far from the surrogate stay undetermined.
    auto und = f_nonseparable_test(stage, rat(101, 240), rat(103, 240), params);
    CHECK(und.verdict == NonseparableVerdict::undetermined);
}

TEST_CASE("scrambled tuple search") {
    AnyMap tent = kTent;
    auto found = n_scrambled_search(tent, 2, rat(1, 8), 256, 1e-4);
    CHECK(found.tuple.has_value());

    AnyMap lim = DoublingTower(8);
    auto none = n_scrambled_search(lim, 3, rat(1, 16), 256, 1e-4);
    CHECK(!none.tuple.has_value());

    // Serial and parallel scans return identical results.
    auto s1 = n_scrambled_search(tent, 2, rat(1, 8), 256, 1e-4, Exec::serial);
    CHECK(s1.tuple == found.tuple);
    CHECK(s1.tuples_checked == found.tuples_checked);

    CHECK_THROWS_AS(n_scrambled_search(tent, 1, rat(1, 8), 128, 1e-4), InputError);
}

TEST_CASE("regional proximality by exact images") {
    // Mixing spreads both balls over everything.
    auto rp = regionally_proximal_test(kTent, rat(1, 5), rat(4, 5), 5, 64);
    CHECK(rp.found);

    // A proximal pair is regionally proximal: contraction toward 0.
    PiecewiseLinearMap half({rat(0), rat(1)}, {rat(0), rat(1, 2)});
    auto rp2 = regionally_proximal_test(half, rat(0), rat(1), 3, 64);
    CHECK(rp2.found);

    // Two invariant blocks with separated attractors never get close.
    auto rp3 = regionally_proximal_test(two_block_map(), rat(0), rat(1), 4, 256);
    CHECK(!rp3.found);
}

TEST_CASE("scrambled-set comparison") {
    AnyMap lim = DoublingTower(8);
    std::vector<Rational> S{rat(0), iterate_exact(lim, rat(0), 2)};

    auto eq = compare_scrambled_sets(lim, S, S, 1024, 1e-6);
    CHECK(eq.verdict == SetComparison::equivalent_evidence);

    // Singletons in different depth-1 cells separate uniformly.
    std::vector<Rational> R{iterate_exact(lim, rat(0), 1)};
    std::vector<Rational> S0{rat(0)};
    auto sep = compare_scrambled_sets(lim, S0, R, 1024, 1e-6);
    CHECK(sep.verdict == SetComparison::separable_evidence);
    CHECK(sep.separation > 0.1);

    // A deep-phase pair with tolerance between its liminf and limsup proxies
    // is proximal-but-not-asymptotic under the proxy: inconsistent.
    Rational y = iterate_exact(lim, rat(0), 16);
    auto probe = classify_pair(lim, rat(0), y, 1024, 1e-6, 0.1);
    double mid = (probe.liminf_proxy + probe.limsup_proxy) / 2;
    REQUIRE(probe.liminf_proxy < mid);
    REQUIRE(probe.limsup_proxy > mid);
    auto inc = compare_scrambled_sets(lim, S0, {y}, 1024, mid);
    CHECK(inc.verdict == SetComparison::inconsistent);
    CHECK(inc.offending_pair.has_value());
}

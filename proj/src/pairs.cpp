#include "idyn/pairs.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace idyn {

namespace {

// Padded cells sorted by position for O(log) membership lookup.
struct CellIndex {
    std::vector<Rational> los;
    std::vector<int> idx;
    const std::vector<Interval>* cells;

    explicit CellIndex(const std::vector<Interval>& padded) : cells(&padded) {
        std::vector<int> order(padded.size());
        for (std::size_t i = 0; i < padded.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return padded[a].lo < padded[b].lo; });
        for (int i : order) {
            los.push_back(padded[i].lo);
            idx.push_back(i);
        }
    }

    int find(const Rational& x) const {
        auto it = std::upper_bound(los.begin(), los.end(), x);
        if (it == los.begin()) return -1;
        int pos = static_cast<int>(it - los.begin()) - 1;
        // A point can sit past one cell's hi but before the next lo; check
        // the candidate and its left neighbor (open endpoints).
        for (int t = pos; t >= 0 && t >= pos - 1; --t)
            if ((*cells)[idx[t]].contains(x)) return idx[t];
        return -1;
    }
};

}  // namespace

KneadingCode kneading_code(const AnyMap& m, const PeriodicPortion& P, const Rational& x, int K, int horizon) {
    if (K < 1 || K > P.depth) throw InputError("kneading depth out of range");
    Orbit o = orbit(m, x, horizon);
    KneadingCode code;
    code.x = x;
    code.depth = K;
    code.portion_base = P.base_x;
    code.portion_depth = P.depth;
    for (int k = 1; k <= K; ++k) {
        int period = 1 << k;
        CellIndex index(P.padded[k - 1]);
        std::vector<int> cell(horizon + 1);
        for (int n = 0; n <= horizon; ++n) cell[n] = index.find(o.points[n]);
        if (cell[horizon] < 0)
            throw NotAlignedError("NOT_ALIGNED: orbit endpoint escapes the depth-" + std::to_string(k) +
                                  " padded cells");
        long phase = ((horizon - cell[horizon]) % period + period) % period;
        long last_violation = -1;
        for (int n = horizon; n >= 0; --n) {
            if (cell[n] < 0 || ((n - cell[n]) % period + period) % period != phase) {
                last_violation = n;
                break;
            }
        }
        long nk = last_violation + 1;
        long rem = ((phase - nk) % period + period) % period;
        nk += rem;
        if (nk > horizon)
            throw NotAlignedError("NOT_ALIGNED: no valid alignment time at depth " + std::to_string(k) +
                                  " within the horizon");
        code.c.push_back(nk);
    }
    return code;
}

namespace {

template <typename Pt, typename Dist>
PairReport classify_window(int horizon, double tol, double delta, Dist dist) {
    if (horizon < 1) throw InputError("classify_pair needs horizon >= 1");
    PairReport r;
    r.horizon = horizon;
    r.tol = tol;
    r.delta = delta;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0;
    for (int n = horizon / 2; n <= horizon; ++n) {
        double d = dist(n);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    r.liminf_proxy = lo;
    r.limsup_proxy = hi;
    r.proximal = lo <= tol;
    r.asymptotic = hi <= tol;
    r.scrambled = r.proximal && !r.asymptotic;
    r.delta_scrambled = r.scrambled && hi >= delta;
    return r;
}

}  // namespace

PairReport classify_pair(const AnyMap& m, const Rational& x, const Rational& y, int horizon, double tol,
                         double delta) {
    Orbit ox = orbit(m, x, horizon);
    Orbit oy = orbit(m, y, horizon);
    PairReport r = classify_window<Rational>(
        horizon, tol, delta, [&](int n) { return std::abs(ox.points_d[n] - oy.points_d[n]); });
    r.exact = true;
    r.x = to_double(x);
    r.y = to_double(y);
    r.x_exact = rat_str(x);
    r.y_exact = rat_str(y);
    return r;
}

PairReport classify_pair(const AnyMap& m, double x, double y, int horizon, double tol, double delta) {
    Orbit ox = orbit(m, x, horizon);
    Orbit oy = orbit(m, y, horizon);
    PairReport r = classify_window<double>(
        horizon, tol, delta, [&](int n) { return std::abs(ox.points_d[n] - oy.points_d[n]); });
    r.x = x;
    r.y = y;
    return r;
}

CodeProximality proximal_by_code(const PeriodicPortion& P, const KneadingCode& cx, const KneadingCode& cy) {
    if (cx.portion_base != cy.portion_base || cx.portion_depth != cy.portion_depth)
        throw InputError("codes come from different portions");
    if (cx.depth != cy.depth) throw InputError("codes have different depths");
    CodeProximality out;
    out.depth = cx.depth;
    for (int k = 1; k <= cx.depth; ++k) {
        long period = 1L << k;
        if (((cx.c[k - 1] - cy.c[k - 1]) % period + period) % period != 0) {
            out.proximal = false;
            out.failing_k = k;
            // Half the minimal gap between padded cells at this level; the
            // congruence failure pins the orbits in distinct cells forever.
            const auto& padded = P.padded[k - 1];
            std::optional<Rational> best;
            for (std::size_t a = 0; a < padded.size(); ++a)
                for (std::size_t b = a + 1; b < padded.size(); ++b) {
                    Rational d = interval_distance(padded[a], padded[b]);
                    if (!best || d < *best) best = d;
                }
            out.separation = *best / 2;
            return out;
        }
    }
    out.proximal = true;
    return out;
}

DensityTable banach_density_estimate(const AnyMap& m, const Rational& x, const Rational& y, int p,
                                     const std::vector<std::pair<long, long>>& windows) {
    if (p < 1) throw InputError("density threshold needs p >= 1");
    DensityTable table;
    table.p = p;
    long maxb = 0;
    for (const auto& [a, b] : windows) {
        if (a > b || a < 0) throw InputError("bad density window");
        maxb = std::max(maxb, b);
    }
    Orbit ox = orbit(m, x, static_cast<int>(maxb));
    Orbit oy = orbit(m, y, static_cast<int>(maxb));
    Rational thr(1, p);
    for (const auto& [a, b] : windows) {
        long hits = 0;
        for (long n = a; n <= b; ++n)
            if (rat_abs(ox.points[n] - oy.points[n]) < thr) ++hits;
        table.windows.push_back(
            DensityWindow{a, b, static_cast<double>(hits) / static_cast<double>(b - a + 1)});
    }
    for (int k = 1; k <= 16; ++k)
        table.benchmark.push_back(std::max(0.0, 1.0 - static_cast<double>(p) / std::pow(2.0, k)));
    return table;
}

NonseparableReport f_nonseparable_test(const PiecewiseLinearMap& map, const Rational& u, const Rational& v,
                                       const NonseparableParams& params) {
    if (u == v) throw InputError("f_nonseparable_test needs a proper pair");
    const Rational& lo = u < v ? u : v;
    const Rational& hi = u < v ? v : u;
    NonseparableReport rep;

    AnyMap m = map;
    OmegaApprox om = omega_approx(m, params.base_x, params.omega);
    bool infinite_proxy = om.reps.size() >= params.min_reps;
    auto near_surrogate = [&](const Rational& pt) {
        for (const auto& r : om.reps)
            if (rat_abs(r - pt) <= params.tol) return true;
        return false;
    };
    bool anchored = infinite_proxy && near_surrogate(lo) && near_surrogate(hi);

    // Exact periodic sweep of the open gap up to period 2^B.
    Interval gap = Interval::open(lo, hi);
    BranchDecomposition bd(map);
    int top = 1 << params.period_budget;
    for (int d = 1; d <= top; ++d) {
        bd.extend();
        IntervalSet hits = bd.fixed_set().intersect(IntervalSet(gap));
        if (!hits.empty()) {
            rep.verdict = NonseparableVerdict::separated;
            rep.witness = *hits.pick_point();
            rep.witness_period = d;
            rep.note = "periodic point of period dividing " + std::to_string(d) + " inside (u, v)";
            return rep;
        }
    }
    if (anchored) {
        rep.verdict = NonseparableVerdict::nonseparable_evidence;
        rep.note = "no periodic point of period <= " + std::to_string(top) +
                   " in (u, v); Per(f)-freeness checked only to this budget";
    } else {
        rep.verdict = NonseparableVerdict::undetermined;
        rep.note = infinite_proxy ? "pair not within tol of the omega surrogate"
                                  : "omega surrogate too small to count as infinite";
    }
    return rep;
}

ScrambledSearch n_scrambled_search(const AnyMap& m, int n, const Rational& grid_step, int horizon, double tol,
                                   Exec exec) {
    if (n < 2) throw InputError("n_scrambled_search needs n >= 2");
    if (grid_step <= 0 || grid_step > 1) throw InputError("grid step must lie in (0, 1]");
    ScrambledSearch out;
    out.horizon = horizon;
    out.tol = tol;

    std::vector<Rational> grid;
    for (Rational g = 0; g <= 1; g += grid_step) grid.push_back(g);
    int G = static_cast<int>(grid.size());
    out.grid_points = G;

    // Orbits are exact whenever the map allows it; the proxy scan runs on
    // double mirrors (orbit points carry no drift, conversion error ~1e-16
    // against tolerances >= 1e-6).
    std::vector<std::vector<double>> orb(G);
    bool exact = exact_capable(m);
    for (int i = 0; i < G; ++i) {
        orb[i] = exact ? orbit(m, grid[i], horizon).points_d : orbit(m, to_double(grid[i]), horizon).points_d;
    }

    // Enumerate index combinations lexicographically; report the least hit.
    std::vector<long> counts(G, 0);
    std::vector<std::vector<int>> hits(G);
    auto scan_first = [&](int i0) {
        std::vector<int> c(n);
        c[0] = i0;
        for (int j = 1; j < n; ++j) c[j] = i0 + j;
        if (c[n - 1] >= G) return;
        long local = 0;
        std::vector<int> best;
        while (true) {
            ++local;
            bool clustered = false, separated = false;
            for (int t = 1; t <= horizon && !(clustered && separated); ++t) {
                double maxd = 0, mind = 2;
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b) {
                        double d = std::abs(orb[c[a]][t] - orb[c[b]][t]);
                        maxd = std::max(maxd, d);
                        mind = std::min(mind, d);
                    }
                if (maxd < tol) clustered = true;
                if (mind > tol) separated = true;
            }
            if (clustered && separated) {
                best.assign(c.begin(), c.end());
                break;
            }
            // next combination with fixed first index
            int j = n - 1;
            while (j >= 1 && c[j] == G - n + j) --j;
            if (j < 1) break;
            ++c[j];
            for (int t2 = j + 1; t2 < n; ++t2) c[t2] = c[t2 - 1] + 1;
        }
        counts[i0] = local;
        if (!best.empty()) hits[i0] = best;
    };

#ifdef _OPENMP
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i0 = 0; i0 < G; ++i0) scan_first(i0);
    } else
#endif
    {
        (void)exec;
        for (int i0 = 0; i0 < G; ++i0) scan_first(i0);
    }

    for (int i0 = 0; i0 < G; ++i0) out.tuples_checked += counts[i0];
    for (int i0 = 0; i0 < G; ++i0) {
        if (!hits[i0].empty()) {
            std::vector<Rational> tuple;
            for (int idx : hits[i0]) tuple.push_back(grid[idx]);
            out.tuple = std::move(tuple);
            break;  // smallest leading index = lexicographically least
        }
    }
    return out;
}

RegionalProximality regionally_proximal_test(const PiecewiseLinearMap& map, const Rational& x,
                                             const Rational& y, int k, int horizon) {
    if (k < 1) throw InputError("regional proximality needs k >= 1");
    RegionalProximality out;
    out.k = k;
    out.horizon = horizon;
    Rational r(1, k);
    auto ball = [&](const Rational& c) {
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
    };
    IntervalSet U = ball(x), V = ball(y);
    for (int n = 1; n <= horizon; ++n) {
        U = map.image(U);
        V = map.image(V);
        if (set_distance(U, V) < r) {
            out.found = true;
            out.first_n = n;
            return out;
        }
    }
    return out;
}

SetComparisonReport compare_scrambled_sets(const AnyMap& m, const std::vector<Rational>& S,
                                           const std::vector<Rational>& R, int horizon, double tol) {
    if (S.empty() || R.empty()) throw InputError("compare_scrambled_sets needs nonempty sets");
    SetComparisonReport rep;
    std::vector<Orbit> os, orr;
    for (const auto& s : S) os.push_back(orbit(m, s, horizon));
    for (const auto& r : R) orr.push_back(orbit(m, r, horizon));
    auto tail_max = [&](const Orbit& a, const Orbit& b) {
        double d = 0;
        for (int n = horizon / 2; n <= horizon; ++n) d = std::max(d, std::abs(a.points_d[n] - b.points_d[n]));
        return d;
    };
    auto tail_min = [&](const Orbit& a, const Orbit& b) {
        double d = 2;
        for (int n = horizon / 2; n <= horizon; ++n) d = std::min(d, std::abs(a.points_d[n] - b.points_d[n]));
        return d;
    };

    if (S.size() == R.size()) {
        // Greedy matching on asymptotic tail distance.
        std::vector<bool> used(R.size(), false);
        std::vector<int> match(S.size(), -1);
        bool all_asymptotic = true;
        for (std::size_t i = 0; i < S.size(); ++i) {
            double best = 3;
            int pick = -1;
            for (std::size_t j = 0; j < R.size(); ++j) {
                if (used[j]) continue;
                double d = tail_max(os[i], orr[j]);
                if (d < best) {
                    best = d;
                    pick = static_cast<int>(j);
                }
            }
            match[i] = pick;
            used[pick] = true;
            if (best > tol) all_asymptotic = false;
        }
        if (all_asymptotic) {
            rep.verdict = SetComparison::equivalent_evidence;
            for (std::size_t i = 0; i < S.size(); ++i) rep.matching.emplace_back(S[i], R[match[i]]);
            rep.note = "greedy matching is asymptotic on every pair (tail window proxy)";
            return rep;
        }
    } else {
        rep.note = "size mismatch, equivalence not attempted; ";
    }

    double sep = 3;
    std::pair<Rational, Rational> argmin;
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = 0; j < R.size(); ++j) {
            double d = tail_min(os[i], orr[j]);
            if (d < sep) {
                sep = d;
                argmin = {S[i], R[j]};
            }
        }
    if (sep > tol) {
        rep.verdict = SetComparison::separable_evidence;
        rep.separation = sep;
        rep.note += "uniform separation across S x R";
        return rep;
    }
    rep.verdict = SetComparison::inconsistent;
    rep.offending_pair = argmin;
    rep.separation = sep;
    rep.note += "cross pair approaches within tol but no asymptotic matching exists";
    return rep;
}

}  // namespace idyn

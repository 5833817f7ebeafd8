#include "idyn/portion.hpp"

#include <algorithm>

namespace idyn {

PeriodicPortion compute_portion(const AnyMap& m, const Rational& x, int K, const OmegaParams& params) {
    if (K < 0) throw InputError("portion depth must be nonnegative");
    if (!exact_capable(m)) throw InputError("compute_portion needs an exact map");
    OmegaApprox om = omega_approx(m, x, params);
    long need = 3L * (1L << K);
    if (static_cast<long>(om.reps.size()) < need)
        throw NotInfiniteError("NOT_INFINITE: omega surrogate has " + std::to_string(om.reps.size()) +
                               " representatives, need >= " + std::to_string(need) +
                               " for depth " + std::to_string(K) + "; raise the horizon or lower K");

    Orbit o = orbit(m, x, params.horizon);
    PeriodicPortion P;
    P.base_x = x;
    P.depth = K;
    P.params = params;
    P.omega_reps = om.reps;
    if (auto* tw = std::get_if<DoublingTower>(&m)) {
        P.from_limit = true;
        P.stage = tw->stage();
    } else {
        P.stage = -1;
    }

    for (int k = 1; k <= K; ++k) {
        int cells_k = 1 << k;
        std::vector<Rational> lo(cells_k), hi(cells_k);
        std::vector<bool> seen(cells_k, false);
        for (int j = params.burn; j <= params.horizon; ++j) {
            int i = j % cells_k;
            const Rational& p = o.points[j];
            if (!seen[i]) {
                lo[i] = hi[i] = p;
                seen[i] = true;
            } else {
                if (p < lo[i]) lo[i] = p;
                if (p > hi[i]) hi[i] = p;
            }
        }
        std::vector<Interval> level;
        level.reserve(cells_k);
        for (int i = 0; i < cells_k; ++i) {
            if (!seen[i])
                throw NotInfiniteError("NOT_INFINITE: no orbit samples in phase class " + std::to_string(i) +
                                       " at depth " + std::to_string(k));
            level.push_back(Interval::closed(lo[i], hi[i]));
        }
        // Disjointness across the level; exact data only shrinks hulls, so a
        // failure means the base orbit does not carry this portion.
        std::vector<int> order(cells_k);
        for (int i = 0; i < cells_k; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return level[a].lo < level[b].lo; });
        for (int t = 0; t + 1 < cells_k; ++t) {
            if (interval_distance(level[order[t]], level[order[t + 1]]) == 0)
                throw InputError("portion cells touch at depth " + std::to_string(k) +
                                 "; the omega surrogate does not split into 2^k disjoint pieces");
        }
        // Pad: s_k = min(1/k, (1/4) min gap over spatially adjacent cells).
        // Taking the minimum over adjacent pairs (equivalently, all pairs) is
        // what keeps the padded cells pairwise disjoint; the min over
        // phase-consecutive pairs alone can exceed half the smallest spatial
        // gap already at depth 2 on the standard tower.
        Rational s = Rational(1, k);
        for (int t = 0; t + 1 < cells_k; ++t) {
            Rational d = interval_distance(level[order[t]], level[order[t + 1]]) / 4;
            if (d < s) s = d;
        }
        std::vector<Interval> pad_level;
        pad_level.reserve(cells_k);
        for (int i = 0; i < cells_k; ++i) {
            Rational a = level[i].lo - s;
            Rational b = level[i].hi + s;
            bool ac = false, bc = false;
            if (a < 0) {
                a = 0;
                ac = true;
            }
            if (b > 1) {
                b = 1;
                bc = true;
            }
            pad_level.push_back(Interval::make(a, b, ac, bc));
        }
        P.cells.push_back(std::move(level));
        P.pad.push_back(s);
        P.padded.push_back(std::move(pad_level));
    }
    return P;
}

namespace {

bool disjoint_level(const std::vector<Interval>& level) {
    for (std::size_t a = 0; a < level.size(); ++a)
        for (std::size_t b = a + 1; b < level.size(); ++b)
            if (interval_distance(level[a], level[b]) == 0) return false;
    return true;
}

}  // namespace

PortionVerification verify_portion(const PiecewiseLinearMap& map, const PeriodicPortion& P, Exec exec,
                                   std::size_t piece_budget) {
    PortionVerification v;
    if (P.depth < 1) throw InputError("verify_portion needs depth >= 1");

    v.covering = true;
    for (int k = 1; k <= P.depth; ++k) {
        int cells_k = 1 << k;
        for (int i = 0; i < cells_k; ++i) {
            IntervalSet img = map.image(IntervalSet(P.cell(k, i)));
            IntervalSet next(P.cell(k, (i + 1) % cells_k));
            if (!img.superset_of(next)) {
                v.covering = false;
                v.failures.push_back("covering fails at k=" + std::to_string(k) + " i=" + std::to_string(i));
            }
        }
    }

    v.disjoint = true;
    for (int k = 1; k <= P.depth; ++k) {
        if (!disjoint_level(P.cells[k - 1])) {
            v.disjoint = false;
            v.failures.push_back("cells not pairwise disjoint at k=" + std::to_string(k));
        }
    }

    v.nesting = true;
    for (int k = 1; k < P.depth; ++k) {
        int cells_k = 1 << k;
        for (int i = 0; i < cells_k; ++i) {
            const Interval& parent = P.cell(k, i);
            for (int child_idx : {i, cells_k + i}) {
                const Interval& child = P.cell(k + 1, child_idx);
                bool inside = child.lo >= parent.lo && child.hi <= parent.hi;
                // Hulls over exact orbit samples share endpoints exactly; a
                // miss here signals under-sampling rather than a structural
                // violation, and the message says so.
                bool shares = child.lo == parent.lo || child.hi == parent.hi;
                if (!inside || !shares) {
                    v.nesting = false;
                    v.failures.push_back("nesting fails at k=" + std::to_string(k) + " child " +
                                         std::to_string(child_idx) +
                                         (inside ? " (no shared endpoint; possibly under-sampled)"
                                                 : " (child escapes parent)"));
                }
            }
        }
    }

    // Periodic structure: a point of least period 2^k inside each cell, no
    // periodic point of any smaller period.
    v.periods = true;
    int top = 1 << P.depth;
    std::vector<IntervalSet> fixed(top + 1);
    {
        BranchDecomposition bd(map, piece_budget);
        for (int n = 1; n <= top; ++n) {
            bd.extend(exec);
            fixed[n] = bd.fixed_set();
        }
    }
    for (int k = 1; k <= P.depth; ++k) {
        int period = 1 << k;
        IntervalSet lp = fixed[period];
        for (int d = 1; d < period; ++d)
            if (period % d == 0) lp = lp.subtract(fixed[d]);
        IntervalSet smaller;
        for (int d = 1; d < period; ++d) smaller = smaller.unite(fixed[d]);
        for (int i = 0; i < (1 << k); ++i) {
            IntervalSet cell(P.cell(k, i));
            if (lp.intersect(cell).empty()) {
                v.periods = false;
                v.failures.push_back("no least-period-" + std::to_string(period) + " point in cell k=" +
                                     std::to_string(k) + " i=" + std::to_string(i));
            }
            if (!smaller.intersect(cell).empty()) {
                v.periods = false;
                v.failures.push_back("periodic point of period < " + std::to_string(period) +
                                     " inside cell k=" + std::to_string(k) + " i=" + std::to_string(i));
            }
        }
    }
    return v;
}

NestedLimit nested_limit(const AnyMap& m, const PeriodicPortion& P, const std::vector<int>& path) {
    if (static_cast<int>(path.size()) != P.depth) throw InputError("path length must equal portion depth");
    NestedLimit nl;
    nl.path = path;
    for (int k = 1; k <= P.depth; ++k) {
        int i = path[k - 1];
        if (i < 0 || i >= (1 << k)) throw InputError("path index out of range at level " + std::to_string(k));
        if (k > 1) {
            int prev = path[k - 2];
            if (i % (1 << (k - 1)) != prev)
                throw InputError("path is not nested: index " + std::to_string(i) + " is not a child of " +
                                 std::to_string(prev));
            const Interval& child = P.cell(k, i);
            const Interval& parent = P.cell(k - 1, prev);
            if (child.lo < parent.lo || child.hi > parent.hi)
                throw InputError("path cell escapes its parent at level " + std::to_string(k));
        }
        nl.widths.push_back(P.cell(k, i).width());
    }
    nl.limit = P.cell(P.depth, path.back());

    // Endpoint behavior proxies. Regular recurrence along powers of two is
    // tested through the returns |f^(2^j)(y) - y|.
    auto returns_under_doubling = [&](const Rational& y) {
        int jmax = 0;
        while ((1 << (jmax + 1)) <= P.params.horizon) ++jmax;
        Rational cur = y;
        int steps = 0;
        Rational first_d(-1), last_d(-1);
        for (int j = 1; j <= jmax; ++j) {
            int target = 1 << j;
            while (steps < target) {
                cur = eval_exact(m, cur);
                ++steps;
            }
            Rational d = rat_abs(cur - y);
            if (first_d < 0) first_d = d;
            last_d = d;
        }
        // Scale-free decay proxy: the returns must have shrunk decisively by
        // the last computed doubling time.
        return last_d <= P.params.tol || (first_d > 0 && last_d * 8 <= first_d);
    };
    const Rational& lo = nl.limit.lo;
    const Rational& hi = nl.limit.hi;
    bool rr_lo = returns_under_doubling(lo);
    bool rr_hi = nl.limit.is_point() ? rr_lo : returns_under_doubling(hi);
    auto flags_lo = recurrence_classify(m, lo, P.params.horizon, Rational(P.params.tol * 16));
    auto flags_hi = nl.limit.is_point()
                        ? flags_lo
                        : recurrence_classify(m, hi, P.params.horizon, Rational(P.params.tol * 16));

    bool shrinking = true;
    for (std::size_t t = 1; t < nl.widths.size(); ++t)
        if (!(nl.widths[t] < nl.widths[t - 1]) && nl.widths[t] != 0) shrinking = false;

    if (rr_lo && rr_hi && shrinking) {
        nl.classification = LimitClass::singleton_regular;
        nl.note = "both endpoints return under f^(2^n) and widths shrink; proxy for a singleton cell";
    } else if (!rr_lo && !rr_hi && flags_lo.strongly_recurrent && flags_hi.strongly_recurrent) {
        nl.classification = LimitClass::interval_two_strong;
        nl.note = "endpoints strongly recurrent without doubling returns; proxy for a two-point cell";
    } else if ((rr_lo && !flags_hi.recurrent) || (rr_hi && !flags_lo.recurrent)) {
        nl.classification = LimitClass::interval_mixed;
        nl.note = "one endpoint regularly recurrent, the other not recurrent";
    } else {
        nl.classification = LimitClass::undetermined;
        nl.note = "undetermined at depth " + std::to_string(P.depth);
    }
    return nl;
}

std::optional<SeparatingPoint> separating_periodic_point(const PiecewiseLinearMap& map,
                                                         const PeriodicPortion& P, int k, int r1, int r2,
                                                         std::string* diagnostic) {
    if (r1 == r2) throw InputError("separating point needs two distinct cell indices");
    if (k < 1 || k > P.depth) throw InputError("level k out of range");
    const Interval& a = P.cell(k, r1);
    const Interval& b = P.cell(k, r2);
    const Interval& left = a.hi <= b.lo ? a : b;
    const Interval& right = a.hi <= b.lo ? b : a;
    if (left.hi >= right.lo) {
        if (diagnostic) *diagnostic = "cells overlap or touch; no strictly-between gap";
        return std::nullopt;
    }
    Interval gap = Interval::open(left.hi, right.lo);
    BranchDecomposition bd(map);
    int steps = 0;
    for (int j = 0; j <= k; ++j) {
        int target = 1 << j;
        while (steps < target) {
            bd.extend();
            ++steps;
        }
        IntervalSet hits = bd.fixed_set().intersect(IntervalSet(gap));
        if (!hits.empty()) {
            SeparatingPoint sp;
            sp.point = *hits.pick_point();
            sp.level_found = j;
            // Least period by exact iteration; divides 2^j.
            Rational cur = sp.point;
            int d = 0;
            for (int t = 1; t <= target; ++t) {
                cur = map.eval(cur);
                if (cur == sp.point) {
                    d = t;
                    break;
                }
            }
            sp.least_period = d;
            return sp;
        }
    }
    if (diagnostic)
        *diagnostic = "no periodic point of period <= 2^" + std::to_string(k) +
                      " in the gap; periodic budget exhausted (hypothesis violation or budget)";
    return std::nullopt;
}

std::optional<std::vector<int>> adding_machine_address(const PeriodicPortion& P, const Rational& y, int K) {
    if (K < 0 || K > P.depth) throw InputError("address depth out of range");
    std::vector<int> path;
    path.reserve(K);
    for (int k = 1; k <= K; ++k) {
        int found = -1;
        for (int i = 0; i < (1 << k); ++i) {
            if (P.padded_cell(k, i).contains(y)) {
                found = i;
                break;
            }
        }
        if (found < 0) return std::nullopt;  // outside every depth-K padded cell
        path.push_back(found);
    }
    return path;
}

std::optional<SeparatingPoint> ruette_check(const PiecewiseLinearMap& map, const PeriodicPortion& P,
                                            const Interval& J, std::string* diagnostic) {
    std::vector<Rational> inside;
    for (const auto& r : P.omega_reps)
        if (J.contains(r)) inside.push_back(r);
    if (inside.size() < 3)
        throw InputError("ruette_check needs an interval holding >= 3 omega-surrogate representatives");
    const Rational& x1 = inside.front();
    const Rational& x3 = inside.back();
    auto cell_of = [&](int k, const Rational& p) {
        for (int i = 0; i < (1 << k); ++i)
            if (P.cell(k, i).contains(p)) return i;
        return -1;
    };
    for (int k = 1; k <= P.depth; ++k) {
        int c1 = cell_of(k, x1);
        int c3 = cell_of(k, x3);
        if (c1 < 0 || c3 < 0) break;
        if (c1 != c3) return separating_periodic_point(map, P, k, c1, c3, diagnostic);
    }
    if (diagnostic)
        *diagnostic = "representatives never separate across cells up to depth " + std::to_string(P.depth) +
                      "; deepen the portion";
    return std::nullopt;
}

}  // namespace idyn

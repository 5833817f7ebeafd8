#include "idyn/orbit.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace idyn {

Orbit orbit(const AnyMap& m, const Rational& x, int n) {
    if (n < 0) throw InputError("orbit needs n >= 0");
    Orbit o;
    o.exact = true;
    o.points.reserve(n + 1);
    o.points_d.reserve(n + 1);
    Rational cur = x;
    for (int i = 0; i <= n; ++i) {
        o.points.push_back(cur);
        o.points_d.push_back(to_double(cur));
        if (i < n) cur = eval_exact(m, cur);
    }
    return o;
}

Orbit orbit(const AnyMap& m, double x, int n) {
    if (n < 0) throw InputError("orbit needs n >= 0");
    Orbit o;
    o.exact = false;
    o.points_d.reserve(n + 1);
    double cur = x;
    for (int i = 0; i <= n; ++i) {
        o.points_d.push_back(cur);
        if (i < n) cur = eval_approx(m, cur);
    }
    return o;
}

namespace {

template <typename T>
std::vector<T> cluster_left_to_right(std::vector<T> pts, const T& tol) {
    std::sort(pts.begin(), pts.end());
    std::vector<T> reps;
    for (const auto& p : pts) {
        if (reps.empty() || p - reps.back() > tol) reps.push_back(p);
    }
    return reps;
}

}  // namespace

OmegaApprox omega_approx(const AnyMap& m, const Rational& x, const OmegaParams& p) {
    if (p.burn >= p.horizon) throw InputError("omega surrogate needs burn < horizon");
    if (p.tol <= 0) throw InputError("omega surrogate needs tol > 0");
    OmegaApprox out;
    out.params = p;
    out.exact = true;
    Orbit o = orbit(m, x, p.horizon);
    std::vector<Rational> tail(o.points.begin() + p.burn, o.points.end());
    out.reps = cluster_left_to_right(std::move(tail), p.tol);
    out.reps_d.reserve(out.reps.size());
    for (const auto& r : out.reps) out.reps_d.push_back(to_double(r));
    out.degenerate = out.reps.empty();
    return out;
}

OmegaApprox omega_approx(const AnyMap& m, double x, const OmegaParams& p) {
    if (p.burn >= p.horizon) throw InputError("omega surrogate needs burn < horizon");
    OmegaApprox out;
    out.params = p;
    out.exact = false;
    Orbit o = orbit(m, x, p.horizon);
    std::vector<double> tail(o.points_d.begin() + p.burn, o.points_d.end());
    out.reps_d = cluster_left_to_right(std::move(tail), p.tol_d);
    out.degenerate = out.reps_d.empty();
    return out;
}

BranchDecomposition::BranchDecomposition(const PiecewiseLinearMap& map, std::size_t piece_budget)
    : BranchDecomposition(map, Interval::closed(0, 1), piece_budget) {}

BranchDecomposition::BranchDecomposition(const PiecewiseLinearMap& map, const Interval& domain,
                                         std::size_t piece_budget)
    : map_(&map), budget_(piece_budget) {
    branches_.push_back(AffineBranch{domain.lo, domain.hi, Rational(1), Rational(0)});
}

namespace {

// Locate the affine piece of `map` whose domain contains v; ties at shared
// breakpoints resolve to the left piece, which agrees at the point.
std::size_t locate_piece(const PiecewiseLinearMap& map, const Rational& v) {
    const auto& xs = map.breakpoints();
    auto it = std::upper_bound(xs.begin(), xs.end(), v);
    if (it == xs.end()) return xs.size() - 2;
    std::size_t j = static_cast<std::size_t>(it - xs.begin());
    return j == 0 ? 0 : j - 1;
}

void extend_one(const PiecewiseLinearMap& map, const AffineBranch& b, std::vector<AffineBranch>& out) {
    const auto& xs = map.breakpoints();
    const auto& ys = map.values();
    auto compose = [&](const Rational& lo, const Rational& hi, const AffineBranch& br) {
        // midpoint of the image selects the piece; exact rational arithmetic
        Rational vmid = br.slope * ((lo + hi) / 2) + br.icept;
        std::size_t j = locate_piece(map, vmid);
        Rational ps = (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]);
        Rational pt = ys[j] - ps * xs[j];
        out.push_back(AffineBranch{lo, hi, ps * br.slope, ps * br.icept + pt});
    };
    if (b.slope == 0) {
        // Constant branches never split again.
        Rational v = map.eval(b.icept);
        out.push_back(AffineBranch{b.lo, b.hi, Rational(0), v});
        return;
    }
    Rational va = b.slope * b.lo + b.icept;
    Rational vb = b.slope * b.hi + b.icept;
    const Rational& vmin = va < vb ? va : vb;
    const Rational& vmax = va < vb ? vb : va;
    // Domain positions of map breakpoints strictly inside the image.
    std::vector<Rational> cuts;
    auto lo_it = std::upper_bound(xs.begin(), xs.end(), vmin);
    for (auto it = lo_it; it != xs.end() && *it < vmax; ++it) cuts.push_back((*it - b.icept) / b.slope);
    if (b.slope < 0) std::reverse(cuts.begin(), cuts.end());
    Rational prev = b.lo;
    for (const auto& c : cuts) {
        compose(prev, c, b);
        prev = c;
    }
    compose(prev, b.hi, b);
}

}  // namespace

void BranchDecomposition::extend(Exec exec) {
    std::vector<AffineBranch> next;
    next.reserve(branches_.size() + map_->piece_count());
#ifdef _OPENMP
    if (exec == Exec::parallel && branches_.size() > 256) {
        int nt = omp_get_max_threads();
        std::vector<std::vector<AffineBranch>> locals(nt);
        std::size_t chunk = (branches_.size() + nt - 1) / nt;
#pragma omp parallel num_threads(nt)
        {
            int tid = omp_get_thread_num();
            std::size_t lo = tid * chunk;
            std::size_t hi = std::min(branches_.size(), lo + chunk);
            auto& local = locals[tid];
            for (std::size_t i = lo; i < hi; ++i) extend_one(*map_, branches_[i], local);
        }
        for (auto& loc : locals) next.insert(next.end(), loc.begin(), loc.end());
    } else
#endif
    {
        (void)exec;
        for (const auto& b : branches_) extend_one(*map_, b, next);
    }
    if (next.size() > budget_) {
        throw ResourceError("branch decomposition exceeded piece budget " + std::to_string(budget_) +
                            " at power " + std::to_string(n_ + 1));
    }
    branches_ = std::move(next);
    ++n_;
}

IntervalSet BranchDecomposition::fixed_set() const {
    std::vector<Interval> out;
    for (const auto& b : branches_) {
        if (b.slope == 1) {
            if (b.icept == 0) out.push_back(Interval::closed(b.lo, b.hi));
            continue;
        }
        Rational x = b.icept / (Rational(1) - b.slope);
        if (x >= b.lo && x <= b.hi) out.push_back(Interval::point(x));
    }
    return IntervalSet::from_parts(std::move(out));
}

IntervalSet periodic_points(const PiecewiseLinearMap& map, int n, Exec exec, std::size_t piece_budget) {
    if (n < 1) throw InputError("periodic_points needs n >= 1");
    BranchDecomposition bd(map, piece_budget);
    for (int i = 0; i < n; ++i) bd.extend(exec);
    return bd.fixed_set();
}

namespace {

Rational pick_least_period_witness(const PiecewiseLinearMap& map, const IntervalSet& lp, int n) {
    auto w = lp.pick_point();
    if (!w) throw InputError("empty least-period set");
    // Re-verify by exact iteration.
    Rational cur = *w;
    for (int j = 1; j <= n; ++j) {
        cur = map.eval(cur);
        if (j < n && cur == *w)
            throw InputError("least-period witness failed verification at period " + std::to_string(j));
    }
    if (cur != *w) throw InputError("least-period witness does not return");
    return *w;
}

}  // namespace

PeriodSpectrum period_spectrum(const PiecewiseLinearMap& map, int max_n, Exec exec, std::size_t piece_budget) {
    if (max_n < 1) throw InputError("period_spectrum needs max_n >= 1");
    PeriodSpectrum sp;
    sp.max_n = max_n;
    std::vector<IntervalSet> fixed(max_n + 1);
    BranchDecomposition bd(map, piece_budget);
    for (int n = 1; n <= max_n; ++n) {
        bd.extend(exec);
        fixed[n] = bd.fixed_set();
        IntervalSet lp = fixed[n];
        for (int d = 1; d < n; ++d)
            if (n % d == 0) lp = lp.subtract(fixed[d]);
        if (!lp.empty()) {
            sp.periods.push_back(n);
            sp.witness[n] = pick_least_period_witness(map, lp, n);
            sp.least_period_sets[n] = std::move(lp);
        }
    }
    return sp;
}

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}

EntropyCertificate entropy_classify(const PiecewiseLinearMap& map, int max_n, Exec exec,
                                    std::size_t piece_budget) {
    if (max_n < 3) throw InputError("entropy_classify needs max_n >= 3");
    EntropyCertificate cert;
    cert.max_n = max_n;
    cert.spectrum.max_n = max_n;
    std::vector<IntervalSet> fixed(max_n + 1);
    BranchDecomposition bd(map, piece_budget);
    for (int n = 1; n <= max_n; ++n) {
        bd.extend(exec);
        fixed[n] = bd.fixed_set();
        IntervalSet lp = fixed[n];
        for (int d = 1; d < n; ++d)
            if (n % d == 0) lp = lp.subtract(fixed[d]);
        if (!lp.empty()) {
            cert.spectrum.periods.push_back(n);
            cert.spectrum.witness[n] = pick_least_period_witness(map, lp, n);
            cert.spectrum.least_period_sets[n] = lp;
            if (!power_of_two(n)) {
                cert.verdict = EntropyCertificate::Verdict::positive;
                cert.witness = cert.spectrum.witness[n];
                cert.witness_period = n;
                cert.note = "least period " + std::to_string(n) + " is not a power of two";
                return cert;
            }
        }
    }
    cert.verdict = EntropyCertificate::Verdict::consistent_with_zero;
    cert.note = "all least periods up to " + std::to_string(max_n) +
                " are powers of two; evidence, not a proof of zero entropy";
    return cert;
}

namespace {

template <typename Dist>
RecurrenceFlags classify_from_visits(int horizon, double radius, Dist in_ball) {
    RecurrenceFlags f;
    f.horizon = horizon;
    f.radius = radius;
    std::vector<int> visits{0};
    for (int n = 1; n <= horizon; ++n)
        if (in_ball(n)) visits.push_back(n);
    f.recurrent = visits.size() > 1;
    if (!f.recurrent) return f;
    int max_gap = 0;
    for (std::size_t i = 1; i < visits.size(); ++i) max_gap = std::max(max_gap, visits[i] - visits[i - 1]);
    f.max_return_gap = max_gap;
    // Strong recurrence proxy: returns keep a bounded gap, and the orbit does
    // not stop returning near the end of the horizon.
    f.strongly_recurrent = (horizon - visits.back()) <= max_gap;
    for (int N = 1; N <= horizon / 2; ++N) {
        bool ok = true;
        for (int k = N; k <= horizon; k += N) {
            if (!(k == 0 || in_ball(k))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            f.regularly_recurrent = true;
            f.regular_period = N;
            break;
        }
    }
    if (f.regularly_recurrent) f.strongly_recurrent = true;  // flag chain kept monotone
    return f;
}

}  // namespace

RecurrenceFlags recurrence_classify(const AnyMap& m, const Rational& x, int horizon, const Rational& radius) {
    if (horizon < 1) throw InputError("recurrence_classify needs horizon >= 1");
    Orbit o = orbit(m, x, horizon);
    return classify_from_visits(horizon, to_double(radius),
                                [&](int n) { return rat_abs(o.points[n] - x) < radius; });
}

RecurrenceFlags recurrence_classify(const AnyMap& m, double x, int horizon, double radius) {
    if (horizon < 1) throw InputError("recurrence_classify needs horizon >= 1");
    Orbit o = orbit(m, x, horizon);
    return classify_from_visits(horizon, radius,
                                [&](int n) { return std::abs(o.points_d[n] - x) < radius; });
}

}  // namespace idyn

#include "idyn/map.hpp"

#include <algorithm>

namespace idyn {

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<Rational> breakpoints, std::vector<Rational> values)
    : xs_(std::move(breakpoints)), ys_(std::move(values)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size())
        throw InputError("map needs matching breakpoint/value lists with at least two entries");
    if (xs_.front() != 0 || xs_.back() != 1) throw InputError("breakpoints must start at 0 and end at 1");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (xs_[i - 1] >= xs_[i]) throw InputError("breakpoints must be strictly increasing");
    for (const auto& v : ys_)
        if (v < 0 || v > 1) throw InputError("value outside [0,1]: not a self-map");
    dxs_.reserve(xs_.size());
    dys_.reserve(ys_.size());
    for (const auto& x : xs_) dxs_.push_back(to_double(x));
    for (const auto& y : ys_) dys_.push_back(to_double(y));
}

Rational PiecewiseLinearMap::eval(const Rational& x) const {
    if (x < 0 || x > 1) throw InputError("eval outside [0,1]: " + rat_str(x));
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t j = (it == xs_.end()) ? xs_.size() - 2 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    const Rational& a = xs_[j];
    const Rational& b = xs_[j + 1];
    return ys_[j] + (ys_[j + 1] - ys_[j]) * (x - a) / (b - a);
}

double PiecewiseLinearMap::eval(double x) const {
    if (x < 0) x = 0;
    if (x > 1) x = 1;
    auto it = std::upper_bound(dxs_.begin(), dxs_.end(), x);
    std::size_t j = (it == dxs_.end() || it == dxs_.begin()) ? dxs_.size() - 2
                                                             : static_cast<std::size_t>(it - dxs_.begin()) - 1;
    double a = dxs_[j], b = dxs_[j + 1];
    double y = dys_[j] + (dys_[j + 1] - dys_[j]) * (x - a) / (b - a);
    if (y < 0) return 0;
    if (y > 1) return 1;
    return y;
}

namespace {

// Forward image of one interval clipped inside an affine piece.
Interval affine_forward(const Interval& iv, const Rational& slope, const Rational& icept) {
    if (slope == 0) return Interval::point(icept);
    Rational a = slope * iv.lo + icept;
    Rational b = slope * iv.hi + icept;
    if (slope > 0) return Interval{a, b, iv.lo_closed, iv.hi_closed};
    return Interval{b, a, iv.hi_closed, iv.lo_closed};
}

}  // namespace

IntervalSet PiecewiseLinearMap::image(const IntervalSet& s) const {
    std::vector<Interval> out;
    for (const auto& part : s.parts()) {
        for (std::size_t j = 0; j + 1 < xs_.size(); ++j) {
            if (xs_[j + 1] < part.lo) continue;
            if (xs_[j] > part.hi) break;
            Interval dom = Interval::closed(xs_[j], xs_[j + 1]);
            auto clip = interval_intersection(part, dom);
            if (!clip) continue;
            Rational slope = (ys_[j + 1] - ys_[j]) / (xs_[j + 1] - xs_[j]);
            Rational icept = ys_[j] - slope * xs_[j];
            out.push_back(affine_forward(*clip, slope, icept));
        }
    }
    return IntervalSet::from_parts(std::move(out));
}

IntervalSet PiecewiseLinearMap::preimage(const IntervalSet& s) const {
    std::vector<Interval> out;
    for (std::size_t j = 0; j + 1 < xs_.size(); ++j) {
        Interval dom = Interval::closed(xs_[j], xs_[j + 1]);
        Rational slope = (ys_[j + 1] - ys_[j]) / (xs_[j + 1] - xs_[j]);
        for (const auto& part : s.parts()) {
            if (slope == 0) {
                if (part.contains(ys_[j])) out.push_back(dom);
                continue;
            }
            // Invert the affine piece on the target, then clip to the domain.
            Rational a = (part.lo - ys_[j]) / slope + xs_[j];
            Rational b = (part.hi - ys_[j]) / slope + xs_[j];
            Interval inv = slope > 0 ? Interval{a, b, part.lo_closed, part.hi_closed}
                                     : Interval{b, a, part.hi_closed, part.lo_closed};
            if (auto clip = interval_intersection(inv, dom)) out.push_back(*clip);
        }
    }
    return IntervalSet::from_parts(std::move(out));
}

IntervalSet PiecewiseLinearMap::image_iter(IntervalSet s, int n) const {
    for (int i = 0; i < n; ++i) s = image(s);
    return s;
}

IntervalSet PiecewiseLinearMap::preimage_iter(IntervalSet s, int n) const {
    for (int i = 0; i < n; ++i) s = preimage(s);
    return s;
}

PiecewiseLinearMap double_construct(const PiecewiseLinearMap& g) {
    std::vector<Rational> xs, ys;
    xs.push_back(Rational(0));
    ys.push_back(Rational(2, 3));
    xs.push_back(Rational(1, 3));
    ys.push_back(Rational(1));
    // Scaled copy of g on [2/3, 1]; its first breakpoint lands at 2/3 and
    // doubles as the right end of the connecting middle piece.
    const auto& gx = g.breakpoints();
    const auto& gy = g.values();
    for (std::size_t j = 0; j < gx.size(); ++j) {
        xs.push_back(Rational(2, 3) + gx[j] / 3);
        ys.push_back(gy[j] / 3);
    }
    return PiecewiseLinearMap(std::move(xs), std::move(ys));
}

DoublingTower::DoublingTower(int stage, PiecewiseLinearMap base, int recursion_guard)
    : stage_(stage), base_(std::move(base)), realized_(base_), guard_(recursion_guard) {
    if (stage < 0) throw InputError("tower stage must be nonnegative");
    for (int i = 0; i < stage; ++i) realized_ = double_construct(realized_);
}

Rational DoublingTower::eval_limit(const Rational& x) const {
    if (x < 0 || x > 1) throw InputError("eval outside [0,1]: " + rat_str(x));
    if (x == 1) return Rational(0);
    Rational cur = x;
    Rational scale = 1;
    for (int depth = 0; depth < guard_; ++depth) {
        if (cur <= Rational(1, 3)) return scale * (cur + Rational(2, 3));
        if (cur < Rational(2, 3)) {
            // Affine between f(1/3) = 1 and f(2/3) = 2/9.
            Rational t = (cur - Rational(1, 3)) * 3;
            return scale * (Rational(1) + t * (Rational(2, 9) - 1));
        }
        if (cur == 1) return Rational(0);
        cur = cur * 3 - 2;
        scale /= 3;
    }
    throw ResourceError("tower limit recursion exceeded guard depth " + std::to_string(guard_));
}

double DoublingTower::eval_limit(double x) const {
    if (x >= 1.0) return 0.0;
    double scale = 1.0;
    for (int depth = 0; depth < guard_; ++depth) {
        if (x <= 1.0 / 3.0) return scale * (x + 2.0 / 3.0);
        if (x < 2.0 / 3.0) {
            double t = (x - 1.0 / 3.0) * 3.0;
            return scale * (1.0 + t * (2.0 / 9.0 - 1.0));
        }
        if (x >= 1.0) return 0.0;
        x = x * 3.0 - 2.0;
        scale /= 3.0;
    }
    return 0.0;  // deep in the x = 1 basin; indistinguishable from 0 at double precision
}

bool exact_capable(const AnyMap& m) { return !std::holds_alternative<LogisticMap>(m); }

Rational eval_exact(const AnyMap& m, const Rational& x) {
    if (auto* pl = std::get_if<PiecewiseLinearMap>(&m)) return pl->eval(x);
    if (auto* tw = std::get_if<DoublingTower>(&m)) return tw->eval_limit(x);
    throw InputError("exact evaluation requested on a numeric-only map");
}

double eval_approx(const AnyMap& m, double x) {
    if (auto* pl = std::get_if<PiecewiseLinearMap>(&m)) return pl->eval(x);
    if (auto* tw = std::get_if<DoublingTower>(&m)) return tw->eval_limit(x);
    return std::get<LogisticMap>(m).eval(x);
}

Rational iterate_exact(const AnyMap& m, Rational x, int n) {
    if (n < 0) throw InputError("iterate needs n >= 0");
    for (int i = 0; i < n; ++i) x = eval_exact(m, x);
    return x;
}

double iterate_approx(const AnyMap& m, double x, int n) {
    if (n < 0) throw InputError("iterate needs n >= 0");
    for (int i = 0; i < n; ++i) x = eval_approx(m, x);
    return x;
}

}  // namespace idyn

#include "idyn/interval.hpp"

#include <algorithm>
#include <sstream>

namespace idyn {

namespace {

// Endpoint keys order bound restrictiveness. For lower bounds, closed admits
// more than open at the same position; for upper bounds symmetrically.
struct LowerKey {
    const Rational& v;
    bool closed;
};
struct UpperKey {
    const Rational& v;
    bool closed;
};

// true when a is the weaker (more inclusive) lower bound.
bool lower_leq(const LowerKey& a, const LowerKey& b) {
    if (a.v != b.v) return a.v < b.v;
    return a.closed || !b.closed;
}

bool upper_leq(const UpperKey& a, const UpperKey& b) {
    if (a.v != b.v) return a.v < b.v;
    return !a.closed || b.closed;
}

bool valid(const Rational& lo, bool lc, const Rational& hi, bool hc) {
    if (lo < hi) return true;
    return lo == hi && lc && hc;
}

}  // namespace

Interval Interval::closed(Rational a, Rational b) { return make(std::move(a), std::move(b), true, true); }

Interval Interval::open(Rational a, Rational b) { return make(std::move(a), std::move(b), false, false); }

Interval Interval::make(Rational a, Rational b, bool ac, bool bc) {
    if (!valid(a, ac, b, bc)) throw InputError("empty or inverted interval: " + rat_str(a) + ", " + rat_str(b));
    return Interval{std::move(a), std::move(b), ac, bc};
}

bool Interval::contains(const Rational& x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
}

bool Interval::relatively_open() const {
    if (lo_closed && lo != 0) return false;
    if (hi_closed && hi != 1) return false;
    return true;
}

Rational Interval::pick_point() const {
    if (lo_closed) return lo;
    if (hi_closed) {
        // (a, b]: prefer the midpoint unless degenerate pressure; midpoint
        // keeps picked points interior for downstream strictness.
        return (lo + hi) / 2;
    }
    return (lo + hi) / 2;
}

Rational interval_distance(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return b.lo - a.hi;
    if (b.hi < a.lo) return a.lo - b.hi;
    return Rational(0);
}

std::optional<Interval> interval_intersection(const Interval& a, const Interval& b) {
    // Most restrictive lower bound = the larger one.
    const Rational* lo;
    bool lc;
    if (lower_leq({a.lo, a.lo_closed}, {b.lo, b.lo_closed})) {
        lo = &b.lo;
        lc = b.lo_closed;
    } else {
        lo = &a.lo;
        lc = a.lo_closed;
    }
    const Rational* hi;
    bool hc;
    if (upper_leq({a.hi, a.hi_closed}, {b.hi, b.hi_closed})) {
        hi = &a.hi;
        hc = a.hi_closed;
    } else {
        hi = &b.hi;
        hc = b.hi_closed;
    }
    if (!valid(*lo, lc, *hi, hc)) return std::nullopt;
    return Interval{*lo, *hi, lc, hc};
}

IntervalSet IntervalSet::from_parts(std::vector<Interval> parts) {
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        if (a.lo_closed != b.lo_closed) return a.lo_closed;  // closed first
        if (a.hi != b.hi) return a.hi < b.hi;
        return !a.hi_closed && b.hi_closed;
    });
    IntervalSet out;
    for (auto& p : parts) {
        if (out.parts_.empty()) {
            out.parts_.push_back(std::move(p));
            continue;
        }
        Interval& cur = out.parts_.back();
        bool mergeable = p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
        if (!mergeable) {
            out.parts_.push_back(std::move(p));
            continue;
        }
        if (upper_leq({cur.hi, cur.hi_closed}, {p.hi, p.hi_closed})) {
            cur.hi = p.hi;
            cur.hi_closed = p.hi_closed;
        }
    }
    return out;
}

bool IntervalSet::contains(const Rational& x) const {
    // Parts are sorted; a scan is fine at the sizes this toolkit sees.
    for (const auto& p : parts_) {
        if (p.lo > x) break;
        if (p.contains(x)) return true;
    }
    return false;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> parts = parts_;
    parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
    return from_parts(std::move(parts));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    // Two-pointer sweep over the sorted disjoint parts.
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
        const Interval& a = parts_[i];
        const Interval& b = other.parts_[j];
        if (auto iv = interval_intersection(a, b)) out.push_back(*iv);
        // Drop whichever part ends first.
        if (a.hi < b.hi || (a.hi == b.hi && (!a.hi_closed || b.hi_closed)))
            ++i;
        else
            ++j;
    }
    // Parts already sorted and disjoint; skip the normalizing sort.
    IntervalSet r;
    r.parts_ = std::move(out);
    return r;
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
    std::vector<Interval> out;
    for (const auto& a : parts_) {
        // Carve other's parts out of a, left to right.
        Rational lo = a.lo;
        bool lc = a.lo_closed;
        bool alive = true;
        for (const auto& b : other.parts_) {
            if (b.hi < lo || (b.hi == lo && !(b.hi_closed && lc))) continue;
            if (b.lo > a.hi || (b.lo == a.hi && !(b.lo_closed && a.hi_closed))) break;
            // Left remainder [lo, b.lo with flipped flag].
            if (valid(lo, lc, b.lo, !b.lo_closed)) out.push_back(Interval{lo, b.lo, lc, !b.lo_closed});
            // Continue to the right of b.
            if (upper_leq({a.hi, a.hi_closed}, {b.hi, b.hi_closed})) {
                alive = false;
                break;
            }
            lo = b.hi;
            lc = !b.hi_closed;
        }
        if (alive && valid(lo, lc, a.hi, a.hi_closed)) out.push_back(Interval{lo, a.hi, lc, a.hi_closed});
    }
    return from_parts(std::move(out));
}

bool IntervalSet::superset_of(const IntervalSet& other) const { return other.subtract(*this).empty(); }

IntervalSet IntervalSet::complement() const { return unit().subtract(*this); }

IntervalSet IntervalSet::closure() const {
    std::vector<Interval> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back(Interval{p.lo, p.hi, true, true});
    return from_parts(std::move(out));
}

std::optional<Interval> IntervalSet::hull() const {
    if (parts_.empty()) return std::nullopt;
    return Interval{parts_.front().lo, parts_.back().hi, parts_.front().lo_closed, parts_.back().hi_closed};
}

Rational IntervalSet::measure() const {
    Rational m = 0;
    for (const auto& p : parts_) m += p.width();
    return m;
}

bool IntervalSet::relatively_open() const {
    for (const auto& p : parts_)
        if (!p.relatively_open()) return false;
    return true;
}

std::optional<Rational> IntervalSet::pick_point() const {
    if (parts_.empty()) return std::nullopt;
    return parts_.front().pick_point();
}

bool IntervalSet::operator<(const IntervalSet& o) const {
    auto key = [](const Interval& iv) { return std::tuple(iv.lo, iv.lo_closed, iv.hi, iv.hi_closed); };
    return std::lexicographical_compare(parts_.begin(), parts_.end(), o.parts_.begin(), o.parts_.end(),
                                        [&](const Interval& a, const Interval& b) { return key(a) < key(b); });
}

std::string interval_str(const Interval& iv) {
    std::ostringstream os;
    os << (iv.lo_closed ? '[' : '(') << rat_str(iv.lo) << ", " << rat_str(iv.hi) << (iv.hi_closed ? ']' : ')');
    return os.str();
}

std::string IntervalSet::str() const {
    if (parts_.empty()) return "{}";
    std::ostringstream os;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << " u ";
        os << interval_str(parts_[i]);
    }
    return os.str();
}

Rational set_distance(const IntervalSet& a, const IntervalSet& b) {
    if (a.empty() || b.empty()) throw InputError("set_distance of empty set");
    std::optional<Rational> best;
    for (const auto& pa : a.parts()) {
        for (const auto& pb : b.parts()) {
            Rational d = interval_distance(pa, pb);
            if (!best || d < *best) best = d;
            if (*best == 0) return Rational(0);
        }
    }
    return *best;
}

}  // namespace idyn

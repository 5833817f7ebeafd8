#pragma once

#include "idyn/rational.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace idyn {

// A subinterval of [0,1] with independently tracked endpoint inclusion.
// Nonempty by construction: lo < hi, or lo == hi with both endpoints closed.
// Empty sets are represented by absence (an IntervalSet with no parts).
struct Interval {
    Rational lo, hi;
    bool lo_closed = true;
    bool hi_closed = true;

    static Interval closed(Rational a, Rational b);
    static Interval open(Rational a, Rational b);
    static Interval point(Rational a) { return closed(a, a); }
    static Interval make(Rational a, Rational b, bool ac, bool bc);

    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const;
    // Relatively open in [0,1]: a closed endpoint is allowed only at 0 or 1.
    bool relatively_open() const;

    // A rational interior-ish point, deterministic: the leftmost included
    // endpoint if closed, otherwise the midpoint.
    Rational pick_point() const;

    bool operator==(const Interval& o) const = default;
};

// inf {|x - y| : x in a, y in b}; zero when the intervals meet or overlap.
Rational interval_distance(const Interval& a, const Interval& b);

std::optional<Interval> interval_intersection(const Interval& a, const Interval& b);

// Finite union of pairwise disjoint, non-mergeable intervals, sorted by lo.
// The normal form is unique, so operator== is set equality.
class IntervalSet {
  public:
    IntervalSet() = default;
    explicit IntervalSet(Interval iv) : parts_{std::move(iv)} {}

    // Normalizes an arbitrary collection: drops empties, sorts, merges.
    static IntervalSet from_parts(std::vector<Interval> parts);
    static IntervalSet unit() { return IntervalSet(Interval::closed(0, 1)); }

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    bool contains(const Rational& x) const;
    bool superset_of(const IntervalSet& other) const;

    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet subtract(const IntervalSet& other) const;
    // Complement within [0,1].
    IntervalSet complement() const;
    // All endpoint flags closed, then renormalized.
    IntervalSet closure() const;

    std::optional<Interval> hull() const;
    Rational measure() const;
    bool relatively_open() const;

    // Deterministic representative (first part's pick_point).
    std::optional<Rational> pick_point() const;

    bool operator==(const IntervalSet& o) const = default;
    // Lexicographic over parts; total order used for canonical dedup.
    bool operator<(const IntervalSet& o) const;

    std::string str() const;

  private:
    std::vector<Interval> parts_;
};

// inf distance between two sets (0 if they intersect or touch).
Rational set_distance(const IntervalSet& a, const IntervalSet& b);

std::string interval_str(const Interval& iv);

}  // namespace idyn

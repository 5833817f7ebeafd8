#pragma once

#include "idyn/interval.hpp"

#include <variant>
#include <vector>

namespace idyn {

// Continuous self-map of [0,1], affine between consecutive rational
// breakpoints. All image/preimage computations are exact.
class PiecewiseLinearMap {
  public:
    PiecewiseLinearMap(std::vector<Rational> breakpoints, std::vector<Rational> values);

    static PiecewiseLinearMap constant(Rational c) { return {{Rational(0), Rational(1)}, {c, c}}; }
    static PiecewiseLinearMap identity() { return {{Rational(0), Rational(1)}, {Rational(0), Rational(1)}}; }
    static PiecewiseLinearMap tent() {
        return {{Rational(0), Rational(1, 2), Rational(1)}, {Rational(0), Rational(1), Rational(0)}};
    }
    static PiecewiseLinearMap reflection() {
        return {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
    }

    const std::vector<Rational>& breakpoints() const { return xs_; }
    const std::vector<Rational>& values() const { return ys_; }
    std::size_t piece_count() const { return xs_.size() - 1; }

    Rational eval(const Rational& x) const;
    double eval(double x) const;

    IntervalSet image(const IntervalSet& s) const;
    IntervalSet preimage(const IntervalSet& s) const;

    // n-fold image/preimage.
    IntervalSet image_iter(IntervalSet s, int n) const;
    IntervalSet preimage_iter(IntervalSet s, int n) const;

    bool operator==(const PiecewiseLinearMap& o) const { return xs_ == o.xs_ && ys_ == o.ys_; }

  private:
    std::vector<Rational> xs_, ys_;
    std::vector<double> dxs_, dys_;
};

// The doubling operator D: D(g) = x + 2/3 on [0,1/3], the 1/3-scaled copy of
// g on [2/3,1], affine in between. Halves entropy and satisfies
// D(g)^2((x+2)/3) = (g(x)+2)/3 exactly.
PiecewiseLinearMap double_construct(const PiecewiseLinearMap& g);

// Stage-m realization D^m(base) together with the lazily evaluated limit map.
// The limit evaluator is independent of the base: the base's influence lives
// at scale 3^-m which vanishes as m grows.
class DoublingTower {
  public:
    explicit DoublingTower(int stage, PiecewiseLinearMap base = PiecewiseLinearMap::constant(0),
                           int recursion_guard = 64);

    int stage() const { return stage_; }
    const PiecewiseLinearMap& base() const { return base_; }
    const PiecewiseLinearMap& realized() const { return realized_; }
    int recursion_guard() const { return guard_; }

    // f_inf(x) by recursion; terminates for every rational x (the only
    // non-terminating seed of x -> 3x-2 is x = 1, handled as a base case).
    Rational eval_limit(const Rational& x) const;
    double eval_limit(double x) const;

  private:
    int stage_;
    PiecewiseLinearMap base_;
    PiecewiseLinearMap realized_;
    int guard_;
};

// Floating-point backend for orbit-only analyses.
class LogisticMap {
  public:
    explicit LogisticMap(double lambda) : lambda_(lambda) {}
    double lambda() const { return lambda_; }
    double eval(double x) const {
        double y = lambda_ * x * (1.0 - x);
        if (y < 0) return 0;
        if (y > 1) return 1;
        return y;
    }

  private:
    double lambda_;
};

// A map handle as loaded from a map spec. Exact point evaluation goes
// through the PL data or the tower limit recursion; logistic maps are
// double-only.
using AnyMap = std::variant<PiecewiseLinearMap, DoublingTower, LogisticMap>;

bool exact_capable(const AnyMap& m);
Rational eval_exact(const AnyMap& m, const Rational& x);
double eval_approx(const AnyMap& m, double x);

// f^n(x); f^0 is the identity.
Rational iterate_exact(const AnyMap& m, Rational x, int n);
double iterate_approx(const AnyMap& m, double x, int n);

}  // namespace idyn

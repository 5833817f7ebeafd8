#pragma once

#include "idyn/exec.hpp"
#include "idyn/map.hpp"

#include <map>
#include <optional>
#include <vector>

namespace idyn {

struct Orbit {
    bool exact = false;
    std::vector<Rational> points;   // filled when exact
    std::vector<double> points_d;   // always filled
    std::size_t length() const { return points_d.size(); }
};

Orbit orbit(const AnyMap& m, const Rational& x, int n);
Orbit orbit(const AnyMap& m, double x, int n);

struct OmegaParams {
    int burn = 0;
    int horizon = 1024;
    Rational tol = Rational(1, 1 << 30);
    double tol_d = 1e-9;

    static OmegaParams with_horizon(int h) {
        OmegaParams p;
        p.horizon = h;
        p.burn = h / 4;
        return p;
    }
};

// Finite-horizon surrogate of the omega-limit set: the orbit tail clustered
// left to right at tolerance tol. Representatives are cluster-leftmost orbit
// points, so they are exact for exact maps.
struct OmegaApprox {
    bool exact = false;
    std::vector<Rational> reps;
    std::vector<double> reps_d;
    OmegaParams params;
    bool degenerate = false;  // horizon too small to populate any cluster
};

OmegaApprox omega_approx(const AnyMap& m, const Rational& x, const OmegaParams& p);
OmegaApprox omega_approx(const AnyMap& m, double x, const OmegaParams& p);

// One affine branch of f^n over [lo, hi]: f^n(x) = slope*x + icept there.
struct AffineBranch {
    Rational lo, hi;
    Rational slope, icept;
};

// Monotone-branch decomposition of f^n, maintained incrementally. Domains
// are closed and consecutive branches share endpoints.
class BranchDecomposition {
  public:
    explicit BranchDecomposition(const PiecewiseLinearMap& map, std::size_t piece_budget = 1000000);
    // Restricted variant: branches of f^0 = id over a subinterval.
    BranchDecomposition(const PiecewiseLinearMap& map, const Interval& domain, std::size_t piece_budget);

    int power() const { return n_; }
    const std::vector<AffineBranch>& branches() const { return branches_; }

    // Advance from f^n to f^{n+1}.
    void extend(Exec exec = Exec::parallel);

    // Exact solution set of f^n(x) = x over the decomposed domain.
    IntervalSet fixed_set() const;

  private:
    const PiecewiseLinearMap* map_;
    std::vector<AffineBranch> branches_;
    int n_ = 0;
    std::size_t budget_;
};

// Exact solution set of f^n(x) = x (isolated points and fixed intervals).
IntervalSet periodic_points(const PiecewiseLinearMap& map, int n, Exec exec = Exec::parallel,
                            std::size_t piece_budget = 1000000);

struct PeriodSpectrum {
    int max_n = 0;
    std::vector<int> periods;                 // least periods found, ascending
    std::map<int, Rational> witness;          // one exact witness per period
    std::map<int, IntervalSet> least_period_sets;
};

PeriodSpectrum period_spectrum(const PiecewiseLinearMap& map, int max_n, Exec exec = Exec::parallel,
                               std::size_t piece_budget = 1000000);

struct EntropyCertificate {
    enum class Verdict { positive, consistent_with_zero };
    Verdict verdict;
    std::optional<Rational> witness;  // point of non-power-of-two least period
    int witness_period = 0;
    PeriodSpectrum spectrum;
    int max_n = 0;
    // The zero verdict is evidence over periods <= max_n, not a proof.
    std::string note;
};

EntropyCertificate entropy_classify(const PiecewiseLinearMap& map, int max_n, Exec exec = Exec::parallel,
                                    std::size_t piece_budget = 1000000);

struct RecurrenceFlags {
    bool recurrent = false;
    bool strongly_recurrent = false;
    bool regularly_recurrent = false;
    int regular_period = 0;  // the N witnessing regular recurrence
    int max_return_gap = 0;
    int horizon = 0;
    double radius = 0;  // finite-horizon proxy semantics: one fixed ball
};

RecurrenceFlags recurrence_classify(const AnyMap& m, const Rational& x, int horizon, const Rational& radius);
RecurrenceFlags recurrence_classify(const AnyMap& m, double x, int horizon, double radius);

}  // namespace idyn

#pragma once

#include "idyn/portion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace idyn {

// Raised when no valid alignment time exists up to the horizon (wrong
// maximal omega-limit set, or horizon too small).
struct NotAlignedError : InputError {
    using InputError::InputError;
};

// c_x(k): least time after which the orbit of x follows the cyclic itinerary
// of the depth-k padded portion.
struct KneadingCode {
    Rational x;
    int depth = 0;
    std::vector<long> c;  // c[k-1] = c_x(k)
    Rational portion_base;
    int portion_depth = 0;
};

KneadingCode kneading_code(const AnyMap& m, const PeriodicPortion& P, const Rational& x, int K, int horizon);

struct PairReport {
    double x = 0, y = 0;
    std::string x_exact, y_exact;  // rational text when exact
    int horizon = 0;
    double tol = 0, delta = 0;
    double liminf_proxy = 0, limsup_proxy = 0;  // over the window [horizon/2, horizon]
    bool proximal = false, asymptotic = false, scrambled = false, delta_scrambled = false;
    bool exact = false;
};

PairReport classify_pair(const AnyMap& m, const Rational& x, const Rational& y, int horizon, double tol,
                         double delta);
PairReport classify_pair(const AnyMap& m, double x, double y, int horizon, double tol, double delta);

struct CodeProximality {
    bool proximal = false;  // congruent for all k <= depth
    int depth = 0;
    int failing_k = 0;       // first k with incongruent codes, when not proximal
    Rational separation{0};  // half the minimal padded gap at the failing level
};

// Proximality by code congruence: c_x(k) = c_y(k) (mod 2^k) for all k <= K.
CodeProximality proximal_by_code(const PeriodicPortion& P, const KneadingCode& cx, const KneadingCode& cy);

struct DensityWindow {
    long a = 0, b = 0;
    double fraction = 0;  // share of n in [a,b] with |f^n x - f^n y| < 1/p
};

struct DensityTable {
    int p = 1;
    std::vector<DensityWindow> windows;
    // Benchmark lower-bound curve max(0, 1 - p/2^k) by portion depth k.
    std::vector<double> benchmark;  // index k-1, k = 1..16
};

DensityTable banach_density_estimate(const AnyMap& m, const Rational& x, const Rational& y, int p,
                                     const std::vector<std::pair<long, long>>& windows);

enum class NonseparableVerdict { nonseparable_evidence, separated, undetermined };

struct NonseparableParams {
    Rational base_x{0};       // base orbit carrying the omega surrogate
    OmegaParams omega;        // surrogate parameters
    Rational tol{1, 1 << 20};  // closeness of u, v to the surrogate
    int period_budget = 5;    // sweep periodic points up to period 2^B
    std::size_t min_reps = 16;  // representatives required to call the surrogate infinite
};

struct NonseparableReport {
    NonseparableVerdict verdict;
    std::optional<Rational> witness;  // periodic point inside (u, v) when separated
    int witness_period = 0;
    std::string note;
};

NonseparableReport f_nonseparable_test(const PiecewiseLinearMap& map, const Rational& u, const Rational& v,
                                       const NonseparableParams& params);

struct ScrambledSearch {
    std::optional<std::vector<Rational>> tuple;  // lexicographically least hit
    long tuples_checked = 0;
    int grid_points = 0;
    int horizon = 0;
    double tol = 0;
};

// Exhaustive deterministic grid search for an n-tuple whose finite proxies
// witness n-scrambledness: some time clusters all points within tol while
// some other time separates every pair by more than tol. Proxies scan the
// whole horizon; with window-tail proxies the search would be blind to
// orbits that collide exactly (rational tent orbits collapse onto 0).
ScrambledSearch n_scrambled_search(const AnyMap& m, int n, const Rational& grid_step, int horizon, double tol,
                                   Exec exec = Exec::parallel);

struct RegionalProximality {
    bool found = false;
    int first_n = 0;
    int k = 0;
    int horizon = 0;
};

// Exact test via interval images: distance(f^n(B(x,1/k)), f^n(B(y,1/k))) < 1/k.
RegionalProximality regionally_proximal_test(const PiecewiseLinearMap& map, const Rational& x,
                                             const Rational& y, int k, int horizon);

enum class SetComparison { equivalent_evidence, separable_evidence, inconsistent };

struct SetComparisonReport {
    SetComparison verdict;
    std::vector<std::pair<Rational, Rational>> matching;  // when equivalent
    double separation = 0;                                // when separable
    std::optional<std::pair<Rational, Rational>> offending_pair;
    std::string note;
};

SetComparisonReport compare_scrambled_sets(const AnyMap& m, const std::vector<Rational>& S,
                                           const std::vector<Rational>& R, int horizon, double tol);

}  // namespace idyn

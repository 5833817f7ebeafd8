#pragma once

#include "idyn/orbit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace idyn {

// Raised when the omega-limit surrogate is too small to carve a depth-K
// portion (finite or periodic omega-limit set smaller than the requirement).
struct NotInfiniteError : InputError {
    using InputError::InputError;
};

// The nested family of 2^k closed intervals hulling the omega surrogate of
// f^i(x) under f^(2^k), together with the padded open variants. Cells are
// indexed by the cyclic phase i, not by spatial position.
struct PeriodicPortion {
    Rational base_x;
    int depth = 0;                                // K
    std::vector<std::vector<Interval>> cells;     // cells[k-1][i], closed
    std::vector<Rational> pad;                    // s_k at index k-1
    std::vector<std::vector<Interval>> padded;    // relatively open, clamped to [0,1]
    std::vector<Rational> omega_reps;             // surrogate representatives
    OmegaParams params;
    bool from_limit = false;  // built on the tower limit evaluator
    int stage = -1;           // stage of the realized map, when applicable

    const Interval& cell(int k, int i) const { return cells.at(k - 1).at(i); }
    const Interval& padded_cell(int k, int i) const { return padded.at(k - 1).at(i); }
};

// Builds the portion from the exact orbit of x. Requires the clustered
// surrogate to hold at least 3 * 2^K representatives.
PeriodicPortion compute_portion(const AnyMap& m, const Rational& x, int K, const OmegaParams& params);

struct PortionVerification {
    bool covering = false;        // f(J_k^i) contains J_k^{i+1 mod 2^k}
    bool disjoint = false;        // cells pairwise disjoint per level
    bool nesting = false;         // children inside parent, sharing an endpoint each
    bool periods = false;         // period-2^k point inside, none smaller
    std::vector<std::string> failures;
    bool pass() const { return covering && disjoint && nesting && periods; }
};

// All four structure properties, checked exactly on a piecewise-linear map.
PortionVerification verify_portion(const PiecewiseLinearMap& map, const PeriodicPortion& P,
                                   Exec exec = Exec::parallel, std::size_t piece_budget = 1000000);

enum class LimitClass { singleton_regular, interval_two_strong, interval_mixed, undetermined };

struct NestedLimit {
    std::vector<int> path;       // i_1, ..., i_K
    Interval limit;              // cell at depth K
    LimitClass classification = LimitClass::undetermined;
    std::vector<Rational> widths;  // cell width per level along the path
    std::string note;
};

NestedLimit nested_limit(const AnyMap& m, const PeriodicPortion& P, const std::vector<int>& path);

struct SeparatingPoint {
    Rational point;
    int least_period = 0;   // a power of two
    int level_found = 0;    // j with f^(2^j)(p) = p
};

// An exact periodic point strictly between cells r1 and r2 at depth k,
// searched through increasing powers of two up to 2^k.
std::optional<SeparatingPoint> separating_periodic_point(const PiecewiseLinearMap& map,
                                                         const PeriodicPortion& P, int k, int r1, int r2,
                                                         std::string* diagnostic = nullptr);

// Depth-K padded-cell address of y; the address advances like +1 in the
// 2-adic odometer under one application of f.
std::optional<std::vector<int>> adding_machine_address(const PeriodicPortion& P, const Rational& y, int K);

// An exact periodic point inside J, which must contain at least three
// omega-surrogate representatives.
std::optional<SeparatingPoint> ruette_check(const PiecewiseLinearMap& map, const PeriodicPortion& P,
                                            const Interval& J, std::string* diagnostic = nullptr);

}  // namespace idyn

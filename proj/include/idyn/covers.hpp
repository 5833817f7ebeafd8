#pragma once

#include "idyn/exec.hpp"
#include "idyn/map.hpp"

#include <optional>
#include <string>
#include <vector>

namespace idyn {

// Finite open cover of [0,1]; elements are relatively open interval unions,
// stored deduplicated in canonical order.
struct OpenCover {
    std::vector<IntervalSet> elements;
    std::string label;
};

OpenCover make_cover(std::vector<IntervalSet> elements, std::string label = "U");

// All pairwise intersections, empties dropped, duplicates merged.
OpenCover join(const OpenCover& u, const OpenCover& v);

// Elementwise exact preimage.
OpenCover pull_back(const PiecewiseLinearMap& map, const OpenCover& u);

// Exact minimal subcover cardinality N(U). Branch and bound on the leftmost
// uncovered point; dominated elements are discarded up front.
long min_subcover_count(const OpenCover& u, std::size_t node_budget = 50000000);

// Largest delta such that every subinterval of length < delta fits inside a
// single element.
Rational lebesgue_number(const OpenCover& u);

struct EntropyEstimate {
    std::vector<long> counts;              // N_n for n = 1..n_max (may stop early on budget)
    std::vector<double> slopes;            // (1/n) log N_n
    double upper_estimate = 0;             // min_m (1/m) log N_m
    bool partial = false;                  // join element budget exhausted
    bool stabilized = false;               // counts constant at the tail
};

// N_n = N(join_{i=0}^{n-1} f^-i U).
EntropyEstimate cover_entropy(const PiecewiseLinearMap& map, const OpenCover& u, int n_max,
                              std::size_t element_budget = 5000);

struct ComplexityReport {
    enum class Verdict { exceeds_2, stuck_at_2 };
    Verdict verdict;
    int first_n = 0;            // least n with N > 2 when exceeding
    int n_max = 0;
    std::vector<long> counts;   // N(join_{i=1}^{n-1} f^-i U) for n = 2..
};

// The strong-mixing complexity test on a two-element cover of non-dense
// open sets; joins run from i = 1.
ComplexityReport complexity_CU(const PiecewiseLinearMap& map, const OpenCover& u, int n_max,
                               std::size_t element_budget = 5000);

// Joins along an increasing time sequence A.
EntropyEstimate sequence_entropy(const PiecewiseLinearMap& map, const OpenCover& u,
                                 const std::vector<long>& times, int n_max,
                                 std::size_t element_budget = 5000);

struct MixingCertificate {
    bool ok = false;
    int N = 0;                     // least N with containment for all n in [N, N_max]
    int largest_violation = -1;    // largest violating n when failing
    int n_max = 0;
    std::vector<IntervalSet> chain;  // f^n(J) for n = 0..min(n_max, chain_keep)
};

// Exact check of f^n(J) containing [eps, 1-eps] for all n from some N on.
MixingCertificate mixing_certificate(const PiecewiseLinearMap& map, const Interval& J, const Rational& eps,
                                     int n_max, int chain_keep = 16);

}  // namespace idyn

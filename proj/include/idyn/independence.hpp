#pragma once

#include "idyn/exec.hpp"
#include "idyn/map.hpp"

#include <optional>
#include <string>
#include <vector>

namespace idyn {

struct IndependenceCertificate {
    std::vector<IntervalSet> tuple;  // target sets A_1..A_k
    std::vector<long> times;         // the time set J
    bool verified = false;
    long patterns_checked = 0;
    long first_failing_pattern = -1;  // mixed-radix code over J, -1 when verified
    std::vector<Rational> witnesses;  // one rational witness per pattern when verified
    std::string note;
};

// Exact verdict: every symbol pattern over J is realized by a common point
// of the pulled-back targets. Patterns count k^|J|; |J| is budgeted.
IndependenceCertificate independence_check(const PiecewiseLinearMap& map,
                                           const std::vector<IntervalSet>& tuple,
                                           const std::vector<long>& times, Exec exec = Exec::parallel,
                                           std::size_t max_times = 12);

// Re-validate a verified certificate by direct iteration of each witness.
bool revalidate_certificate(const PiecewiseLinearMap& map, const IndependenceCertificate& cert);

// Searches the least n <= n_budget whose spreading property
// intersect_i f^n(V_i) >= union_i V_i holds for shrunken closed V_i inside
// the tuple elements, then verifies J = {n, 2n, ..., mn} exactly.
IndependenceCertificate arithmetic_independence(const PiecewiseLinearMap& map,
                                                const std::vector<IntervalSet>& tuple, int n_budget, int m,
                                                const Rational& mixing_eps = Rational(1, 8),
                                                int mixing_horizon = 64);

struct RadiusProfile {
    Rational radius;
    std::vector<long> times;  // longest independence set found
    double density = 0;       // |times| / max(times)
};

struct IndependenceProfile {
    std::vector<RadiusProfile> per_radius;
    bool in_evidence = false;
    bool it_evidence = false;
    bool ie_evidence = false;
    int length_threshold = 8;
    double density_threshold = 0.05;
};

// Greedy longest independence set for the pair of balls (B(x,r), B(y,r))
// over each radius in the schedule, with one restart of the greedy scan.
IndependenceProfile pair_independence_profile(const PiecewiseLinearMap& map, const Rational& x,
                                              const Rational& y, const std::vector<Rational>& radii,
                                              long horizon, int length_threshold = 8,
                                              double density_threshold = 0.05, std::size_t max_len = 12);

struct CoveringSequences {
    Rational u, v;
    std::vector<Interval> U, V;  // closed neighborhoods, index n-1 for U_n
    std::vector<int> k;          // exponents, f^(2^k_n) spreads stage n into n+1
    bool stalled = false;
    int stalled_stage = 0;
    std::string note;
};

// Nested shrinking neighborhoods with exactly verified containments
// f^(2^k_n)(U_n) meet f^(2^k_n)(V_n) over U_{n+1} union V_{n+1}.
CoveringSequences covering_pair_sequences(const PiecewiseLinearMap& map, const Rational& u, const Rational& v,
                                          int depth, int k_budget = 16);

struct WitnessTree {
    int depth = 0;                                  // M; leaves are words of length M+1
    std::vector<std::vector<Interval>> levels;      // levels[m][w]: E for word w of length m+1
    std::vector<long> anchors;                      // t_0 = 0, t_m = sum 2^k_n
    Rational delta;                                 // |v - u|
    CoveringSequences seqs;
    bool verified = false;
    std::string failure;  // offending word when construction or checks fail
};

// The nested family E_alpha realizing every 0/1 word against the U/V
// targets; subinterval selection is minimal-length with leftmost
// tie-breaking, and properties (containment, disjointness, exact onto
// targets) are verified exactly.
WitnessTree scrambled_witness_tree(const PiecewiseLinearMap& map, const CoveringSequences& seqs, int M,
                                   std::size_t branch_budget = 200000);

}  // namespace idyn

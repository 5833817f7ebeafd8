#include "idyn/independence.hpp"

#include "idyn/covers.hpp"
#include "idyn/orbit.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace idyn {

IndependenceCertificate independence_check(const PiecewiseLinearMap& map,
                                           const std::vector<IntervalSet>& tuple,
                                           const std::vector<long>& times, Exec exec,
                                           std::size_t max_times) {
    if (tuple.empty()) throw InputError("independence needs a nonempty tuple");
    for (const auto& a : tuple)
        if (a.empty()) throw InputError("independence target set is empty");
    std::vector<long> J = times;
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    if (J.empty()) throw InputError("independence needs a nonempty time set");
    if (J.front() < 0) throw InputError("times must be nonnegative");
    if (J.size() > max_times)
        throw ResourceError("time set larger than the pattern budget |J| <= " + std::to_string(max_times));

    const std::size_t k = tuple.size();
    const std::size_t tcount = J.size();
    long patterns = 1;
    for (std::size_t i = 0; i < tcount; ++i) patterns *= static_cast<long>(k);

    // Pull each target back to every time in J, stepping preimages once and
    // snapshotting at the needed offsets.
    std::vector<std::vector<IntervalSet>> pulled(tcount, std::vector<IntervalSet>(k));
    {
        std::vector<IntervalSet> cur(tuple);
        long t_done = 0;
        for (std::size_t ti = 0; ti < tcount; ++ti) {
            while (t_done < J[ti]) {
                for (auto& s : cur) s = map.preimage(s);
                ++t_done;
            }
            pulled[ti] = cur;
        }
    }

    IndependenceCertificate cert;
    cert.tuple = tuple;
    cert.times = J;
    cert.patterns_checked = patterns;
    cert.witnesses.assign(patterns, Rational(0));
    std::vector<char> ok(patterns, 0);

    auto check_pattern = [&](long code) {
        long c = code;
        IntervalSet inter = pulled[0][c % k];
        c /= k;
        for (std::size_t ti = 1; ti < tcount && !inter.empty(); ++ti) {
            inter = inter.intersect(pulled[ti][c % k]);
            c /= k;
        }
        if (inter.empty()) return false;
        cert.witnesses[code] = *inter.pick_point();
        return true;
    };

#ifdef _OPENMP
    if (exec == Exec::parallel && patterns > 8) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long code = 0; code < patterns; ++code) ok[code] = check_pattern(code) ? 1 : 0;
    } else
#endif
    {
        (void)exec;
        for (long code = 0; code < patterns; ++code) ok[code] = check_pattern(code) ? 1 : 0;
    }

    cert.verified = true;
    for (long code = 0; code < patterns; ++code) {
        if (!ok[code]) {
            cert.verified = false;
            cert.first_failing_pattern = code;
            cert.witnesses.clear();
            break;
        }
    }
    return cert;
}

bool revalidate_certificate(const PiecewiseLinearMap& map, const IndependenceCertificate& cert) {
    if (!cert.verified) return false;
    const std::size_t k = cert.tuple.size();
    for (long code = 0; code < cert.patterns_checked; ++code) {
        Rational w = cert.witnesses[code];
        long c = code;
        long t_done = 0;
        Rational cur = w;
        for (long t : cert.times) {
            while (t_done < t) {
                cur = map.eval(cur);
                ++t_done;
            }
            if (!cert.tuple[c % k].contains(cur)) return false;
            c /= k;
        }
    }
    return true;
}

IndependenceCertificate arithmetic_independence(const PiecewiseLinearMap& map,
                                                const std::vector<IntervalSet>& tuple, int n_budget, int m,
                                                const Rational& mixing_eps, int mixing_horizon) {
    if (tuple.empty()) throw InputError("independence needs a nonempty tuple");
    if (m < 1 || n_budget < 1) throw InputError("arithmetic independence needs m >= 1, n_budget >= 1");

    IndependenceCertificate cert;
    cert.tuple = tuple;

    if (tuple.size() == 1) {
        return independence_check(map, tuple, {1});
    }

    // Mixing precondition on each element's hull.
    for (const auto& a : tuple) {
        auto h = a.hull();
        if (!h || h->is_point()) throw InputError("tuple element without a nondegenerate hull");
        auto certm = mixing_certificate(map, *h, mixing_eps, mixing_horizon);
        if (!certm.ok) {
            cert.note = "mixing certificate failed on element hull " + interval_str(*h);
            return cert;  // NOT_FOUND: unverified
        }
    }

    // Closed middle-half shrink of the widest part of each element.
    std::vector<IntervalSet> shrunk;
    for (const auto& a : tuple) {
        const Interval* widest = nullptr;
        for (const auto& p : a.parts())
            if (!widest || p.width() > widest->width()) widest = &p;
        Rational q = widest->width() / 4;
        shrunk.push_back(IntervalSet(Interval::closed(widest->lo + q, widest->hi - q)));
    }
    IntervalSet all;
    for (const auto& v : shrunk) all = all.unite(v);

    for (int n = 1; n <= n_budget; ++n) {
        bool spread = true;
        for (const auto& v : shrunk) {
            IntervalSet img = map.image_iter(v, n);
            if (!img.superset_of(all)) {
                spread = false;
                break;
            }
        }
        if (!spread) continue;
        std::vector<long> J;
        for (int i = 1; i <= m; ++i) J.push_back(static_cast<long>(n) * i);
        IndependenceCertificate out = independence_check(map, tuple, J);
        out.note = "spreading exponent n = " + std::to_string(n);
        return out;
    }
    cert.note = "no spreading exponent within budget " + std::to_string(n_budget);
    return cert;  // NOT_FOUND: unverified
}

namespace {

// Greedy extension: append the earliest feasible time, keeping every pattern
// intersection nonempty. Deterministic.
std::vector<long> greedy_longest(const PiecewiseLinearMap& map, const std::vector<IntervalSet>& tuple,
                                 long t_start, long horizon, std::size_t max_len) {
    const std::size_t k = tuple.size();
    std::vector<IntervalSet> cur(tuple);
    long t_done = 0;
    std::vector<long> J;
    std::vector<IntervalSet> states{IntervalSet::unit()};
    for (long t = t_start; t <= horizon && J.size() < max_len; ++t) {
        while (t_done < t) {
            for (auto& s : cur) s = map.preimage(s);
            ++t_done;
        }
        // Try extending every pattern state by every symbol.
        std::vector<IntervalSet> next;
        next.reserve(states.size() * k);
        bool feasible = true;
        for (const auto& s : states) {
            for (std::size_t a = 0; a < k && feasible; ++a) {
                IntervalSet inter = s.intersect(cur[a]);
                if (inter.empty())
                    feasible = false;
                else
                    next.push_back(std::move(inter));
            }
            if (!feasible) break;
        }
        if (feasible) {
            J.push_back(t);
            states = std::move(next);
        }
    }
    return J;
}

}  // namespace

IndependenceProfile pair_independence_profile(const PiecewiseLinearMap& map, const Rational& x,
                                              const Rational& y, const std::vector<Rational>& radii,
                                              long horizon, int length_threshold, double density_threshold,
                                              std::size_t max_len) {
    if (x == y) throw InputError("independence profile needs an essential pair");
    IndependenceProfile prof;
    prof.length_threshold = length_threshold;
    prof.density_threshold = density_threshold;

    auto ball = [&](const Rational& c, const Rational& r) {
        Rational a = c - r, b = c + r;
        bool ac = false, bc = false;
        if (a < 0) {
            a = 0;
            ac = true;
        }
        if (b > 1) {
            b = 1;
            bc = true;
        }
        return IntervalSet(Interval::make(a, b, ac, bc));
    };

    for (const auto& r : radii) {
        std::vector<IntervalSet> tuple{ball(x, r), ball(y, r)};
        std::vector<long> J = greedy_longest(map, tuple, 1, horizon, max_len);
        // Limited backtracking: one restart past the first accepted time.
        if (static_cast<int>(J.size()) < length_threshold && !J.empty()) {
            std::vector<long> J2 = greedy_longest(map, tuple, J.front() + 1, horizon, max_len);
            if (J2.size() > J.size()) J = std::move(J2);
        }
        RadiusProfile rp;
        rp.radius = r;
        rp.times = J;
        rp.density = J.empty() ? 0.0 : static_cast<double>(J.size()) / static_cast<double>(J.back());
        prof.per_radius.push_back(std::move(rp));
    }

    if (!prof.per_radius.empty()) {
        const auto& first = prof.per_radius.front();
        const auto& last = prof.per_radius.back();
        prof.it_evidence = static_cast<int>(last.times.size()) >= length_threshold;
        prof.in_evidence = last.times.size() >= 2 && last.times.size() >= first.times.size();
        for (const auto& rp : prof.per_radius)
            if (rp.density >= density_threshold && static_cast<int>(rp.times.size()) >= 2)
                prof.ie_evidence = true;
    }
    return prof;
}

CoveringSequences covering_pair_sequences(const PiecewiseLinearMap& map, const Rational& u, const Rational& v,
                                          int depth, int k_budget) {
    if (u == v) throw InputError("covering sequences need a proper pair");
    if (depth < 1) throw InputError("covering sequences need depth >= 1");
    CoveringSequences seq;
    seq.u = u < v ? u : v;
    seq.v = u < v ? v : u;

    Rational gap = seq.v - seq.u;
    Rational r0 = std::min(Rational(gap / 4), Rational(1, 8));
    auto nbhd = [&](const Rational& c, const Rational& r) {
        Rational a = c - r, b = c + r;
        if (a < 0) a = 0;
        if (b > 1) b = 1;
        return Interval::closed(a, b);
    };
    seq.U.push_back(nbhd(seq.u, r0));
    seq.V.push_back(nbhd(seq.v, r0));

    for (int n = 1; n < depth; ++n) {
        IntervalSet su(seq.U.back());
        IntervalSet sv(seq.V.back());
        bool found = false;
        for (int k = 1; k <= k_budget && !found; ++k) {
            int steps = (1 << k) - (k == 1 ? 0 : (1 << (k - 1)));
            su = map.image_iter(su, steps);
            sv = map.image_iter(sv, steps);
            IntervalSet inter = su.intersect(sv);
            // Both centers must be interior points of the intersection.
            auto margin = [&](const Rational& c) -> std::optional<Rational> {
                for (const auto& p : inter.parts())
                    if (p.lo < c && c < p.hi) return std::min(Rational(c - p.lo), Rational(p.hi - c));
                return std::nullopt;
            };
            auto mu = margin(seq.u);
            auto mv = margin(seq.v);
            if (!mu || !mv) continue;
            Rational prev_ru = seq.U.back().width() / 2;
            Rational prev_rv = seq.V.back().width() / 2;
            Rational rho = std::min({Rational(*mu / 2), Rational(*mv / 2), Rational(prev_ru / 2),
                                     Rational(prev_rv / 2), Rational(1, 4 * (n + 2))});
            Interval Un = nbhd(seq.u, rho);
            Interval Vn = nbhd(seq.v, rho);
            // Exact verification of the covering containment.
            IntervalSet target = IntervalSet(Un).unite(IntervalSet(Vn));
            if (!inter.superset_of(target)) continue;
            seq.U.push_back(Un);
            seq.V.push_back(Vn);
            seq.k.push_back(k);
            found = true;
        }
        if (!found) {
            seq.stalled = true;
            seq.stalled_stage = n;
            seq.note = "no exponent k <= " + std::to_string(k_budget) + " spreads stage " + std::to_string(n);
            return seq;
        }
    }
    return seq;
}

namespace {

// Minimal-length closed subinterval F of the branch-decomposed domain with
// f^N(F) = T, leftmost among ties. Crossing analysis over the monotone
// branches of f^N keeps the candidate set finite and exact.
std::optional<Interval> minimal_onto(const PiecewiseLinearMap& map, const Interval& domain, int N,
                                     const Interval& target, std::size_t branch_budget) {
    if (target.is_point()) throw InputError("onto pullback needs a nondegenerate target");
    BranchDecomposition bd(map, domain, branch_budget);
    for (int i = 0; i < N; ++i) bd.extend(Exec::serial);

    struct Crossing {
        Rational x;
        int label;  // 0: value = target.lo, 1: value = target.hi
    };
    std::vector<Crossing> cross;
    for (const auto& b : bd.branches()) {
        if (b.slope == 0) {
            if (b.icept == target.lo) {
                cross.push_back({b.lo, 0});
                cross.push_back({b.hi, 0});
            } else if (b.icept == target.hi) {
                cross.push_back({b.lo, 1});
                cross.push_back({b.hi, 1});
            }
            continue;
        }
        for (int lab = 0; lab < 2; ++lab) {
            Rational val = lab == 0 ? target.lo : target.hi;
            Rational x = (val - b.icept) / b.slope;
            if (x >= b.lo && x <= b.hi) cross.push_back({x, lab});
        }
    }
    std::sort(cross.begin(), cross.end(), [](const Crossing& a, const Crossing& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.label < b.label;
    });
    cross.erase(std::unique(cross.begin(), cross.end(),
                            [](const Crossing& a, const Crossing& b) { return a.x == b.x && a.label == b.label; }),
                cross.end());

    std::optional<Interval> best;
    for (std::size_t i = 0; i + 1 < cross.size(); ++i) {
        if (cross[i].label == cross[i + 1].label) continue;
        if (cross[i].x == cross[i + 1].x) continue;  // a point touching both ends is impossible
        // Between consecutive crossings of opposite boundary values the
        // function stays inside the target band, so the image is exactly T.
        Interval cand = Interval::closed(cross[i].x, cross[i + 1].x);
        if (!best || cand.width() < best->width()) best = cand;
    }
    return best;
}

}  // namespace

WitnessTree scrambled_witness_tree(const PiecewiseLinearMap& map, const CoveringSequences& seqs, int M,
                                   std::size_t branch_budget) {
    WitnessTree tree;
    tree.depth = M;
    tree.seqs = seqs;
    tree.delta = seqs.v - seqs.u;
    if (seqs.stalled || static_cast<int>(seqs.U.size()) < M + 1)
        throw InputError("covering sequences too shallow for tree depth " + std::to_string(M));

    tree.anchors.push_back(0);
    for (int n = 0; n < M; ++n) tree.anchors.push_back(tree.anchors.back() + (1L << seqs.k[n]));

    auto target_of = [&](int letter_index, int a) -> const Interval& {
        // Letter i targets U_{i+1} or V_{i+1}.
        return a == 0 ? seqs.U[letter_index] : seqs.V[letter_index];
    };

    // Level 0: single letters.
    tree.levels.push_back({seqs.U[0], seqs.V[0]});
    for (int m = 0; m < M; ++m) {
        const auto& cur = tree.levels[m];
        std::vector<Interval> next(cur.size() * 2, Interval::closed(0, 1));
        // F depends only on the last letter and the new letter; cache the
        // four pullbacks per level.
        std::optional<Interval> Fcache[2][2];
        bool Fdone[2][2] = {{false, false}, {false, false}};
        for (std::size_t w = 0; w < cur.size(); ++w) {
            int last = static_cast<int>(w >> m) & 1;  // leading bit is the last letter
            for (int a = 0; a < 2; ++a) {
                if (!Fdone[last][a]) {
                    Fcache[last][a] = minimal_onto(map, target_of(m, last), 1 << seqs.k[m],
                                                   target_of(m + 1, a), branch_budget);
                    Fdone[last][a] = true;
                }
                const auto& F = Fcache[last][a];
                if (!F) {
                    tree.failure = "no onto subinterval for letters (" + std::to_string(last) + "," +
                                   std::to_string(a) + ") at level " + std::to_string(m);
                    throw InputError("CONSTRUCTION_ERROR: " + tree.failure);
                }
                auto E = minimal_onto(map, cur[w], static_cast<int>(tree.anchors[m]), *F, branch_budget);
                if (!E) {
                    tree.failure = "no pullback of F inside word " + std::to_string(w) + " at level " +
                                   std::to_string(m);
                    throw InputError("CONSTRUCTION_ERROR: " + tree.failure);
                }
                next[w | (static_cast<std::size_t>(a) << (m + 1))] = *E;
            }
        }
        tree.levels.push_back(std::move(next));
    }

    // Verify (a) nesting, (b) disjointness, (c) anchored targets, exactly.
    tree.verified = true;
    auto fail = [&](const std::string& msg) {
        tree.verified = false;
        if (tree.failure.empty()) tree.failure = msg;
    };
    for (int m = 1; m <= M; ++m) {
        const auto& lvl = tree.levels[m];
        const auto& up = tree.levels[m - 1];
        for (std::size_t w = 0; w < lvl.size(); ++w) {
            std::size_t parent = w & ((1u << m) - 1);
            if (lvl[w].lo < up[parent].lo || lvl[w].hi > up[parent].hi)
                fail("word " + std::to_string(w) + " escapes its parent at level " + std::to_string(m));
        }
        for (std::size_t a = 0; a < lvl.size(); ++a)
            for (std::size_t b = a + 1; b < lvl.size(); ++b)
                if (interval_distance(lvl[a], lvl[b]) == 0)
                    fail("words " + std::to_string(a) + "," + std::to_string(b) +
                         " overlap at level " + std::to_string(m));
    }
    for (int m = 0; m <= M; ++m) {
        const auto& lvl = tree.levels[m];
        for (std::size_t w = 0; w < lvl.size(); ++w) {
            IntervalSet s(lvl[w]);
            long t_done = 0;
            for (int i = 0; i <= m; ++i) {
                while (t_done < tree.anchors[i]) {
                    s = map.image(s);
                    ++t_done;
                }
                int letter = static_cast<int>(w >> i) & 1;
                IntervalSet W(target_of(i, letter));
                if (i < m) {
                    if (!W.superset_of(s))
                        fail("word " + std::to_string(w) + " leaves its target at anchor " + std::to_string(i));
                } else {
                    if (!(s == W))
                        fail("word " + std::to_string(w) + " does not map onto its final target");
                }
            }
        }
    }
    return tree;
}

}  // namespace idyn

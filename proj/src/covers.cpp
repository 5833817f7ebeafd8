#include "idyn/covers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace idyn {

OpenCover make_cover(std::vector<IntervalSet> elements, std::string label) {
    OpenCover c;
    c.label = std::move(label);
    for (auto& e : elements) {
        if (e.empty()) continue;
        if (!e.relatively_open())
            throw InputError("cover element is not relatively open: " + e.str());
        c.elements.push_back(std::move(e));
    }
    std::sort(c.elements.begin(), c.elements.end());
    c.elements.erase(std::unique(c.elements.begin(), c.elements.end()), c.elements.end());
    if (c.elements.empty()) throw InputError("cover has no nonempty elements");
    IntervalSet u;
    for (const auto& e : c.elements) u = u.unite(e);
    if (!(u == IntervalSet::unit())) {
        auto gap = u.complement().pick_point();
        throw InputError("not a cover of [0,1]: point " + rat_str(*gap) + " uncovered");
    }
    return c;
}

OpenCover join(const OpenCover& u, const OpenCover& v) {
    std::vector<IntervalSet> elems;
    elems.reserve(u.elements.size() * v.elements.size());
    for (const auto& a : u.elements)
        for (const auto& b : v.elements) {
            IntervalSet i = a.intersect(b);
            if (!i.empty()) elems.push_back(std::move(i));
        }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    OpenCover out;
    out.elements = std::move(elems);
    out.label = "(" + u.label + " v " + v.label + ")";
    return out;
}

OpenCover pull_back(const PiecewiseLinearMap& map, const OpenCover& u) {
    std::vector<IntervalSet> elems;
    for (const auto& e : u.elements) {
        IntervalSet p = map.preimage(e);
        if (!p.empty()) elems.push_back(std::move(p));
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    OpenCover out;
    out.elements = std::move(elems);
    out.label = "f^-1(" + u.label + ")";
    return out;
}

namespace {

struct SubcoverSearch {
    const std::vector<IntervalSet>* elems;
    long best = std::numeric_limits<long>::max();
    std::size_t nodes = 0;
    std::size_t node_budget;

    // Elements able to cover the head of the gap. Branching on these is
    // exhaustive: every subcover must handle the leftmost uncovered point.
    std::vector<int> candidates(const Interval& g) const {
        std::vector<std::tuple<Rational, int, int>> cand;  // (reach, hi_open, index)
        for (std::size_t i = 0; i < elems->size(); ++i) {
            const auto& parts = (*elems)[i].parts();
            // Part whose lo is the last one <= g.lo.
            auto it = std::upper_bound(parts.begin(), parts.end(), g.lo,
                                       [](const Rational& v, const Interval& p) { return v < p.lo; });
            if (it == parts.begin()) continue;
            const Interval& p = *(it - 1);
            bool admits = g.lo_closed ? p.contains(g.lo) : (p.lo <= g.lo && p.hi > g.lo);
            if (!admits) continue;
            cand.emplace_back(p.hi, p.hi_closed ? 0 : 1, static_cast<int>(i));
        }
        // Farthest reach first; deterministic tie-break on element index.
        std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
            if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
            if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
            return std::get<2>(a) < std::get<2>(b);
        });
        std::vector<int> out;
        out.reserve(cand.size());
        for (auto& [r, o, i] : cand) out.push_back(i);
        return out;
    }

    void dfs(const IntervalSet& covered, long used) {
        if (++nodes > node_budget)
            throw ResourceError("subcover search exceeded node budget " + std::to_string(node_budget));
        IntervalSet gap = covered.complement();
        if (gap.empty()) {
            best = std::min(best, used);
            return;
        }
        if (used + 1 >= best) return;
        for (int i : candidates(gap.parts().front())) {
            dfs(covered.unite((*elems)[i]), used + 1);
        }
    }
};

}  // namespace

long min_subcover_count(const OpenCover& u, std::size_t node_budget) {
    // Validate coverage and find an uncovered witness if any.
    IntervalSet all;
    for (const auto& e : u.elements) all = all.unite(e);
    if (!(all == IntervalSet::unit())) {
        auto w = all.complement().pick_point();
        throw InputError("not a cover: point " + rat_str(*w) + " uncovered");
    }
    // Domination pruning: an element contained in another never helps. The
    // quadratic sweep only pays off on small covers; large joins rarely have
    // comparable elements.
    std::vector<IntervalSet> elems;
    if (u.elements.size() <= 512) {
        for (std::size_t i = 0; i < u.elements.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < u.elements.size() && !dominated; ++j) {
                if (i == j) continue;
                if (u.elements[j].superset_of(u.elements[i])) {
                    if (u.elements[i] == u.elements[j])
                        dominated = i > j;  // keep the first of equal sets
                    else
                        dominated = true;
                }
            }
            if (!dominated) elems.push_back(u.elements[i]);
        }
    } else {
        elems = u.elements;
    }
    SubcoverSearch search{&elems, std::numeric_limits<long>::max(), 0, node_budget};
    search.dfs(IntervalSet(), 0);
    return search.best;
}

Rational lebesgue_number(const OpenCover& u) {
    std::vector<Rational> candidates{Rational(0)};
    for (const auto& e : u.elements)
        for (const auto& p : e.parts()) {
            candidates.push_back(p.lo);
            if (p.hi < 1) candidates.push_back(p.hi);
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::optional<Rational> delta;
    for (const auto& c : candidates) {
        if (c >= 1) continue;
        std::optional<Rational> reach;
        for (const auto& e : u.elements)
            for (const auto& p : e.parts()) {
                bool admits = (p.lo < c || (p.lo == c && p.lo_closed)) && p.hi > c;
                if (!admits) continue;
                Rational r = p.hi - c;
                if (!reach || r > *reach) reach = r;
            }
        if (!reach) throw InputError("no element reaches beyond " + rat_str(c) + "; not a cover");
        if (!delta || *reach < *delta) delta = reach;
    }
    return *delta;
}

namespace {

EntropyEstimate finish_estimate(std::vector<long> counts) {
    EntropyEstimate e;
    e.counts = std::move(counts);
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.counts.size(); ++i) {
        double s = std::log(static_cast<double>(e.counts[i])) / static_cast<double>(i + 1);
        e.slopes.push_back(s);
        upper = std::min(upper, s);
    }
    e.upper_estimate = upper;
    std::size_t m = e.counts.size();
    e.stabilized = m >= 3 && e.counts[m - 1] == e.counts[m - 2] && e.counts[m - 2] == e.counts[m - 3];
    return e;
}

}  // namespace

namespace {

// Interval parts across a cover; preimage chains can double this per step.
constexpr std::size_t kPartsBudget = 20000;

std::size_t total_parts(const OpenCover& c) {
    std::size_t n = 0;
    for (const auto& e : c.elements) n += e.size();
    return n;
}

}  // namespace

EntropyEstimate cover_entropy(const PiecewiseLinearMap& map, const OpenCover& u, int n_max,
                              std::size_t element_budget) {
    if (n_max < 2) throw InputError("cover_entropy needs n_max >= 2");
    std::vector<long> counts;
    OpenCover joined = u;
    OpenCover pulled = u;
    bool partial = false;
    counts.push_back(min_subcover_count(joined));
    for (int n = 2; n <= n_max; ++n) {
        pulled = pull_back(map, pulled);
        joined = join(joined, pulled);
        if (joined.elements.size() > element_budget || total_parts(joined) > kPartsBudget) {
            partial = true;
            break;
        }
        counts.push_back(min_subcover_count(joined));
    }
    EntropyEstimate e = finish_estimate(std::move(counts));
    e.partial = partial;
    return e;
}

ComplexityReport complexity_CU(const PiecewiseLinearMap& map, const OpenCover& u, int n_max,
                               std::size_t element_budget) {
    if (u.elements.size() != 2) throw InputError("complexity test needs exactly two elements");
    for (const auto& e : u.elements)
        if (e.closure() == IntervalSet::unit())
            throw InputError("complexity test needs non-dense elements; closure of " + e.str() +
                             " is the whole interval");
    if (n_max < 2) throw InputError("complexity test needs n_max >= 2");
    ComplexityReport rep;
    rep.n_max = n_max;
    OpenCover pulled = pull_back(map, u);  // f^-1 U
    OpenCover joined = pulled;
    for (int n = 2; n <= n_max; ++n) {
        if (n > 2) {
            pulled = pull_back(map, pulled);
            joined = join(joined, pulled);
        }
        if (joined.elements.size() > element_budget)
            throw ResourceError("join exceeded element budget in complexity test");
        long c = min_subcover_count(joined);
        rep.counts.push_back(c);
        if (c > 2) {
            rep.verdict = ComplexityReport::Verdict::exceeds_2;
            rep.first_n = n;
            return rep;
        }
    }
    rep.verdict = ComplexityReport::Verdict::stuck_at_2;
    rep.first_n = 0;
    return rep;
}

EntropyEstimate sequence_entropy(const PiecewiseLinearMap& map, const OpenCover& u,
                                 const std::vector<long>& times, int n_max, std::size_t element_budget) {
    if (static_cast<int>(times.size()) < n_max) throw InputError("time sequence shorter than n_max");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) throw InputError("time sequence must be strictly increasing");
    if (times[0] < 0) throw InputError("times must be nonnegative");
    std::vector<long> counts;
    OpenCover joined;
    OpenCover pulled = u;
    long t_done = 0;
    bool partial = false;
    for (int i = 0; i < n_max && !partial; ++i) {
        long t = times[i];
        while (t_done < t) {
            pulled = pull_back(map, pulled);
            ++t_done;
            // Preimage parts can double per step; stop before they swamp memory.
            if (total_parts(pulled) > kPartsBudget) {
                partial = true;
                break;
            }
        }
        if (partial) break;
        joined = (i == 0) ? pulled : join(joined, pulled);
        if (joined.elements.size() > element_budget || total_parts(joined) > kPartsBudget) {
            partial = true;
            break;
        }
        counts.push_back(min_subcover_count(joined));
    }
    EntropyEstimate e = finish_estimate(std::move(counts));
    e.partial = partial;
    return e;
}

MixingCertificate mixing_certificate(const PiecewiseLinearMap& map, const Interval& J, const Rational& eps,
                                     int n_max, int chain_keep) {
    if (J.is_point()) throw InputError("mixing certificate needs a nondegenerate interval");
    if (!(eps > 0 && eps < Rational(1, 2))) throw InputError("mixing certificate needs 0 < eps < 1/2");
    MixingCertificate cert;
    cert.n_max = n_max;
    IntervalSet target(Interval::closed(eps, Rational(1) - eps));
    IntervalSet s(Interval::closed(J.lo, J.hi));
    int last_violation = -1;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) s = map.image(s);
        if (n <= chain_keep) cert.chain.push_back(s);
        if (!s.superset_of(target)) last_violation = n;
    }
    if (last_violation == n_max) {
        cert.ok = false;
        cert.largest_violation = last_violation;
    } else {
        cert.ok = true;
        cert.N = last_violation + 1;
    }
    return cert;
}

}  // namespace idyn

#pragma once

// Random instance generators and brute-force oracles shared by the tests.
// The oracles deliberately avoid the library's closed forms: they evaluate
// definitions literally over explicit candidate sets.

#include "mkfp/mkfp.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace mkfp::testing {

using Q = Rational;

inline std::vector<std::string> labels(std::size_t n, const std::string& prefix = "p") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

/// p/q with small q; p in [0, max_num].
inline Q small_rational(std::mt19937_64& rng, int max_num = 12) {
    static const int dens[] = {1, 1, 2, 3, 4, 6};
    std::uniform_int_distribution<int> pn(0, max_num);
    std::uniform_int_distribution<int> pd(0, 5);
    return Q(pn(rng)) / dens[pd(rng)];
}

struct FgOptions {
    std::size_t max_size = 40;
    bool zero_set_hypothesis = true;
    /// Probability of making f < g on an element (pushes towards MK-true).
    double contract_bias = 0.85;
};

/// Random (K, f, g) with rational values. With the bias, roughly half of the
/// instances satisfy the MK condition.
inline FGInstance random_fg(std::mt19937_64& rng, const FgOptions& opt = {}) {
    std::uniform_int_distribution<std::size_t> sz(1, opt.max_size);
    std::uniform_real_distribution<double> u(0, 1);
    const std::size_t n = sz(rng);
    std::vector<Q> f(n), g(n);
    const bool biased = u(rng) < 0.7;
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = u(rng) < 0.1 ? Q(0) : small_rational(rng);
        if (biased && u(rng) < opt.contract_bias && g[k] > 0) {
            // f = r g with r in [0, 1).
            std::uniform_int_distribution<int> num(0, 5);
            f[k] = g[k] * num(rng) / 6;
        } else {
            f[k] = u(rng) < 0.2 ? Q(0) : small_rational(rng);
        }
        if (opt.zero_set_hypothesis && g[k] == 0) f[k] = 0;
    }
    return FGInstance(labels(n, "k"), std::move(f), std::move(g));
}

// --- metric oracles -----------------------------------------------------------

/// Literal axiom enumeration: returns true iff the matrix is a metric.
inline bool brute_is_metric(const std::vector<std::vector<Q>>& d) {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (d[i][j] < 0) return false;
            if ((d[i][j] == 0) != (i == j)) return false;
            if (d[i][j] != d[j][i]) return false;
            for (std::size_t k = 0; k < n; ++k)
                if (d[i][k] > d[i][j] + d[j][k]) return false;
        }
    return true;
}

// --- MK oracles ---------------------------------------------------------------

/// Whether a given (eps, delta) pair satisfies the quantified implication.
inline bool mk_pair_ok(const FGInstance& inst, bool strong, const Q& eps, const std::optional<Q>& delta) {
    for (std::size_t k = 0; k < inst.size(); ++k) {
        const Q& g = inst.g(k);
        bool upper = !delta || g < eps + *delta;
        bool premise = strong ? upper : (eps <= g && upper);
        if (premise && !(inst.f(k) < eps)) return false;
    }
    return true;
}

/// Largest admissible delta at eps among the candidates g(k) - eps (and
/// infinity), found by literal checks. nullopt = no candidate works, i.e. the
/// condition fails at eps; a returned infinity is encoded as Extended::infinity.
inline std::optional<Extended> oracle_sup_delta(const FGInstance& inst, bool strong, const Q& eps) {
    if (mk_pair_ok(inst, strong, eps, std::nullopt)) return Extended::infinity();
    std::optional<Q> best;
    for (std::size_t k = 0; k < inst.size(); ++k) {
        Q d = inst.g(k) - eps;
        if (d > 0 && mk_pair_ok(inst, strong, eps, d) && (!best || d > *best)) best = d;
    }
    if (!best) return std::nullopt;
    return Extended(*best);
}

/// gamma(t) straight from the definition.
inline Extended oracle_gamma(const FGInstance& inst, const Q& t) {
    std::optional<Q> best;
    for (std::size_t k = 0; k < inst.size(); ++k)
        if (inst.f(k) >= t && (!best || inst.g(k) < *best)) best = inst.g(k);
    return best ? Extended(*best) : Extended::infinity();
}

/// Probe points: every value, midpoints, and a point past the maximum.
inline std::vector<Q> probe_points(const std::vector<Q>& base) {
    std::set<Q> s(base.begin(), base.end());
    s.insert(0);
    std::vector<Q> v(s.begin(), s.end());
    std::vector<Q> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0) out.push_back(v[i]);
        if (i + 1 < v.size()) {
            out.push_back((v[i] + v[i + 1]) / 2);
            out.push_back(v[i] + (v[i + 1] - v[i]) / 1000);
        }
    }
    out.push_back(v.back() + 1);
    out.push_back(v.back() * 2 + 7);
    return out;
}

// --- ordered chains -----------------------------------------------------------

/// Chain positions with strictly increasing gaps, and a nondecreasing map
/// with T(0) = 0, T(i) <= i - 1 and increments in {0, 1}. Such maps contract
/// every pair strictly, so MK holds on the order.
struct Chain {
    std::vector<Q> positions;
    std::vector<Index> map;
};

inline Chain random_chain(std::mt19937_64& rng, std::size_t n) {
    Chain c;
    std::uniform_int_distribution<int> bump(1, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    Q pos = 0, gap = Q(bump(rng)) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        c.positions.push_back(pos);
        gap += Q(bump(rng)) / 4;
        pos += gap;
    }
    c.map.assign(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        Index inc = c.map[i - 1] + static_cast<Index>(coin(rng));
        c.map[i] = std::min<Index>(inc, i - 1);
    }
    return c;
}

struct FiniteCase {
    FiniteMetricSpace<Q> space;
    SelfMap map;
    Relation rel;
    std::string family;
};

/// Line chain with the order relation.
inline FiniteCase chain_line_case(std::mt19937_64& rng, std::size_t n) {
    Chain c = random_chain(rng, n);
    std::vector<IndexPair> order;
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) order.emplace_back(i, j);
    return {make_line_space<Q>(labels(n), c.positions), SelfMap(c.map, n), Relation(n, order), "chain-line"};
}

/// Product of two chains in Z^2-like coordinates with componentwise order.
inline FiniteCase chain_grid_case(std::mt19937_64& rng, std::size_t n1, std::size_t n2, Norm norm) {
    Chain a = random_chain(rng, n1), b = random_chain(rng, n2);
    std::vector<std::vector<Q>> coords;
    std::vector<std::pair<Index, Index>> idx;
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j) {
            coords.push_back({a.positions[i], b.positions[j]});
            idx.emplace_back(i, j);
        }
    const std::size_t n = coords.size();
    std::vector<Index> img(n);
    for (Index p = 0; p < n; ++p) img[p] = a.map[idx[p].first] * n2 + b.map[idx[p].second];
    std::vector<IndexPair> order;
    for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q)
            if (idx[p].first <= idx[q].first && idx[p].second <= idx[q].second) order.emplace_back(p, q);
    return {make_coord_space<Q>(labels(n), coords, norm), SelfMap(img, n), Relation(n, order), "chain-grid"};
}

/// Random integer points on a line, a random map, and the relation generated
/// by the orbit of a random point: {(T^m x, T^n x) : m <= n}.
inline FiniteCase orbit_closure_case(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> coord(0, 30);
    std::set<int> pts;
    while (pts.size() < n) pts.insert(coord(rng));
    std::vector<Q> pos;
    for (int p : pts) pos.emplace_back(p);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<Index> img(n);
    for (auto& v : img) v = pick(rng);
    Index x = pick(rng);
    std::vector<Index> orbit{x};
    std::vector<char> seen(n, 0);
    seen[x] = 1;
    while (true) {
        Index y = img[orbit.back()];
        if (seen[y]) break;
        seen[y] = 1;
        orbit.push_back(y);
    }
    // Include the repeated point so the closure is T-invariant.
    Index last = img[orbit.back()];
    std::vector<IndexPair> pairs;
    for (std::size_t m = 0; m < orbit.size(); ++m)
        for (std::size_t k = m; k < orbit.size(); ++k) pairs.emplace_back(orbit[m], orbit[k]);
    // The orbit re-enters at `last`; everything from there on is mutually related
    // both ways (a cycle) or equal (a fixed point).
    auto it = std::find(orbit.begin(), orbit.end(), last);
    for (auto a = it; a != orbit.end(); ++a)
        for (auto b = it; b != orbit.end(); ++b) pairs.emplace_back(*a, *b);
    for (auto a = orbit.begin(); a != it; ++a)
        for (auto b = it; b != orbit.end(); ++b) pairs.emplace_back(*a, *b);
    return {make_line_space<Q>(labels(n), pos), SelfMap(img, n), Relation(n, pairs), "orbit-closure"};
}

/// Random monotone map on random line points with the order relation.
inline FiniteCase random_monotone_line_case(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> coord(0, 40);
    std::set<int> pts;
    while (pts.size() < n) pts.insert(coord(rng));
    std::vector<Q> pos;
    for (int p : pts) pos.emplace_back(p);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<Index> img(n);
    for (auto& v : img) v = pick(rng);
    std::sort(img.begin(), img.end());
    std::vector<IndexPair> order;
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) order.emplace_back(i, j);
    return {make_line_space<Q>(labels(n), pos), SelfMap(img, n), Relation(n, order), "monotone-line"};
}

inline FiniteCase random_fixed_point_case(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> which(0, 4);
    std::uniform_int_distribution<std::size_t> sz(1, 9);
    switch (which(rng)) {
        case 0: return chain_line_case(rng, sz(rng));
        case 1: {
            std::uniform_int_distribution<std::size_t> s(1, 4);
            return chain_grid_case(rng, s(rng), s(rng), which(rng) % 2 ? Norm::max : Norm::l1);
        }
        case 2: return orbit_closure_case(rng, sz(rng));
        case 3: return random_monotone_line_case(rng, sz(rng));
        default: {
            std::uniform_int_distribution<std::size_t> s(1, 3);
            return chain_grid_case(rng, s(rng), s(rng) + 2, Norm::max);
        }
    }
}

/// Every fixed point of the map, by enumeration.
inline std::vector<Index> all_fixed_points(const SelfMap& map) {
    std::vector<Index> out;
    for (Index i = 0; i < map.size(); ++i)
        if (map(i) == i) out.push_back(i);
    return out;
}

/// Distinct positive pairwise distances among the points of an orbit.
inline std::size_t distinct_positive_orbit_distances(const FiniteMetricSpace<Q>& s, const std::vector<Index>& orbit) {
    std::set<Q> d;
    for (Index a : orbit)
        for (Index b : orbit)
            if (s.dist(a, b) > 0) d.insert(s.dist(a, b));
    return d.size();
}

// --- piecewise helpers --------------------------------------------------------

/// Random nonnegative piecewise function with small rational pieces.
inline PiecewiseFn random_piecewise(std::mt19937_64& rng, bool allow_inf = true, bool allow_overrides = true) {
    std::uniform_int_distribution<int> nb(0, 4);
    std::uniform_int_distribution<int> coin(0, 5);
    std::set<Q> bs;
    int m = nb(rng);
    while (static_cast<int>(bs.size()) < m) {
        Q b = small_rational(rng, 10);
        if (b > 0) bs.insert(b);
    }
    std::vector<Q> bps(bs.begin(), bs.end());
    std::vector<Segment> segs;
    for (std::size_t i = 0; i <= bps.size(); ++i) {
        if (allow_inf && coin(rng) == 0) {
            segs.push_back(Segment::infinite());
            continue;
        }
        Q slope = Q(coin(rng) - 1) / 2;  // -1/2 .. 2
        Q lo = i == 0 ? Q(0) : bps[i - 1];
        if (i == bps.size() && slope < 0) slope = 0;
        Q c = small_rational(rng, 8);
        // Keep the piece nonnegative on its interval.
        Q at_lo = c + slope * lo;
        if (at_lo < 0) c -= at_lo;
        if (i < bps.size()) {
            Q at_hi = c + slope * bps[i];
            if (at_hi < 0) c -= at_hi;
        }
        segs.emplace_back(c, slope);
    }
    std::map<Q, Extended> ov;
    if (allow_overrides) {
        for (const auto& b : bps)
            if (coin(rng) < 2) ov[b] = small_rational(rng, 8);
        if (coin(rng) == 0) ov[Q(0)] = small_rational(rng, 8);
    }
    return PiecewiseFn(bps, segs, ov);
}

// --- pre-Cauchy walks ----------------------------------------------------------

/// Random points x_0..x_n in the plane (max norm) whose walk from l to m
/// takes short steps and ends at least 2 eps away from x_l.
struct Walk {
    std::vector<std::array<Q, 2>> pts;
    Index l = 0, m = 0;
    Q eps, eta;
    Q dist(Index i, Index j) const {
        return std::max(abs(pts[i][0] - pts[j][0]), abs(pts[i][1] - pts[j][1]));
    }
};

inline Walk random_walk(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(1, 8), lead(0, 5), side(-3, 3), gen(1, 6);
    Walk w;
    w.eps = Q(num(rng), gen(rng));
    w.eta = w.eps * Q(num(rng), 8);
    const Q step_cap = w.eta / 3;
    w.l = static_cast<Index>(lead(rng));
    for (Index i = 0; i < w.l; ++i) w.pts.push_back({Q(side(rng)), Q(side(rng))});
    std::array<Q, 2> p{Q(side(rng)), Q(side(rng))};
    w.pts.push_back(p);
    const std::array<Q, 2> start = p;
    // Drift along x, wobble along y; every step strictly below eta / 3.
    while (std::max(abs(p[0] - start[0]), abs(p[1] - start[1])) < 2 * w.eps) {
        Q dx = step_cap * Q(num(rng), 9);
        Q dy = step_cap * Q(side(rng), 4);
        p = {p[0] + dx, p[1] + dy};
        w.pts.push_back(p);
    }
    w.m = w.pts.size() - 1;
    for (int extra = lead(rng); extra > 0; --extra) w.pts.push_back({Q(side(rng)), Q(side(rng))});
    return w;
}

}  // namespace mkfp::testing

#pragma once

// Relation-aware Picard iteration on finite metric spaces.
//
// Under (i) transitivity, (ii) a start x with (x, Tx) in R, (iii) T-invariance
// of R, (iv) the Meir-Keeler condition on R and (v) the subsequence
// continuity clause, the orbit x, Tx, T^2 x, ... converges to a fixed point.
// In a finite space convergence means eventual constancy, so the orbit hits
// the fixed point after finitely many steps and the step distances strictly
// decrease until they vanish. (vi) (x, y) in R for every y and (vii) closedness
// of R add uniqueness.

#include "mkfp/metric_core.hpp"
#include "mkfp/modulus.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mkfp {

enum class Outcome { fixed_point_reached, cycle_detected, max_steps_exhausted };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::fixed_point_reached: return "fixed_point_reached";
        case Outcome::cycle_detected: return "cycle_detected";
        case Outcome::max_steps_exhausted: return "max_steps_exhausted";
    }
    return "";
}

template <typename Scalar = Rational>
struct Trajectory {
    Index start = 0;
    std::vector<Index> states;       // x_0 = start, x_{n+1} = T x_n
    std::vector<Scalar> step_dists;  // d(x_n, x_{n+1})
    Outcome outcome = Outcome::max_steps_exhausted;
    std::optional<Index> fixed_point;
    std::size_t steps = 0;  // n with x_n = x_{n+1} when a fixed point is reached
    /// First n with d(x_{n+1}, x_{n+2}) >= d(x_n, x_{n+1}) > 0.
    std::optional<std::size_t> monotonicity_violation;
};

/// Iterates from `start` until T x_n = x_n, a state repeats without being
/// fixed, or `max_steps` applications of T have been made.
template <typename Scalar>
Trajectory<Scalar> iterate(const FiniteMetricSpace<Scalar>& space, const SelfMap& map, Index start, std::size_t max_steps) {
    if (start >= space.size()) throw precondition_error("start index out of range");
    if (map.size() != space.size()) throw precondition_error("map and space sizes differ");
    using T = NumberTraits<Scalar>;
    const double tol = space.tolerance();
    Trajectory<Scalar> tr;
    tr.start = start;
    tr.states.push_back(start);
    std::vector<char> seen(space.size(), 0);
    seen[start] = 1;
    Index x = start;
    for (std::size_t n = 0; n < max_steps; ++n) {
        Index y = map(x);
        tr.states.push_back(y);
        tr.step_dists.push_back(space.dist(x, y));
        if (tr.step_dists.size() >= 2 && !tr.monotonicity_violation) {
            const Scalar& prev = tr.step_dists[tr.step_dists.size() - 2];
            const Scalar& cur = tr.step_dists.back();
            if (!T::is_zero(prev, tol) && !T::lt(cur, prev, tol)) tr.monotonicity_violation = tr.step_dists.size() - 2;
        }
        if (y == x) {
            tr.outcome = Outcome::fixed_point_reached;
            tr.fixed_point = x;
            tr.steps = n;
            return tr;
        }
        if (seen[y]) {
            tr.outcome = Outcome::cycle_detected;
            return tr;
        }
        seen[y] = 1;
        x = y;
    }
    tr.outcome = Outcome::max_steps_exhausted;
    return tr;
}

inline std::size_t default_max_steps(std::size_t point_count) { return 10 * point_count; }

struct Assumption {
    std::string id;  // "i" .. "vii"
    bool holds = false;
    std::string note;
};

enum class Uniqueness { unique, not_unique, not_certified };

inline const char* to_string(Uniqueness u) {
    switch (u) {
        case Uniqueness::unique: return "unique";
        case Uniqueness::not_unique: return "not_unique";
        case Uniqueness::not_certified: return "not_certified";
    }
    return "";
}

struct UniquenessResult {
    Uniqueness status = Uniqueness::not_certified;
    std::vector<Index> fixed_points;  // all fixed points of T
    std::vector<std::string> notes;

    explicit operator bool() const { return status == Uniqueness::unique; }
};

struct FptReport {
    std::vector<Assumption> assumptions;  // (i)..(vii) in order
    std::optional<Index> start;
    std::optional<Trajectory<Rational>> trajectory;
    std::optional<Index> fixed_point;
    UniquenessResult uniqueness;

    [[nodiscard]] const Assumption& assumption(const std::string& id) const {
        for (const auto& a : assumptions)
            if (a.id == id) return a;
        throw std::out_of_range("no assumption " + id);
    }
    /// (i)..(v), which guarantee a fixed point.
    [[nodiscard]] bool existence_hypotheses() const {
        for (const char* id : {"i", "ii", "iii", "iv", "v"})
            if (!assumption(id).holds) return false;
        return true;
    }
    [[nodiscard]] bool uniqueness_hypotheses() const {
        return existence_hypotheses() && assumption("vi").holds && assumption("vii").holds;
    }
};

/// Decides (i)..(vii). Without an explicit start, prefers a point satisfying
/// both (ii) and (vi), then the first point satisfying (ii).
inline FptReport check_fpt_assumptions(const FiniteMetricSpace<Rational>& space, const SelfMap& map, const Relation& rel,
                                       std::optional<Index> start = std::nullopt) {
    if (map.size() != space.size() || rel.point_count() != space.size())
        throw precondition_error("map, relation and space sizes differ");
    const std::size_t n = space.size();
    auto first_unrelated = [&](Index x) {
        for (Index y = 0; y < n; ++y)
            if (!rel.contains(x, y)) return std::optional<Index>(y);
        return std::optional<Index>();
    };
    auto label = [&](Index i) { return space.label(i); };

    FptReport r;
    Check tr = check_transitive(rel);
    r.assumptions.push_back({"i", tr.holds,
                             tr.holds ? "transitive"
                                      : "(" + label(tr.witness[0]) + "," + label(tr.witness[1]) + "), (" + label(tr.witness[1]) +
                                            "," + label(tr.witness[2]) + ") in R but (" + label(tr.witness[0]) + "," +
                                            label(tr.witness[2]) + ") is not"});

    if (start) {
        if (*start >= n) throw precondition_error("start index out of range");
    } else {
        for (Index x = 0; x < n && !start; ++x)
            if (rel.contains(x, map(x)) && !first_unrelated(x)) start = x;
        if (!start) start = find_start(rel, map);
    }
    r.start = start;
    bool ii = start && rel.contains(*start, map(*start));
    r.assumptions.push_back({"ii", ii,
                             !start ? "no x with (x, Tx) in R"
                                    : "(" + label(*start) + "," + label(map(*start)) + (ii ? ") in R" : ") not in R")});

    Check inv = check_invariance(rel, map);
    r.assumptions.push_back({"iii", inv.holds,
                             inv.holds ? "R is T-invariant"
                                       : "(" + label(inv.witness[0]) + "," + label(inv.witness[1]) + ") in R but (" +
                                             label(map(inv.witness[0])) + "," + label(map(inv.witness[1])) + ") is not"});

    if (rel.empty()) {
        r.assumptions.push_back({"iv", true, "vacuous: empty relation"});
    } else {
        FGInstance fg = instance_to_fg(space, map, rel);
        MkVerdict mk = mk_holds(fg, Variant::mk);
        r.assumptions.push_back({"iv", mk.holds,
                                 mk.holds ? "Meir-Keeler on R"
                                          : "fails at eps=" + to_string(*mk.failing_eps) + " on pair " +
                                                fg.carrier()[*mk.failing_element]});
    }
    r.assumptions.push_back({"v", true, "holds: finite-space argument (convergent sequences are eventually constant)"});

    if (start) {
        auto miss = first_unrelated(*start);
        r.assumptions.push_back({"vi", !miss,
                                 miss ? "(" + label(*start) + "," + label(*miss) + ") not in R"
                                      : "(" + label(*start) + ", y) in R for all y"});
    } else {
        r.assumptions.push_back({"vi", false, "no start point"});
    }
    r.assumptions.push_back({"vii", true, "closed: trivially (finite)"});
    return r;
}

/// Uniqueness certificate. With (vi) at the start x, every fixed point y has
/// (x, y) in R, hence (T^n x, y) = (T^n x, T^n y) in R along the orbit and,
/// the orbit being eventually z, (z, y) in R. A distinct such y would give
/// d(Tz, Ty) = d(z, y) > 0 on a pair of R, contradicting the Meir-Keeler
/// condition; that case is reported as a theorem violation.
inline UniquenessResult certify_uniqueness(const FiniteMetricSpace<Rational>& space, const SelfMap& map, const Relation& rel,
                                           Index fixed_point, Index start) {
    UniquenessResult u;
    const std::size_t n = space.size();
    if (map(fixed_point) != fixed_point) throw precondition_error("certify_uniqueness: argument is not a fixed point");
    for (Index y = 0; y < n; ++y)
        if (map(y) == y) u.fixed_points.push_back(y);
    for (Index y = 0; y < n; ++y) {
        if (!rel.contains(start, y)) {
            u.notes.emplace_back("(vi) fails: (" + space.label(start) + "," + space.label(y) + ") not in R");
            u.status = Uniqueness::not_certified;
            return u;
        }
    }
    u.status = Uniqueness::unique;
    for (Index y : u.fixed_points) {
        Index x = start;
        bool chain = true;
        for (std::size_t step = 0; step <= n; ++step) {
            if (!rel.contains(x, y)) {
                chain = false;
                break;
            }
            x = map(x);
        }
        if (!chain) {
            u.notes.emplace_back("orbit leaves R-comparability with fixed point " + space.label(y) + ": (iii) fails");
            u.status = Uniqueness::not_certified;
            continue;
        }
        if (y == fixed_point) continue;
        u.status = Uniqueness::not_unique;
        if (rel.contains(fixed_point, y))
            u.notes.emplace_back("theorem violation: distinct R-related fixed points " + space.label(fixed_point) + ", " +
                                 space.label(y) + " contradict the Meir-Keeler condition");
        else
            u.notes.emplace_back("second fixed point " + space.label(y));
    }
    return u;
}

struct SolveOptions {
    std::optional<Index> start;
    std::optional<std::size_t> max_steps;
};

/// Checks the assumptions, iterates from the start point and, when (vi) and
/// (vii) hold, certifies uniqueness of the fixed point found.
inline FptReport solve(const FiniteMetricSpace<Rational>& space, const SelfMap& map, const Relation& rel,
                       const SolveOptions& opts = {}) {
    FptReport r = check_fpt_assumptions(space, map, rel, opts.start);
    if (!r.start) return r;
    r.trajectory = iterate(space, map, *r.start, opts.max_steps.value_or(default_max_steps(space.size())));
    r.fixed_point = r.trajectory->fixed_point;
    if (r.fixed_point && r.assumption("vi").holds && r.assumption("vii").holds)
        r.uniqueness = certify_uniqueness(space, map, rel, *r.fixed_point, *r.start);
    else
        r.uniqueness.notes.emplace_back(r.fixed_point ? "(vi) fails" : "no fixed point reached");
    return r;
}

/// Given d(x_l, x_m) >= 2 eps, 0 < eta <= eps and consecutive steps shorter
/// than eta/3 inside the window, returns the first j in (l, m) with
/// d(x_l, x_j) >= eps + 2 eta / 3; that j also satisfies d(x_l, x_j) < eps + eta.
///
/// `dist(i, j)` must return d(x_i, x_j) for indices in [l, m].
template <typename Scalar, typename Dist>
Index pre_cauchy_witness(const Dist& dist, Index l, Index m, const Scalar& eps, const Scalar& eta) {
    std::vector<std::string> bad;
    if (!(l < m)) bad.emplace_back("l < m");
    if (!(eta > Scalar(0))) bad.emplace_back("eta > 0");
    if (!(eta <= eps)) bad.emplace_back("eta <= eps");
    if (bad.empty()) {
        if (!(dist(l, m) >= Scalar(2) * eps)) bad.emplace_back("d(x_l, x_m) >= 2 eps");
        for (Index i = l; i < m; ++i) {
            if (!(Scalar(3) * dist(i, i + 1) < eta)) {
                bad.emplace_back("d(x_i, x_i+1) < eta/3 at i=" + std::to_string(i));
                break;
            }
        }
    }
    if (!bad.empty()) {
        std::string msg = "pre_cauchy_witness precondition violated:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw precondition_error(msg);
    }
    const Scalar threshold = eps + Scalar(2) * eta / Scalar(3);
    for (Index i = l + 1; i < m; ++i)
        if (dist(l, i) >= threshold) return i;
    throw std::logic_error("pre_cauchy_witness: no index crosses eps + 2 eta / 3 (inconsistent distances)");
}

}  // namespace mkfp

#pragma once

// Exact decision of the Meir-Keeler conditions on finite (K, f, g) instances.
//
//   MK : for every e > 0 some d > 0 has  e <= g(k) < e + d  =>  f(k) < e
//   MKS: for every e > 0 some d > 0 has       g(k) < e + d  =>  f(k) < e
//
// For a fixed e the admissible d form an interval (0, d*] (the premise uses a
// half-open window, so the supremum itself is admissible when finite):
//
//   MK : d*(e) = inf { g(k) - e : f(k) >= e, g(k) >= e }
//   MKS: d*(e) = inf { g(k)     : f(k) >= e } - e,  truncated at 0
//
// with inf of the empty set = inf. On a finite carrier the infima are minima,
// so MK fails exactly when some k has f(k) >= g(k) > 0 (take e = g(k)) and
// MKS fails exactly when some k has f(k) > 0 and g(k) <= f(k) (take e = f(k)).

#include "mkfp/metric_core.hpp"
#include "mkfp/piecewise.hpp"

#include <optional>
#include <set>
#include <vector>

namespace mkfp {

enum class Variant { mk, mks };

inline const char* to_string(Variant v) { return v == Variant::mk ? "mk" : "mks"; }

struct MkVerdict {
    bool holds = true;
    /// An e at which every d > 0 fails, and the carrier element that breaks it.
    std::optional<Rational> failing_eps;
    std::optional<std::size_t> failing_element;

    explicit operator bool() const { return holds; }
};

inline MkVerdict mk_holds(const FGInstance& inst, Variant variant) {
    for (std::size_t k = 0; k < inst.size(); ++k) {
        const Rational& f = inst.f(k);
        const Rational& g = inst.g(k);
        if (variant == Variant::mk) {
            if (g > 0 && f >= g) return {false, g, k};
        } else {
            if (f > 0 && g <= f) return {false, f, k};
        }
    }
    return {};
}

/// Supremal admissible d for the given e > 0, evaluated straight from the
/// definition.
inline Extended delta_star(const FGInstance& inst, Variant variant, const Rational& eps) {
    if (eps <= 0) throw precondition_error("delta_star needs eps > 0");
    Extended best = Extended::infinity();
    for (std::size_t k = 0; k < inst.size(); ++k) {
        if (inst.f(k) < eps) continue;
        if (variant == Variant::mk) {
            if (inst.g(k) >= eps) best = min(best, Extended(inst.g(k) - eps));
        } else {
            best = min(best, Extended(inst.g(k) - eps));
        }
    }
    if (best.is_finite() && best.value() < 0) return Extended(0);
    return best;
}

/// d*(e) as a function of e, exactly.
///
/// The sets {k : f(k) >= e} and {k : g(k) >= e} only change when e crosses a
/// value of f or g, so between consecutive positive values d* is affine with
/// slope -1 or identically inf. The MKS truncation at 0 switches at e = g(k),
/// which is already a breakpoint.
class ModulusProfile {
public:
    ModulusProfile(Variant variant, std::vector<Rational> breakpoints, PiecewiseFn delta)
        : variant_(variant), breakpoints_(std::move(breakpoints)), delta_(std::move(delta)) {}

    [[nodiscard]] Variant variant() const { return variant_; }
    [[nodiscard]] const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    [[nodiscard]] const PiecewiseFn& function() const { return delta_; }

    [[nodiscard]] Extended delta_at(const Rational& eps) const {
        if (eps <= 0) throw precondition_error("delta_at needs eps > 0");
        return delta_(eps);
    }

    /// One row per open interval between breakpoints, plus one per breakpoint.
    struct Row {
        Rational lo;
        std::optional<Rational> hi;  // nullopt: open interval (lo, inf); lo == hi: the point lo
        bool is_point = false;
        Segment formula;
    };

    [[nodiscard]] std::vector<Row> rows() const {
        std::vector<Row> out;
        Rational lo = 0;
        for (const auto& b : breakpoints_) {
            out.push_back({lo, b, false, delta_.segment_at((lo + b) / 2)});
            Extended v = delta_(b);
            out.push_back({b, b, true, v.is_infinite() ? Segment::infinite() : Segment::constant(v.value())});
            lo = b;
        }
        out.push_back({lo, std::nullopt, false, delta_.segment_at(lo + 1)});
        return out;
    }

private:
    Variant variant_;
    std::vector<Rational> breakpoints_;
    PiecewiseFn delta_;
};

inline ModulusProfile modulus_profile(const FGInstance& inst, Variant variant) {
    std::vector<Rational> bps = inst.positive_values();
    auto eval = [&](const Rational& eps) -> Extended {
        // d* at 0 is not part of the condition; report the right limit there.
        if (eps == 0) return Extended::infinity();
        return delta_star(inst, variant, eps);
    };
    PiecewiseFn fn = PiecewiseFn::from_sampler(bps, eval);
    // Replace the placeholder at 0 by the right limit so the stored function
    // carries no artificial jump at the origin.
    std::map<Rational, Extended> ov = fn.overrides();
    ov.erase(Rational(0));
    return {variant, std::move(bps), PiecewiseFn(fn.breakpoints(), fn.segments(), std::move(ov)).simplified()};
}

/// Independent oracle: evaluates the quantified definition literally over a
/// finite candidate set instead of using the closed forms above.
///
/// Candidate e: every value of f and g, `subdivisions` evenly spaced points
/// inside each gap between consecutive values (and below the smallest / above
/// the largest). Whether some d works at e depends only on which k satisfy
/// f(k) >= e, g(k) >= e, g(k) == e and g(k) <= e; all of these are constant on
/// open gaps, so values plus one interior point per gap decide every e > 0.
///
/// Candidate d for a given e: every c - e with c a candidate larger than e,
/// plus inf. The feasible set is (0, d*] with d* = g(k) - e for some k, and
/// g(k) is a candidate, so d* itself is tried whenever it is finite. The
/// search runs in ascending order and stops at the first d that works.
inline bool brute_force_mk(const FGInstance& inst, Variant variant, int subdivisions = 1) {
    if (subdivisions < 1) subdivisions = 1;
    std::set<Rational> values;
    for (std::size_t k = 0; k < inst.size(); ++k) {
        values.insert(inst.f(k));
        values.insert(inst.g(k));
    }
    std::vector<Rational> v(values.begin(), values.end());
    std::set<Rational> eps_set;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 0) eps_set.insert(v[i]);
        Rational lo = i == 0 ? Rational(0) : v[i - 1];
        for (int s = 1; s <= subdivisions; ++s) {
            Rational e = lo + (v[i] - lo) * s / (subdivisions + 1);
            if (e > 0) eps_set.insert(e);
        }
    }
    const Rational top = v.back() + 1;
    for (int s = 1; s <= subdivisions; ++s) eps_set.insert(v.back() + (top - v.back()) * s / (subdivisions + 1));
    eps_set.insert(top);
    std::vector<Rational> eps_list(eps_set.begin(), eps_set.end());

    auto premise = [&](std::size_t k, const Rational& e, const Extended& d) {
        const Rational& g = inst.g(k);
        bool upper = d.is_infinite() || Extended(g) < Extended(e + d.value());
        if (variant == Variant::mk) return e <= g && upper;
        return upper;
    };
    auto works = [&](const Rational& e, const Extended& d) {
        for (std::size_t k = 0; k < inst.size(); ++k)
            if (premise(k, e, d) && !(inst.f(k) < e)) return false;
        return true;
    };

    // eps_list is sorted, so c - e over the tail c > e is already ascending.
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const Rational& e = eps_list[i];
        bool found = false;
        for (std::size_t j = i + 1; j < eps_list.size() && !found; ++j) found = works(e, Extended(eps_list[j] - e));
        if (!found) found = works(e, Extended::infinity());
        if (!found) return false;
    }
    return true;
}

}  // namespace mkfp

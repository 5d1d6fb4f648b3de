#pragma once

// Witness functions for the six equivalent characterizations of the
// Meir-Keeler condition on a finite (K, f, g) instance:
//
//   (1) MK   (2) MKS
//   (3) gamma nondecreasing, gamma(s) > s, gamma(f) <= g
//   (4) w(s) > s, w right lsc on (0, inf), w(f) <= g
//   (5) l of type (L), f < l(g) where g != 0
//   (6) phi nondecreasing, psi right usc on (0, inf), phi > psi, phi(f) <= psi(g)
//
// Every witness is built by the constructive route (gamma from the superlevel
// infimum, w by capping gamma at its blow-up point, l through the
// alpha -> beta -> phi1 -> phi2 -> l chain) and then checked exactly on its
// piecewise representation.

#include "mkfp/modulus.hpp"
#include "mkfp/piecewise.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mkfp {

/// gamma(t) = inf { g(k) : f(k) >= t }, inf of the empty set = inf.
/// The superlevel sets only change at values of f, and gamma(0) = min g.
inline PiecewiseFn build_gamma(const FGInstance& inst) {
    std::vector<Rational> pts;
    for (const auto& v : inst.f_values())
        if (v > 0) pts.push_back(v);
    auto eval = [&](const Rational& t) -> Extended {
        Extended best = Extended::infinity();
        for (std::size_t k = 0; k < inst.size(); ++k)
            if (inst.f(k) >= t) best = min(best, Extended(inst.g(k)));
        return best;
    };
    return PiecewiseFn::from_sampler(pts, eval);
}

/// Nondecreasing with gamma(s) > s for all s > 0.
inline bool gamma_admissible(const PiecewiseFn& gamma) {
    return gamma.is_nondecreasing() && holds_on_positive(PiecewiseFn::identity(), Cmp::less, gamma);
}

/// inf { t >= 0 : F(t) = inf }, or nullopt when F is finite everywhere.
inline std::optional<Rational> infinity_threshold(const PiecewiseFn& fn) {
    std::optional<Rational> t0;
    auto take = [&](const Rational& t) {
        if (!t0 || t < *t0) t0 = t;
    };
    for (const auto& [t, v] : fn.overrides())
        if (v.is_infinite()) take(t);
    const auto& segs = fn.segments();
    for (std::size_t i = 0; i < segs.size(); ++i)
        if (segs[i].is_infinite()) take(i == 0 ? Rational(0) : fn.breakpoints()[i - 1]);
    return t0;
}

/// w from an admissible gamma:
///   gamma(t0) <  inf: w = gamma on [0, t0], gamma(t0) + t - t0 beyond
///   gamma(t0) == inf: w = gamma on [0, t0), 2t from t0 on
/// with t0 = inf {gamma = inf}. When gamma never reaches inf, w = gamma.
/// If t0 = 0 and gamma(0) = 0 the second form is used.
inline PiecewiseFn build_w(const PiecewiseFn& gamma) {
    if (!gamma_admissible(gamma)) throw precondition_error("gamma not admissible");
    std::optional<Rational> t0 = infinity_threshold(gamma);
    if (!t0) return gamma;
    Extended at = gamma(*t0);
    // t0 = 0 with gamma(0) = 0 (f vanishes, some g does too): the first branch
    // would give w(t) = t, so take the 2t tail instead.
    if (at.is_finite() && !(*t0 == 0 && at.value() == 0)) {
        PiecewiseFn tail = PiecewiseFn::affine(at.value() - *t0, 1);
        return PiecewiseFn::splice(gamma, *t0, tail);
    }
    return PiecewiseFn::splice(gamma, *t0, PiecewiseFn::affine(0, 2));
}

/// Intermediate functions of the construction of l, kept for inspection.
struct LChain {
    Rational alpha_cap;  // value of alpha where the MK modulus is inf
    PiecewiseFn alpha;   // 2 alpha(e) is an admissible MK window at e
    PiecewiseFn beta;    // beta(t) = inf { e > 0 : t <= e + alpha(e) }
    PiecewiseFn phi1;    // beta(t) where that infimum is a minimum, (beta(t) + t) / 2 otherwise
    PiecewiseFn phi2;    // sup { phi1(s) : s <= t }
    PiecewiseFn l;       // inf { phi2(s) : s > t }
};

namespace detail {

struct ThresholdPiece {
    Piece piece;
    bool attained = false;  // the infimum defining beta is a minimum
};

/// Sweeps e upward over the pieces of h(e) = e + alpha(e), recording for each
/// range of t the smallest e with h(e) >= t. `covered` is the supremum of h
/// seen so far; `closed` says whether that supremum has been attained.
inline std::vector<ThresholdPiece> sweep_beta(const PiecewiseFn& alpha) {
    std::vector<ThresholdPiece> out;
    Rational covered = 0;
    bool closed = true;
    auto emit = [&](std::optional<Rational> hi, bool hi_closed, Segment formula, bool attained) {
        out.push_back({Piece{covered, !closed, std::move(hi), hi_closed, std::move(formula)}, attained});
    };
    for (const auto& e : elementary_pieces(alpha)) {
        if (e.formula.is_infinite()) throw std::logic_error("alpha must be finite");
        if (e.is_point) {
            Rational v = e.lo + e.formula(e.lo).value();
            if (v > covered || (v == covered && !closed)) {
                emit(v, true, Segment::constant(e.lo), true);
                covered = v;
                closed = true;
            }
            continue;
        }
        const Rational& a = e.lo;
        const Rational c = e.formula.intercept();
        const Rational s = e.formula.slope() + 1;
        const Rational h_lo = c + s * a;
        if (s > 0) {
            if (h_lo > covered || (h_lo == covered && !closed)) {
                emit(h_lo, true, Segment::constant(a), false);
                covered = h_lo;
                closed = true;
            }
            Segment inverse(-c / s, 1 / s);
            if (!e.hi) {
                emit(std::nullopt, false, inverse, true);
                return out;
            }
            Rational h_hi = c + s * *e.hi;
            if (h_hi > covered) {
                emit(h_hi, false, inverse, true);
                covered = h_hi;
                closed = false;
            }
        } else if (s == 0) {
            if (c > covered || (c == covered && !closed)) {
                emit(c, true, Segment::constant(a), false);
                covered = c;
                closed = true;
            }
        } else if (h_lo > covered) {
            emit(h_lo, false, Segment::constant(a), false);
            covered = h_lo;
            closed = false;
        }
    }
    throw std::logic_error("e + alpha(e) is bounded; beta undefined for large t");
}

/// t -> sup { F(s) : 0 < s <= t } for a finite-valued F.
inline PiecewiseFn running_sup(const PiecewiseFn& fn) {
    std::vector<Piece> out;
    std::optional<Rational> m;
    auto lift = [&](const Rational& v) { return m && *m > v ? *m : v; };
    for (const auto& e : elementary_pieces(fn)) {
        if (e.formula.is_infinite()) throw std::logic_error("running_sup needs a finite function");
        if (e.is_point) {
            Rational v = lift(e.formula(e.lo).value());
            out.push_back({e.lo, true, e.lo, true, Segment::constant(v)});
            m = v;
            continue;
        }
        const Rational& a = e.lo;
        const Rational& c = e.formula.intercept();
        const Rational& s = e.formula.slope();
        const Rational start = c + s * a;
        if (s >= 0) {
            if (!m || *m <= start) {
                out.push_back({a, false, e.hi, false, e.formula});
            } else if (s == 0) {
                out.push_back({a, false, e.hi, false, Segment::constant(*m)});
            } else {
                Rational cross = (*m - c) / s;
                if (e.hi && cross >= *e.hi) {
                    out.push_back({a, false, e.hi, false, Segment::constant(*m)});
                } else {
                    out.push_back({a, false, cross, true, Segment::constant(*m)});
                    out.push_back({cross, false, e.hi, false, e.formula});
                }
            }
            if (!e.hi) break;
            m = lift(c + s * *e.hi);
        } else {
            Rational v = lift(start);
            out.push_back({a, false, e.hi, false, Segment::constant(v)});
            m = v;
        }
    }
    return PiecewiseFn::from_pieces(out, Extended(0));
}

}  // namespace detail

/// Builds l of type (L) with f(k) < l(g(k)) wherever g(k) != 0, following the
/// alpha -> beta -> phi1 -> phi2 -> l construction.
///
/// alpha(e) is half the MK modulus d*(e) (so e <= g < e + 2 alpha(e) forces
/// f < e), and alpha_cap = max(1, max g) where the modulus is inf.
inline LChain build_l_chain(const FGInstance& inst) {
    if (!mk_holds(inst, Variant::mk)) throw precondition_error("not a Meir-Keeler instance");
    LChain chain;
    chain.alpha_cap = 1;
    for (const auto& g : inst.g_values()) chain.alpha_cap = std::max(chain.alpha_cap, g);

    const PiecewiseFn delta = modulus_profile(inst, Variant::mk).function();
    std::vector<Segment> segs;
    for (const auto& seg : delta.segments())
        segs.push_back(seg.is_infinite() ? Segment::constant(chain.alpha_cap)
                                         : Segment(seg.intercept() / 2, seg.slope() / 2));
    std::map<Rational, Extended> ov;
    for (const auto& [t, v] : delta.overrides()) ov.emplace(t, v.is_infinite() ? Extended(chain.alpha_cap) : Extended(v.value() / 2));
    chain.alpha = PiecewiseFn(delta.breakpoints(), std::move(segs), std::move(ov));

    std::vector<detail::ThresholdPiece> sweep = detail::sweep_beta(chain.alpha);
    std::vector<Piece> beta_pieces;
    std::vector<Piece> phi1_pieces;
    for (const auto& tp : sweep) {
        beta_pieces.push_back(tp.piece);
        Piece p = tp.piece;
        if (!tp.attained) {
            const Segment& f = tp.piece.formula;
            p.formula = Segment(f.intercept() / 2, (f.slope() + 1) / 2);
        }
        phi1_pieces.push_back(std::move(p));
    }
    chain.beta = PiecewiseFn::from_pieces(beta_pieces, Extended(0));
    chain.phi1 = PiecewiseFn::from_pieces(phi1_pieces, Extended(0));
    chain.phi2 = detail::running_sup(chain.phi1);
    chain.l = chain.phi2.without_overrides().simplified();
    return chain;
}

inline PiecewiseFn build_l(const FGInstance& inst) { return build_l_chain(inst).l; }

/// (3) => (6): phi = gamma, psi = identity.
inline std::pair<PiecewiseFn, PiecewiseFn> build_phi_psi(const PiecewiseFn& gamma) {
    if (!gamma_admissible(gamma)) throw precondition_error("gamma not admissible");
    return {gamma, PiecewiseFn::identity()};
}

/// (5) => (6) on a finite carrier without the zero-set hypothesis:
/// phi(t) = t + eta, psi = l on (0, inf), psi(0) = max f + eta, where eta is
/// the smallest slack l(g(k)) - f(k) over g(k) != 0 (1 if there is none).
inline std::pair<PiecewiseFn, PiecewiseFn> build_phi_psi_from_l(const FGInstance& inst, const PiecewiseFn& l) {
    std::optional<Rational> eta;
    Rational max_f = 0;
    for (std::size_t k = 0; k < inst.size(); ++k) {
        max_f = std::max(max_f, inst.f(k));
        if (inst.g(k) == 0) continue;
        Extended lg = l(inst.g(k));
        if (lg.is_infinite() || lg.value() <= inst.f(k)) throw precondition_error("l does not witness condition (5)");
        Rational slack = lg.value() - inst.f(k);
        if (!eta || slack < *eta) eta = slack;
    }
    Rational e = eta.value_or(Rational(1));
    std::map<Rational, Extended> ov = l.overrides();
    ov[Rational(0)] = Extended(max_f + e);
    PiecewiseFn psi(l.breakpoints(), l.segments(), std::move(ov));
    return {PiecewiseFn::affine(e, 1), psi};
}

struct ConditionCheck {
    bool holds = true;
    std::vector<std::string> failures;

    void fail(std::string why) {
        holds = false;
        failures.push_back(std::move(why));
    }
    explicit operator bool() const { return holds; }
};

/// Number of witness functions condition `which` (1..6) takes.
inline std::size_t witness_arity(int which) {
    switch (which) {
        case 1:
        case 2: return 0;
        case 3:
        case 4:
        case 5: return 1;
        case 6: return 2;
        default: throw precondition_error("condition number must be in 1..6");
    }
}

/// Checks the defining clauses of condition `which` exactly.
inline ConditionCheck verify_condition(const FGInstance& inst, int which, std::span<const PiecewiseFn> witnesses) {
    if (witnesses.size() != witness_arity(which))
        throw precondition_error("condition " + std::to_string(which) + " takes " + std::to_string(witness_arity(which)) +
                                 " witness function(s), got " + std::to_string(witnesses.size()));
    ConditionCheck out;
    const PiecewiseFn id = PiecewiseFn::identity();
    auto at = [](const std::optional<Rational>& t) { return t ? " (t=" + to_string(*t) + ")" : std::string(); };

    if (which == 1 || which == 2) {
        MkVerdict v = mk_holds(inst, which == 1 ? Variant::mk : Variant::mks);
        if (!v) out.fail("no delta works at eps=" + to_string(*v.failing_eps) + ", element " + inst.carrier()[*v.failing_element]);
        return out;
    }
    if (which == 3) {
        const PiecewiseFn& gamma = witnesses[0];
        if (!gamma.is_nondecreasing()) out.fail("gamma is not nondecreasing");
        if (auto t = compare_counterexample(id, Cmp::less, gamma)) out.fail("gamma(s) <= s" + at(t));
        for (std::size_t k = 0; k < inst.size(); ++k)
            if (gamma(inst.f(k)) > Extended(inst.g(k))) out.fail("gamma(f) > g at " + inst.carrier()[k]);
        return out;
    }
    if (which == 4) {
        const PiecewiseFn& w = witnesses[0];
        if (!w.is_finite_valued()) out.fail("w takes the value inf");
        if (auto t = compare_counterexample(id, Cmp::less, w)) out.fail("w(s) <= s" + at(t));
        if (!w.is_right_lsc()) out.fail("w is not right lower semicontinuous");
        for (std::size_t k = 0; k < inst.size(); ++k)
            if (w(inst.f(k)) > Extended(inst.g(k))) out.fail("w(f) > g at " + inst.carrier()[k]);
        return out;
    }
    if (which == 5) {
        const PiecewiseFn& l = witnesses[0];
        if (!l.is_finite_valued()) out.fail("l takes the value inf");
        if (auto t = l.type_L_counterexample()) out.fail("l is not of type (L)" + at(t));
        for (std::size_t k = 0; k < inst.size(); ++k)
            if (inst.g(k) != 0 && !(Extended(inst.f(k)) < l(inst.g(k)))) out.fail("f >= l(g) at " + inst.carrier()[k]);
        return out;
    }
    const PiecewiseFn& phi = witnesses[0];
    const PiecewiseFn& psi = witnesses[1];
    if (!phi.is_nondecreasing()) out.fail("phi is not nondecreasing");
    if (!psi.is_finite_valued()) out.fail("psi takes the value inf");
    if (!psi.is_right_usc()) out.fail("psi is not right upper semicontinuous");
    if (auto t = compare_counterexample(psi, Cmp::less, phi)) out.fail("phi <= psi" + at(t));
    for (std::size_t k = 0; k < inst.size(); ++k)
        if (phi(inst.f(k)) > psi(inst.g(k))) out.fail("phi(f) > psi(g) at " + inst.carrier()[k]);
    return out;
}

inline ConditionCheck verify_condition(const FGInstance& inst, int which, std::initializer_list<PiecewiseFn> witnesses) {
    std::vector<PiecewiseFn> w(witnesses);
    return verify_condition(inst, which, std::span<const PiecewiseFn>(w));
}

/// Regularity of l beyond type (L).
struct MoreoverCheck {
    bool right_continuous = false;
    bool nondecreasing = false;
    bool positive = false;  // l(s) > 0 for all s > 0
    bool below_diagonal = false;  // l(t) <= t for all t > 0

    [[nodiscard]] bool all() const { return right_continuous && nondecreasing && positive && below_diagonal; }
};

inline MoreoverCheck check_moreover(const PiecewiseFn& l) {
    MoreoverCheck m;
    m.right_continuous = l.is_right_continuous();
    m.nondecreasing = l.is_nondecreasing(false);
    m.positive = holds_on_positive(PiecewiseFn::constant(Extended(0)), Cmp::less, l);
    m.below_diagonal = holds_on_positive(l, Cmp::less_equal, PiecewiseFn::identity());
    return m;
}

enum class Basis {
    decided,      // quantifier condition decided exactly
    verified,     // constructed witness passed verify_condition
    refuted,      // constructed canonical witness failed verify_condition
    implied,      // no witness can exist, by an implication to a failing condition
};

inline const char* to_string(Basis b) {
    switch (b) {
        case Basis::decided: return "decided";
        case Basis::verified: return "witness verified";
        case Basis::refuted: return "canonical witness fails";
        case Basis::implied: return "implied false";
    }
    return "";
}

struct ConditionVerdict {
    bool holds = false;
    Basis basis = Basis::decided;
    std::vector<std::string> detail;
};

struct EquivalenceReport {
    bool hypothesis = true;  // g^{-1}(0) is contained in f^{-1}(0)
    std::array<ConditionVerdict, 6> conditions;
    PiecewiseFn gamma;
    std::optional<PiecewiseFn> w;
    std::optional<PiecewiseFn> l;
    std::optional<PiecewiseFn> phi;
    std::optional<PiecewiseFn> psi;
    bool phi_psi_from_l = false;     // (6) witnessed through l, not gamma
    bool gamma_never_infinite = false;  // w = gamma branch taken
    std::optional<MoreoverCheck> moreover;
    bool all_agree = false;
    bool consistent = true;  // no implication of the theorem was contradicted
    std::vector<std::string> notes;

    [[nodiscard]] bool holds(int which) const { return conditions.at(static_cast<std::size_t>(which - 1)).holds; }
};

inline EquivalenceReport equivalence_report(const FGInstance& inst) {
    EquivalenceReport r;
    r.hypothesis = inst.zero_set_hypothesis();
    if (!r.hypothesis) r.notes.emplace_back("hypothesis g^-1(0) subset f^-1(0) fails; (1) need not imply (2)");

    auto set = [&](int which, bool holds, Basis basis, std::vector<std::string> detail = {}) {
        r.conditions[static_cast<std::size_t>(which - 1)] = {holds, basis, std::move(detail)};
    };
    auto from_check = [&](int which, const ConditionCheck& c) {
        set(which, c.holds, c.holds ? Basis::verified : Basis::refuted, c.failures);
    };

    ConditionCheck c1 = verify_condition(inst, 1, std::span<const PiecewiseFn>());
    ConditionCheck c2 = verify_condition(inst, 2, std::span<const PiecewiseFn>());
    set(1, c1.holds, Basis::decided, c1.failures);
    set(2, c2.holds, Basis::decided, c2.failures);

    r.gamma = build_gamma(inst);
    ConditionCheck c3 = verify_condition(inst, 3, {r.gamma});
    from_check(3, c3);

    if (c3) {
        r.gamma_never_infinite = !infinity_threshold(r.gamma).has_value();
        if (r.gamma_never_infinite) r.notes.emplace_back("gamma is finite everywhere; w = gamma");
        r.w = build_w(r.gamma);
        from_check(4, verify_condition(inst, 4, {*r.w}));
        auto [phi, psi] = build_phi_psi(r.gamma);
        r.phi = std::move(phi);
        r.psi = std::move(psi);
        from_check(6, verify_condition(inst, 6, {*r.phi, *r.psi}));
    } else {
        set(4, false, Basis::implied, {"(4) implies (2), and the canonical gamma shows (2) fails"});
    }

    if (c1) {
        r.l = build_l(inst);
        from_check(5, verify_condition(inst, 5, {*r.l}));
        r.moreover = check_moreover(*r.l);
        if (!r.moreover->all()) r.notes.emplace_back("constructed l misses a regularity property");
        if (!c3) {
            auto [phi, psi] = build_phi_psi_from_l(inst, *r.l);
            r.phi = std::move(phi);
            r.psi = std::move(psi);
            r.phi_psi_from_l = true;
            from_check(6, verify_condition(inst, 6, {*r.phi, *r.psi}));
        }
    } else {
        set(5, false, Basis::implied, {"(5) implies (1), which fails"});
        if (!c3) set(6, false, Basis::implied, {"(6) implies (1), which fails"});
    }

    bool first = r.conditions[0].holds;
    r.all_agree = true;
    for (const auto& c : r.conditions) r.all_agree = r.all_agree && c.holds == first;

    // Implications that hold with or without the hypothesis.
    auto expect = [&](bool ok, const char* what) {
        if (!ok) {
            r.consistent = false;
            r.notes.emplace_back(std::string("theorem violation: ") + what);
        }
    };
    expect(!r.holds(2) || r.holds(1), "(2) holds but (1) fails");
    expect(r.holds(3) == r.holds(2), "(3) and (2) disagree");
    expect(r.holds(4) == r.holds(2), "(4) and (2) disagree");
    expect(r.holds(5) == r.holds(1), "(5) and (1) disagree");
    expect(!r.holds(6) || r.holds(1), "(6) holds but (1) fails");
    if (r.hypothesis) expect(r.all_agree, "verdicts disagree under the zero-set hypothesis");
    if (r.moreover) expect(r.moreover->all(), "l fails right continuity, monotonicity, positivity or l(t) <= t");
    return r;
}

}  // namespace mkfp

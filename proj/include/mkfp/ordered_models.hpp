#pragma once

// Ordered instantiations of the relational fixed-point theorem, with R taken
// to be the order relation {(u, v) : u <= v}.
//
// NR: x <= Tx for some x; T monotone; d(Tu, Tv) <= theta d(u, v) on
//     comparable pairs with theta in [0, 1); monotone convergent sequences stay
//     below their limit.
// RZ: closed order and graph; T monotone; d(Tu, Tv) <= psi(d(u, v)) on
//     comparable pairs with psi right usc and psi(t) < t; a least element.
//
// Finite mode checks every clause exactly. Numeric mode handles affine maps
// x -> Ax + b on R^n with the componentwise order.

#include "mkfp/fixed_point.hpp"
#include "mkfp/witnesses.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mkfp {

/// A clause of NR or RZ does not hold; `clause()` is e.g. "NR3" or "RZ4".
class clause_violation : public std::runtime_error {
public:
    clause_violation(std::string clause, const std::string& detail)
        : std::runtime_error(clause + ": " + detail), clause_(std::move(clause)) {}
    [[nodiscard]] const std::string& clause() const { return clause_; }

private:
    std::string clause_;
};

struct FiniteOrderInstance {
    FiniteMetricSpace<Rational> space;
    SelfMap map;
    Relation order;
    std::optional<Rational> theta;    // NR contraction constant
    std::optional<PiecewiseFn> psi;   // RZ comparison function
};

struct OrderReport {
    std::vector<Assumption> clauses;  // NR1.. or RZ0..
    FptReport fpt;
    /// The induced relational instance passes the generic assumption checker.
    bool reduction_consistent = false;
    /// RZ only: (6) with phi = id and the given psi, and the MK condition on R.
    std::optional<bool> condition6_id_psi;
    std::optional<bool> mk_on_order;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string pair_str(const FiniteMetricSpace<Rational>& s, Index u, Index v) {
    return "(" + s.label(u) + "," + s.label(v) + ")";
}

inline void require_partial_order(const FiniteOrderInstance& inst) {
    if (inst.map.size() != inst.space.size() || inst.order.point_count() != inst.space.size())
        throw precondition_error("map, order and space sizes differ");
    Check po = check_partial_order(inst.order);
    if (po) return;
    const auto& s = inst.space;
    const auto& w = po.witness;
    if (w.size() == 1) throw precondition_error("order is not reflexive at " + s.label(w[0]));
    if (w.size() == 2) throw precondition_error("order is not antisymmetric on " + pair_str(s, w[0], w[1]));
    throw precondition_error("order is not transitive: " + pair_str(s, w[0], w[1]) + ", " + pair_str(s, w[1], w[2]) +
                             " without " + pair_str(s, w[0], w[2]));
}

inline std::optional<IndexPair> monotonicity_failure(const Relation& order, const SelfMap& map) {
    for (auto [u, v] : order.pairs())
        if (!order.contains(map(u), map(v))) return IndexPair{u, v};
    return std::nullopt;
}

inline void throw_first_failure(const std::vector<Assumption>& clauses) {
    for (const auto& c : clauses)
        if (!c.holds) throw clause_violation(c.id, c.note);
}

}  // namespace detail

/// NR1..NR4 on a finite ordered space. NR4 is checked along the orbit from
/// the NR1 point once the fixed point is known; every earlier clause is an
/// exact scan. Clause failures are reported, not thrown; a relation that is
/// not a partial order is a precondition error.
inline std::vector<Assumption> nr_clauses(const FiniteOrderInstance& inst, std::optional<Index> start = std::nullopt) {
    detail::require_partial_order(inst);
    const auto& s = inst.space;
    const auto& T = inst.map;
    const auto& order = inst.order;
    std::vector<Assumption> out;

    if (!start) start = find_start(order, T);
    if (start && !order.contains(*start, T(*start))) {
        out.push_back({"NR1", false, s.label(*start) + " is not below its image"});
    } else {
        out.push_back({"NR1", start.has_value(),
                       start ? s.label(*start) + " <= T" + s.label(*start) : "no x with x <= Tx"});
    }

    auto mono = detail::monotonicity_failure(order, T);
    out.push_back({"NR2", !mono,
                   mono ? detail::pair_str(s, mono->first, mono->second) + " comparable but images are not"
                        : "T is monotone"});

    if (!inst.theta) throw precondition_error("NR needs a contraction constant theta");
    const Rational& theta = *inst.theta;
    if (theta < 0 || theta >= 1) {
        out.push_back({"NR3", false, "theta=" + to_string(theta) + " not in [0,1)"});
    } else {
        std::optional<IndexPair> bad;
        for (auto [u, v] : order.pairs()) {
            if (s.dist(T(u), T(v)) > theta * s.dist(u, v)) {
                bad = IndexPair{u, v};
                break;
            }
        }
        out.push_back({"NR3", !bad,
                       bad ? "d(T" + s.label(bad->first) + ",T" + s.label(bad->second) + ")=" +
                                 to_string(s.dist(T(bad->first), T(bad->second))) + " > theta*d" +
                                 detail::pair_str(s, bad->first, bad->second) + "=" +
                                 to_string(theta * s.dist(bad->first, bad->second))
                           : "d(Tu,Tv) <= " + to_string(theta) + " d(u,v) on comparable pairs"});
    }

    // A convergent sequence in a finite space is eventually equal to its limit,
    // so NR4 follows from transitivity; the orbit check below makes it concrete.
    Index x = start.value_or(0);
    bool nr4 = true;
    std::string note = "x_n <= y along the orbit";
    if (start) {
        std::vector<Index> orbit{x};
        for (std::size_t n = 0; n < s.size() && T(x) != x; ++n) orbit.push_back(x = T(x));
        for (Index xn : orbit) {
            if (!order.contains(xn, x)) {
                nr4 = false;
                note = "orbit point " + s.label(xn) + " not below limit " + s.label(x);
                break;
            }
        }
        if (T(x) != x) note = "orbit does not settle; NR4 checked on the visited points";
    }
    out.push_back({"NR4", nr4, note});
    return out;
}

/// Checks NR1..NR4 (throwing clause_violation on the first failure), then
/// runs the engine on R = order.
inline OrderReport nr_check_and_solve(const FiniteOrderInstance& inst, const SolveOptions& opts = {}) {
    OrderReport r;
    r.clauses = nr_clauses(inst, opts.start);
    detail::throw_first_failure(r.clauses);
    SolveOptions o = opts;
    if (!o.start) o.start = find_start(inst.order, inst.map);
    r.fpt = solve(inst.space, inst.map, inst.order, o);
    r.reduction_consistent = r.fpt.existence_hypotheses() && r.fpt.fixed_point.has_value();
    if (!r.reduction_consistent) r.notes.emplace_back("theorem violation: NR clauses hold but (i)-(v) or convergence fail");
    return r;
}

inline std::optional<Index> least_element(const Relation& order) {
    for (Index x = 0; x < order.point_count(); ++x) {
        bool below_all = true;
        for (Index y = 0; y < order.point_count() && below_all; ++y) below_all = order.contains(x, y);
        if (below_all) return x;
    }
    return std::nullopt;
}

/// RZ0..RZ4 on a finite ordered space with Y = X. psi admissibility (right
/// usc, psi(t) < t) is a precondition.
inline std::vector<Assumption> rz_clauses(const FiniteOrderInstance& inst) {
    detail::require_partial_order(inst);
    if (!inst.psi) throw precondition_error("RZ needs a comparison function psi");
    const PiecewiseFn& psi = *inst.psi;
    if (!psi.is_finite_valued()) throw precondition_error("psi must be finite-valued");
    if (!psi.is_right_usc()) throw precondition_error("psi must be right upper semicontinuous");
    if (auto t = compare_counterexample(psi, Cmp::less, PiecewiseFn::identity()))
        throw precondition_error("psi(t) < t fails at t=" + to_string(*t));

    const auto& s = inst.space;
    const auto& T = inst.map;
    const auto& order = inst.order;
    std::vector<Assumption> out;
    out.push_back({"RZ0", true, "closed: trivially (finite)"});
    out.push_back({"RZ1", true, "closed: trivially (finite)"});
    auto mono = detail::monotonicity_failure(order, T);
    out.push_back({"RZ2", !mono,
                   mono ? detail::pair_str(s, mono->first, mono->second) + " comparable but images are not"
                        : "T is monotone"});

    std::optional<IndexPair> bad;
    for (auto [u, v] : order.pairs()) {
        if (Extended(s.dist(T(u), T(v))) > psi(s.dist(u, v))) {
            bad = IndexPair{u, v};
            break;
        }
    }
    out.push_back({"RZ3", !bad,
                   bad ? "d(T" + s.label(bad->first) + ",T" + s.label(bad->second) + ")=" +
                             to_string(s.dist(T(bad->first), T(bad->second))) + " > psi(d" +
                             detail::pair_str(s, bad->first, bad->second) + ")=" +
                             to_string(psi(s.dist(bad->first, bad->second)))
                       : "d(Tu,Tv) <= psi(d(u,v)) on comparable pairs"});

    std::optional<Index> least = least_element(order);
    out.push_back({"RZ4", least.has_value(), least ? "least element " + s.label(*least) : "no least element"});
    return out;
}

/// Checks RZ0..RZ4 (throwing clause_violation on failure), runs the engine
/// from the least element and certifies uniqueness. Also confirms that the
/// induced instance satisfies (6) with (id, psi) and the MK condition.
inline OrderReport rz_check_and_solve(const FiniteOrderInstance& inst, const SolveOptions& opts = {}) {
    OrderReport r;
    r.clauses = rz_clauses(inst);
    detail::throw_first_failure(r.clauses);
    SolveOptions o = opts;
    o.start = least_element(inst.order);
    if (opts.start && opts.start != o.start) r.notes.emplace_back("requested start replaced by the least element");
    r.fpt = solve(inst.space, inst.map, inst.order, o);

    FGInstance fg = instance_to_fg(inst.space, inst.map, inst.order);
    r.condition6_id_psi = verify_condition(fg, 6, {PiecewiseFn::identity(), *inst.psi}).holds;
    r.mk_on_order = mk_holds(fg, Variant::mk).holds;
    r.reduction_consistent = r.fpt.uniqueness_hypotheses() && r.fpt.fixed_point.has_value() &&
                             r.fpt.uniqueness.status == Uniqueness::unique && *r.condition6_id_psi && *r.mk_on_order;
    if (!r.reduction_consistent) r.notes.emplace_back("theorem violation: RZ clauses hold but the reduction fails");
    return r;
}

// ---------------------------------------------------------------------------
// Numeric mode

enum class VectorNorm { max, euclidean };

inline const char* to_string(VectorNorm n) { return n == VectorNorm::max ? "max" : "euclidean"; }

struct NumericOrderInstance {
    std::string family = "affine";  // "affine" or "scalar"
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::optional<double> theta;  // declared bound; defaults to the operator norm
    VectorNorm norm = VectorNorm::max;
    Eigen::VectorXd start;

    static NumericOrderInstance scalar(double theta, double c, double start) {
        NumericOrderInstance inst;
        inst.family = "scalar";
        inst.A = Eigen::MatrixXd::Constant(1, 1, theta);
        inst.b = Eigen::VectorXd::Constant(1, c);
        inst.start = Eigen::VectorXd::Constant(1, start);
        return inst;
    }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(b.size()); }
};

struct NumericOptions {
    double tol = 1e-9;
    std::size_t max_steps = 10000;
    double order_tol = kDefaultTolerance;
};

struct NumericTrajectory {
    std::vector<Eigen::VectorXd> states;
    std::vector<double> step_dists;
    bool converged = false;
    std::size_t steps = 0;  // n with d(x_n, x_{n+1}) < tol
    Eigen::VectorXd fixed_point;
    double residual = 0;  // |T z - z|
};

struct NumericReport {
    std::vector<Assumption> clauses;      // NR1..NR4
    std::vector<Assumption> assumptions;  // (i)..(v)
    double operator_norm = 0;
    double theta = 0;
    NumericTrajectory trajectory;
    std::vector<std::string> notes;
};

inline double vector_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y, VectorNorm norm) {
    if (x.size() == 0) return 0;
    return norm == VectorNorm::max ? (x - y).lpNorm<Eigen::Infinity>() : (x - y).norm();
}

/// Induced operator norm: maximum absolute row sum for the max norm, largest
/// singular value for the Euclidean norm.
inline double operator_norm(const Eigen::MatrixXd& A, VectorNorm norm) {
    if (A.size() == 0) return 0;
    if (norm == VectorNorm::max) return A.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    return svd.singularValues()(0);
}

/// Largest ratio step_dists[n+1] / step_dists[n] over steps with
/// step_dists[n] >= floor.
inline double max_contraction_ratio(const std::vector<double>& step_dists, double floor) {
    double worst = 0;
    for (std::size_t n = 0; n + 1 < step_dists.size(); ++n)
        if (step_dists[n] >= floor && step_dists[n] > 0) worst = std::max(worst, step_dists[n + 1] / step_dists[n]);
    return worst;
}

inline NumericTrajectory iterate_affine(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& start,
                                        VectorNorm norm, const NumericOptions& opts) {
    NumericTrajectory tr;
    Eigen::VectorXd x = start;
    tr.states.push_back(x);
    for (std::size_t n = 0; n < opts.max_steps; ++n) {
        Eigen::VectorXd y = A * x + b;
        double d = vector_distance(x, y, norm);
        tr.states.push_back(y);
        tr.step_dists.push_back(d);
        if (d < opts.tol) {
            tr.converged = true;
            tr.steps = n;
            tr.fixed_point = y;
            tr.residual = vector_distance(A * y + b, y, norm);
            return tr;
        }
        x = std::move(y);
    }
    tr.steps = opts.max_steps;
    tr.fixed_point = x;
    tr.residual = vector_distance(A * x + b, x, norm);
    return tr;
}

/// NR in numeric mode. NR2 is certified by A >= 0 entrywise (sufficient, not
/// necessary); NR3 by the induced operator norm. Throws clause_violation on
/// the first failing clause.
inline NumericReport nr_solve_numeric(const NumericOrderInstance& inst, const NumericOptions& opts = {}) {
    const auto n = inst.b.size();
    if (inst.A.rows() != n || inst.A.cols() != n || inst.start.size() != n)
        throw precondition_error("matrix, offset and start dimensions differ");
    if (!inst.A.allFinite() || !inst.b.allFinite() || !inst.start.allFinite())
        throw precondition_error("non-finite coefficient");
    NumericReport r;
    r.operator_norm = operator_norm(inst.A, inst.norm);
    r.theta = inst.theta.value_or(r.operator_norm);

    Eigen::VectorXd tx = inst.A * inst.start + inst.b;
    bool nr1 = ((tx - inst.start).array() >= -opts.order_tol).all();
    r.clauses.push_back({"NR1", nr1, nr1 ? "start <= T(start) componentwise" : "start is not below T(start)"});

    Eigen::Index bi = 0, bj = 0;
    double min_entry = n ? inst.A.minCoeff(&bi, &bj) : 0.0;
    bool nr2 = min_entry >= 0;
    r.clauses.push_back({"NR2", nr2,
                         nr2 ? "A >= 0 entrywise"
                             : "A(" + std::to_string(bi) + "," + std::to_string(bj) + ")=" + std::to_string(min_entry) +
                                   " < 0 (entrywise nonnegativity is the certified criterion)"});

    bool theta_ok = r.theta >= 0 && r.theta < 1;
    bool nr3 = theta_ok && r.operator_norm <= r.theta + opts.order_tol;
    r.clauses.push_back({"NR3", nr3,
                         "theta=" + std::to_string(r.theta) + ", " + to_string(inst.norm) +
                             "-operator norm=" + std::to_string(r.operator_norm) +
                             (nr3 ? "" : theta_ok ? " exceeds theta" : " (theta not in [0,1))")});
    r.clauses.push_back({"NR4", true, "holds: componentwise order is closed"});
    detail::throw_first_failure(r.clauses);

    r.assumptions.push_back({"i", true, "componentwise order is transitive"});
    r.assumptions.push_back({"ii", true, "from NR1"});
    r.assumptions.push_back({"iii", true, "from NR2"});
    r.assumptions.push_back({"iv", true, "from NR3: d(Tu,Tv) <= theta d(u,v) with theta < 1"});
    r.assumptions.push_back({"v", true, "assumed, not verified: affine map declared continuous (NR3/NR4 argument)"});

    r.trajectory = iterate_affine(inst.A, inst.b, inst.start, inst.norm, opts);
    if (!r.trajectory.converged) r.notes.emplace_back("max_steps exhausted before d(x_n, x_n+1) < tol");
    return r;
}

}  // namespace mkfp

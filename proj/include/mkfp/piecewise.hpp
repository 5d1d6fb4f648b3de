#pragma once

// Finitely represented functions R+ -> R+ u {inf}.
//
// A PiecewiseFn is a sorted list of positive breakpoints b1 < ... < bm, one
// segment per half-open interval [0,b1), [b1,b2), ..., [bm,inf), and optional
// exact values at isolated points. Each segment is an affine map c + s*t or
// the constant +inf. Overrides take precedence over segments, which lets the
// representation carry jumps that are closed on either side.
//
// All regularity predicates below are decided exactly by scanning the finitely
// many critical points (breakpoints and override points) plus the open
// intervals between them, on which every function is affine.

#include "mkfp/rational.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mkfp {

class Segment {
public:
    Segment() = default;
    Segment(Rational intercept, Rational slope) : c_(std::move(intercept)), s_(std::move(slope)) {}

    static Segment infinite() {
        Segment seg;
        seg.infinite_ = true;
        return seg;
    }
    static Segment constant(Rational c) { return {std::move(c), Rational(0)}; }

    [[nodiscard]] bool is_infinite() const { return infinite_; }
    [[nodiscard]] const Rational& intercept() const { return c_; }
    [[nodiscard]] const Rational& slope() const { return s_; }

    [[nodiscard]] Extended operator()(const Rational& t) const {
        if (infinite_) return Extended::infinity();
        return Extended(c_ + s_ * t);
    }

    friend bool operator==(const Segment& a, const Segment& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.c_ == b.c_ && a.s_ == b.s_;
    }

private:
    Rational c_{0};
    Rational s_{0};
    bool infinite_ = false;
};

/// One maximal piece of a function: [lo|(lo , hi]|hi) with a single formula.
/// `hi == nullopt` means the piece is unbounded above.
struct Piece {
    Rational lo;
    bool lo_closed = true;
    std::optional<Rational> hi;
    bool hi_closed = false;
    Segment formula;

    [[nodiscard]] bool contains(const Rational& t) const {
        if (t < lo || (t == lo && !lo_closed)) return false;
        if (!hi) return true;
        return t < *hi || (t == *hi && hi_closed);
    }
    /// Covers the whole open interval (a, b); b == nullopt is +inf.
    [[nodiscard]] bool covers(const Rational& a, const std::optional<Rational>& b) const {
        if (a < lo) return false;
        if (!hi) return true;
        if (!b) return false;
        return *b <= *hi;
    }
};

class PiecewiseFn {
public:
    PiecewiseFn() : segments_{Segment::constant(0)} {}

    PiecewiseFn(std::vector<Rational> breakpoints, std::vector<Segment> segments,
                std::map<Rational, Extended> overrides = {})
        : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)), overrides_(std::move(overrides)) {
        if (segments_.size() != breakpoints_.size() + 1)
            throw precondition_error("piecewise function needs one more segment than breakpoints");
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            if (breakpoints_[i] <= 0) throw precondition_error("breakpoints must be positive");
            if (i && breakpoints_[i] <= breakpoints_[i - 1])
                throw precondition_error("breakpoints must be strictly increasing");
        }
        for (const auto& [t, v] : overrides_) {
            if (t < 0) throw precondition_error("override point must be nonnegative");
            if (v.is_finite() && v.value() < 0) throw precondition_error("function values must be nonnegative");
        }
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            const Segment& seg = segments_[i];
            if (seg.is_infinite()) continue;
            Rational lo = i == 0 ? Rational(0) : breakpoints_[i - 1];
            bool negative = seg(lo).value() < 0;
            if (i + 1 < segments_.size())
                negative = negative || seg(breakpoints_[i]).value() < 0;
            else
                negative = negative || seg.slope() < 0;
            if (negative) throw precondition_error("function values must be nonnegative");
        }
    }

    static PiecewiseFn constant(Extended v) {
        if (v.is_infinite()) return PiecewiseFn({}, {Segment::infinite()});
        return PiecewiseFn({}, {Segment::constant(v.value())});
    }
    static PiecewiseFn affine(Rational c, Rational s) { return PiecewiseFn({}, {Segment(std::move(c), std::move(s))}); }
    static PiecewiseFn identity() { return affine(0, 1); }

    [[nodiscard]] const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }
    [[nodiscard]] const std::map<Rational, Extended>& overrides() const { return overrides_; }

    /// Index of the segment whose half-open interval contains t (t >= 0).
    [[nodiscard]] std::size_t segment_index(const Rational& t) const {
        return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin());
    }
    [[nodiscard]] const Segment& segment_at(const Rational& t) const { return segments_[segment_index(t)]; }

    [[nodiscard]] Extended operator()(const Rational& t) const {
        if (t < 0) throw precondition_error("piecewise function evaluated at negative argument");
        if (auto it = overrides_.find(t); it != overrides_.end()) return it->second;
        return segment_at(t)(t);
    }
    [[nodiscard]] Extended operator()(const Extended& t) const {
        if (t.is_infinite()) throw precondition_error("piecewise function evaluated at infinity");
        return (*this)(t.value());
    }

    /// lim_{s -> t+} F(s).
    [[nodiscard]] Extended right_limit(const Rational& t) const { return segment_at(t)(t); }

    /// lim_{s -> t-} F(s), t > 0.
    [[nodiscard]] Extended left_limit(const Rational& t) const {
        auto idx = static_cast<std::size_t>(std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin());
        return segments_[idx](t);
    }

    /// Breakpoints and override points, ascending, deduplicated, including 0.
    [[nodiscard]] std::vector<Rational> critical_points() const {
        std::set<Rational> s(breakpoints_.begin(), breakpoints_.end());
        for (const auto& [t, v] : overrides_) s.insert(t);
        s.insert(Rational(0));
        return {s.begin(), s.end()};
    }

    [[nodiscard]] bool is_nondecreasing(bool include_zero = true) const {
        for (const auto& seg : segments_)
            if (!seg.is_infinite() && seg.slope() < 0) return false;
        for (const auto& p : critical_points()) {
            if (p == 0 && !include_zero) continue;
            Extended v = (*this)(p);
            if (p > 0 && left_limit(p) > v) return false;
            if (v > right_limit(p)) return false;
        }
        return true;
    }

    /// F(t) == F(t+) at every critical point in the domain.
    [[nodiscard]] bool is_right_continuous(bool include_zero = false) const {
        for (const auto& p : critical_points()) {
            if (p == 0 && !include_zero) continue;
            if ((*this)(p) != right_limit(p)) return false;
        }
        return true;
    }

    /// F(t) <= liminf_{s -> t+} F(s) for every t > 0.
    [[nodiscard]] bool is_right_lsc() const {
        for (const auto& p : critical_points()) {
            if (p == 0) continue;
            if ((*this)(p) > right_limit(p)) return false;
        }
        return true;
    }

    /// F(t) >= limsup_{s -> t+} F(s) for every t > 0.
    [[nodiscard]] bool is_right_usc() const {
        for (const auto& p : critical_points()) {
            if (p == 0) continue;
            if ((*this)(p) < right_limit(p)) return false;
        }
        return true;
    }

    [[nodiscard]] bool is_finite_valued() const {
        for (const auto& seg : segments_)
            if (seg.is_infinite()) return false;
        for (const auto& [t, v] : overrides_)
            if (v.is_infinite()) return false;
        return true;
    }

    /// For every s > 0 there is d > 0 with F(t) <= s on [s, s + d].
    [[nodiscard]] bool is_type_L() const { return !type_L_counterexample().has_value(); }

    /// Some s > 0 at which the type (L) clause fails, if any.
    [[nodiscard]] std::optional<Rational> type_L_counterexample() const;

    /// Same function with all point overrides dropped. Because segments are
    /// closed on the left, the result is the right-limit regularization
    /// t -> F(t+).
    [[nodiscard]] PiecewiseFn without_overrides() const { return PiecewiseFn(breakpoints_, segments_); }

    /// Merges adjacent equal segments and drops overrides that agree with the
    /// underlying segment.
    [[nodiscard]] PiecewiseFn simplified() const {
        std::vector<Rational> bps;
        std::vector<Segment> segs{segments_.front()};
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            if (segments_[i + 1] == segs.back()) continue;
            bps.push_back(breakpoints_[i]);
            segs.push_back(segments_[i + 1]);
        }
        PiecewiseFn base(bps, segs);
        std::map<Rational, Extended> ov;
        for (const auto& [t, v] : overrides_)
            if (base.segment_at(t)(t) != v) ov.emplace(t, v);
        return {std::move(bps), std::move(segs), std::move(ov)};
    }

    /// left on [0, t0), right on [t0, inf).
    static PiecewiseFn splice(const PiecewiseFn& left, const Rational& t0, const PiecewiseFn& right) {
        if (t0 <= 0) return right.simplified();
        std::vector<Rational> bps;
        std::vector<Segment> segs;
        std::size_t i = 0;
        for (; i < left.breakpoints_.size() && left.breakpoints_[i] < t0; ++i) {
            segs.push_back(left.segments_[i]);
            bps.push_back(left.breakpoints_[i]);
        }
        segs.push_back(left.segments_[i]);
        bps.push_back(t0);
        std::size_t j = right.segment_index(t0);
        segs.push_back(right.segments_[j]);
        for (; j < right.breakpoints_.size(); ++j) {
            bps.push_back(right.breakpoints_[j]);
            segs.push_back(right.segments_[j + 1]);
        }
        std::map<Rational, Extended> ov;
        for (const auto& [t, v] : left.overrides_)
            if (t < t0) ov.emplace(t, v);
        for (const auto& [t, v] : right.overrides_)
            if (t >= t0) ov.emplace(t, v);
        return PiecewiseFn(std::move(bps), std::move(segs), std::move(ov)).simplified();
    }

    /// Assembles a function from pieces that together cover [0, inf) or
    /// (0, inf). `value_at_zero` is used when no piece contains 0.
    static PiecewiseFn from_pieces(const std::vector<Piece>& pieces, const Extended& value_at_zero = Extended(0)) {
        std::set<Rational> ends{Rational(0)};
        for (const auto& p : pieces) {
            ends.insert(p.lo);
            if (p.hi) ends.insert(*p.hi);
        }
        std::vector<Rational> pts(ends.begin(), ends.end());
        auto covering = [&](const Rational& a, const std::optional<Rational>& b) -> const Piece& {
            for (const auto& p : pieces)
                if (p.covers(a, b)) return p;
            throw std::logic_error("pieces do not cover an interval starting at " + to_string(a));
        };
        std::vector<Rational> bps(pts.begin() + 1, pts.end());
        std::vector<Segment> segs;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::optional<Rational> b = i + 1 < pts.size() ? std::optional<Rational>(pts[i + 1]) : std::nullopt;
            segs.push_back(covering(pts[i], b).formula);
        }
        PiecewiseFn base(bps, segs);
        std::map<Rational, Extended> ov;
        for (const auto& t : pts) {
            std::optional<Extended> v;
            for (const auto& p : pieces)
                if (p.contains(t)) {
                    v = p.formula(t);
                    break;
                }
            if (!v) {
                if (t != 0) throw std::logic_error("pieces do not contain point " + to_string(t));
                v = value_at_zero;
            }
            if (base.segment_at(t)(t) != *v) ov.emplace(t, *v);
        }
        return PiecewiseFn(std::move(bps), std::move(segs), std::move(ov)).simplified();
    }

    /// Builds F from an exact evaluator, given points such that F is affine
    /// (or identically inf) on every open interval between consecutive points
    /// and beyond the last one. Two interior samples determine each piece.
    static PiecewiseFn from_sampler(const std::vector<Rational>& points, const std::function<Extended(const Rational&)>& eval) {
        std::set<Rational> s(points.begin(), points.end());
        s.insert(Rational(0));
        std::vector<Rational> pts(s.begin(), s.end());
        std::vector<Piece> pieces;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Rational& a = pts[i];
            std::optional<Rational> b = i + 1 < pts.size() ? std::optional<Rational>(pts[i + 1]) : std::nullopt;
            Rational t1 = b ? a + (*b - a) / 3 : a + 1;
            Rational t2 = b ? a + 2 * (*b - a) / 3 : a + 2;
            Extended v1 = eval(t1);
            Extended v2 = eval(t2);
            Segment seg;
            if (v1.is_infinite() || v2.is_infinite()) {
                if (v1.is_finite() || v2.is_finite()) throw std::logic_error("sampled function is not affine on a piece");
                seg = Segment::infinite();
            } else {
                Rational slope = (v2.value() - v1.value()) / (t2 - t1);
                seg = Segment(v1.value() - slope * t1, slope);
            }
            pieces.push_back({a, false, b, false, seg});
            Extended at = eval(a);
            if (at.is_infinite())
                pieces.push_back({a, true, a, true, Segment::infinite()});
            else
                pieces.push_back({a, true, a, true, Segment::constant(at.value())});
        }
        return from_pieces(pieces);
    }

private:
    std::vector<Rational> breakpoints_;
    std::vector<Segment> segments_;
    std::map<Rational, Extended> overrides_;
};

/// Elementary decomposition of (0, inf) for a function: critical points and the
/// open intervals between them, in increasing order.
struct ElementaryPiece {
    bool is_point = false;
    Rational lo;                 // the point itself, or the left end of the interval
    std::optional<Rational> hi;  // right end (nullopt = inf); unused for points
    Segment formula;             // for points: constant value (or inf)
};

inline std::vector<ElementaryPiece> elementary_pieces(const PiecewiseFn& fn) {
    std::vector<ElementaryPiece> out;
    std::vector<Rational> pts = fn.critical_points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Rational& p = pts[i];
        if (p > 0) {
            Extended v = fn(p);
            out.push_back({true, p, p, v.is_infinite() ? Segment::infinite() : Segment::constant(v.value())});
        }
        std::optional<Rational> b = i + 1 < pts.size() ? std::optional<Rational>(pts[i + 1]) : std::nullopt;
        out.push_back({false, p, b, fn.segment_at(p)});
    }
    return out;
}

enum class Cmp { less, less_equal };

namespace detail {

/// D(t) = d0 + k (t - a) on the open interval (a, b). Returns a point of the
/// interval where D <= 0 (strict) or D < 0 (non-strict), if one exists.
inline std::optional<Rational> linear_failure(const Rational& a, const std::optional<Rational>& b, const Rational& d0,
                                              const Rational& k, bool strict) {
    auto mid = [&](const Rational& lo, const std::optional<Rational>& hi) {
        return hi ? (lo + *hi) / 2 : lo + 1;
    };
    if (k == 0) {
        if (strict ? d0 <= 0 : d0 < 0) return mid(a, b);
        return std::nullopt;
    }
    Rational z = a - d0 / k;  // zero of D
    if (k > 0) {
        if (d0 >= 0) return std::nullopt;
        std::optional<Rational> hi = b;
        if (!hi || z < *hi) hi = z;
        return mid(a, hi);
    }
    Rational lo = std::max(z, a);
    if (b && lo >= *b) return std::nullopt;
    return mid(lo, b);
}

}  // namespace detail

/// Some t > 0 at which `lhs(t) cmp rhs(t)` fails, or nullopt if the relation
/// holds on all of (0, inf).
inline std::optional<Rational> compare_counterexample(const PiecewiseFn& lhs, Cmp cmp, const PiecewiseFn& rhs) {
    const bool strict = cmp == Cmp::less;
    auto ok = [&](const Extended& x, const Extended& y) { return strict ? x < y : x <= y; };
    std::set<Rational> s;
    for (const auto& p : lhs.critical_points()) s.insert(p);
    for (const auto& p : rhs.critical_points()) s.insert(p);
    std::vector<Rational> pts(s.begin(), s.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Rational& a = pts[i];
        if (a > 0 && !ok(lhs(a), rhs(a))) return a;
        std::optional<Rational> b = i + 1 < pts.size() ? std::optional<Rational>(pts[i + 1]) : std::nullopt;
        const Segment& L = lhs.segment_at(a);
        const Segment& R = rhs.segment_at(a);
        Rational probe = b ? (a + *b) / 2 : a + 1;
        if (L.is_infinite()) {
            if (strict || !R.is_infinite()) return probe;
            continue;
        }
        if (R.is_infinite()) continue;
        Rational d0 = R(a).value() - L(a).value();
        Rational k = R.slope() - L.slope();
        if (auto t = detail::linear_failure(a, b, d0, k, strict)) return t;
    }
    return std::nullopt;
}

inline bool holds_on_positive(const PiecewiseFn& lhs, Cmp cmp, const PiecewiseFn& rhs) {
    return !compare_counterexample(lhs, cmp, rhs).has_value();
}

inline std::optional<Rational> PiecewiseFn::type_L_counterexample() const {
    // Values first: F(s) <= s at every s > 0 (overrides included).
    if (auto t = compare_counterexample(*this, Cmp::less_equal, identity())) return t;
    // The right neighborhood of s lies in the segment containing s, so the
    // segment itself must stay <= s there; compare_counterexample on the
    // override-free base covers points hidden by overrides.
    PiecewiseFn base = without_overrides();
    if (auto t = compare_counterexample(base, Cmp::less_equal, identity())) return t;
    // Where the segment touches the diagonal it must not increase.
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        Rational lo = i == 0 ? Rational(0) : breakpoints_[i - 1];
        std::optional<Rational> hi = i < breakpoints_.size() ? std::optional<Rational>(breakpoints_[i]) : std::nullopt;
        if (seg.is_infinite()) return hi ? (lo + *hi) / 2 : lo + 1;
        Rational k = seg.slope() - 1;
        if (k == 0) {
            if (seg.intercept() == 0 && seg.slope() > 0) return hi ? (lo + *hi) / 2 : lo + 1;
            continue;
        }
        Rational z = -seg.intercept() / k;
        bool inside = z > 0 && z >= lo && (!hi || z < *hi);
        if (inside && seg.slope() > 0) return z;
    }
    return std::nullopt;
}

}  // namespace mkfp

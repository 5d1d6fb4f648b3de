#pragma once

// Finite metric spaces, self-maps, relations and abstract (K, f, g) instances.
//
// Points carry string labels; every computation works on indices fixed by
// input order. Distances are exact rationals by default. A double-valued
// space is available for numeric experiments and compares with an explicit
// tolerance.

#include "mkfp/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mkfp {

using Index = std::size_t;
using IndexPair = std::pair<Index, Index>;

inline constexpr double kDefaultTolerance = 1e-12;

enum class ViolationKind { nonzero_diagonal, zero_off_diagonal, negative, symmetry, triangle };

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::nonzero_diagonal: return "nonzero diagonal";
        case ViolationKind::zero_off_diagonal: return "identity of indiscernibles";
        case ViolationKind::negative: return "negative distance";
        case ViolationKind::symmetry: return "symmetry";
        case ViolationKind::triangle: return "triangle inequality";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::vector<Index> where;

    [[nodiscard]] std::string message() const {
        std::string s = std::string(to_string(kind)) + " violated at (";
        for (std::size_t i = 0; i < where.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(where[i]);
        }
        return s + ")";
    }
};

struct ValidationReport {
    std::vector<Violation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

template <typename Scalar = Rational>
class FiniteMetricSpace {
public:
    using Matrix = std::vector<std::vector<Scalar>>;

    /// Structural checks only (unique labels, square matrix). Metric axioms are
    /// reported by validate_space().
    FiniteMetricSpace(std::vector<std::string> labels, Matrix dist, double tolerance = kDefaultTolerance)
        : labels_(std::move(labels)), dist_(std::move(dist)), tolerance_(tolerance) {
        if (labels_.empty()) throw precondition_error("metric space needs at least one point");
        if (dist_.size() != labels_.size()) throw precondition_error("distance matrix row count != point count");
        for (const auto& row : dist_) {
            if (row.size() != labels_.size()) throw precondition_error("distance matrix is not square");
        }
        for (Index i = 0; i < labels_.size(); ++i) {
            if (!index_.emplace(labels_[i], i).second)
                throw precondition_error("duplicate point label \"" + labels_[i] + "\"");
        }
    }

    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] const Scalar& dist(Index i, Index j) const { return dist_[i][j]; }
    [[nodiscard]] const Matrix& matrix() const { return dist_; }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    [[nodiscard]] const std::string& label(Index i) const { return labels_[i]; }
    [[nodiscard]] double tolerance() const { return tolerance_; }

    [[nodiscard]] std::optional<Index> find(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<std::string> labels_;
    Matrix dist_;
    double tolerance_;
    std::map<std::string, Index> index_;
};

/// Points on the real line; d(x, y) = |x - y|.
template <typename Scalar = Rational>
FiniteMetricSpace<Scalar> make_line_space(std::vector<std::string> labels, const std::vector<Scalar>& positions) {
    if (labels.size() != positions.size()) throw precondition_error("labels and positions differ in length");
    const std::size_t n = positions.size();
    typename FiniteMetricSpace<Scalar>::Matrix m(n, std::vector<Scalar>(n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m[i][j] = positions[i] < positions[j] ? positions[j] - positions[i] : positions[i] - positions[j];
    return FiniteMetricSpace<Scalar>(std::move(labels), std::move(m));
}

enum class Norm { max, l1 };

/// Points in R^k with the max or l1 norm (both stay exact over rationals).
template <typename Scalar = Rational>
FiniteMetricSpace<Scalar> make_coord_space(std::vector<std::string> labels,
                                           const std::vector<std::vector<Scalar>>& coords, Norm norm) {
    if (labels.size() != coords.size()) throw precondition_error("labels and coords differ in length");
    const std::size_t n = coords.size();
    typename FiniteMetricSpace<Scalar>::Matrix m(n, std::vector<Scalar>(n));
    for (Index i = 0; i < n; ++i) {
        if (coords[i].size() != coords[0].size()) throw precondition_error("coordinate dimension mismatch");
        for (Index j = 0; j < n; ++j) {
            Scalar acc = 0;
            for (std::size_t c = 0; c < coords[i].size(); ++c) {
                Scalar diff = coords[i][c] < coords[j][c] ? coords[j][c] - coords[i][c] : coords[i][c] - coords[j][c];
                if (norm == Norm::max)
                    acc = std::max(acc, diff);
                else
                    acc += diff;
            }
            m[i][j] = acc;
        }
    }
    return FiniteMetricSpace<Scalar>(std::move(labels), std::move(m));
}

/// Lists every violated metric axiom with witnessing indices.
template <typename Scalar>
ValidationReport validate_space(const FiniteMetricSpace<Scalar>& space) {
    using T = NumberTraits<Scalar>;
    const double tol = space.tolerance();
    const std::size_t n = space.size();
    ValidationReport report;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const Scalar& dij = space.dist(i, j);
            if (T::lt(dij, Scalar(0), tol)) report.violations.push_back({ViolationKind::negative, {i, j}});
            if (i == j) {
                if (!T::is_zero(dij, tol)) report.violations.push_back({ViolationKind::nonzero_diagonal, {i, i}});
                continue;
            }
            if (i < j && T::is_zero(dij, tol)) report.violations.push_back({ViolationKind::zero_off_diagonal, {i, j}});
            if (i < j && !T::eq(dij, space.dist(j, i), tol)) report.violations.push_back({ViolationKind::symmetry, {i, j}});
        }
    }
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k)
                if (!T::le(space.dist(i, k), space.dist(i, j) + space.dist(j, k), tol))
                    report.violations.push_back({ViolationKind::triangle, {i, j, k}});
    return report;
}

class SelfMap {
public:
    SelfMap(std::vector<Index> image, std::size_t point_count) : image_(std::move(image)) {
        if (image_.size() != point_count) throw precondition_error("self-map needs exactly one image per point");
        for (Index v : image_) {
            if (v >= point_count) throw precondition_error("self-map image index out of range");
        }
    }

    static SelfMap identity(std::size_t n) {
        std::vector<Index> img(n);
        for (Index i = 0; i < n; ++i) img[i] = i;
        return SelfMap(std::move(img), n);
    }

    [[nodiscard]] Index operator()(Index i) const { return image_[i]; }
    [[nodiscard]] std::size_t size() const { return image_.size(); }
    [[nodiscard]] const std::vector<Index>& image() const { return image_; }

private:
    std::vector<Index> image_;
};

/// Extensional relation on {0, ..., n-1}: a deduplicated pair set plus an
/// adjacency matrix for constant-time membership.
class Relation {
public:
    Relation(std::size_t n, const std::vector<IndexPair>& pairs) : n_(n), member_(n * n, 0) {
        for (auto [i, j] : pairs) {
            if (i >= n || j >= n) throw precondition_error("relation index out of range");
            member_[i * n + j] = 1;
        }
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (member_[i * n + j]) pairs_.emplace_back(i, j);
    }

    static Relation total(std::size_t n) {
        std::vector<IndexPair> p;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) p.emplace_back(i, j);
        return Relation(n, p);
    }

    [[nodiscard]] bool contains(Index i, Index j) const { return member_[i * n_ + j] != 0; }
    [[nodiscard]] const std::vector<IndexPair>& pairs() const { return pairs_; }
    [[nodiscard]] std::size_t point_count() const { return n_; }
    [[nodiscard]] bool empty() const { return pairs_.empty(); }
    [[nodiscard]] std::size_t size() const { return pairs_.size(); }

private:
    std::size_t n_;
    std::vector<char> member_;
    std::vector<IndexPair> pairs_;
};

/// Outcome of an extensional property scan. `witness` holds the violating
/// indices when the property fails.
struct Check {
    bool holds = true;
    std::vector<Index> witness;

    explicit operator bool() const { return holds; }
};

inline Check check_transitive(const Relation& rel) {
    const std::size_t n = rel.point_count();
    for (auto [i, j] : rel.pairs())
        for (Index k = 0; k < n; ++k)
            if (rel.contains(j, k) && !rel.contains(i, k)) return {false, {i, j, k}};
    return {};
}

inline Check check_invariance(const Relation& rel, const SelfMap& map) {
    for (auto [i, j] : rel.pairs())
        if (!rel.contains(map(i), map(j))) return {false, {i, j}};
    return {};
}

/// First index i (by input order) with (i, T i) in the relation.
inline std::optional<Index> find_start(const Relation& rel, const SelfMap& map) {
    for (Index i = 0; i < map.size(); ++i)
        if (rel.contains(i, map(i))) return i;
    return std::nullopt;
}

inline Check check_reflexive(const Relation& rel) {
    for (Index i = 0; i < rel.point_count(); ++i)
        if (!rel.contains(i, i)) return {false, {i}};
    return {};
}

inline Check check_antisymmetric(const Relation& rel) {
    for (auto [i, j] : rel.pairs())
        if (i != j && rel.contains(j, i)) return {false, {i, j}};
    return {};
}

inline Check check_partial_order(const Relation& rel) {
    if (auto c = check_reflexive(rel); !c) return c;
    if (auto c = check_antisymmetric(rel); !c) return c;
    return check_transitive(rel);
}

/// Abstract carrier K with nonnegative f, g.
class FGInstance {
public:
    FGInstance(std::vector<std::string> carrier, std::vector<Rational> f, std::vector<Rational> g)
        : carrier_(std::move(carrier)), f_(std::move(f)), g_(std::move(g)) {
        if (carrier_.empty()) throw precondition_error("carrier must be nonempty");
        if (f_.size() != carrier_.size() || g_.size() != carrier_.size())
            throw precondition_error("f and g must be total on the carrier");
        for (std::size_t k = 0; k < carrier_.size(); ++k) {
            if (f_[k] < 0 || g_[k] < 0) throw precondition_error("f and g must be nonnegative");
        }
    }

    [[nodiscard]] std::size_t size() const { return carrier_.size(); }
    [[nodiscard]] const Rational& f(std::size_t k) const { return f_[k]; }
    [[nodiscard]] const Rational& g(std::size_t k) const { return g_[k]; }
    [[nodiscard]] const std::vector<Rational>& f_values() const { return f_; }
    [[nodiscard]] const std::vector<Rational>& g_values() const { return g_; }
    [[nodiscard]] const std::vector<std::string>& carrier() const { return carrier_; }

    /// g^{-1}(0) is contained in f^{-1}(0).
    [[nodiscard]] bool zero_set_hypothesis() const {
        for (std::size_t k = 0; k < size(); ++k)
            if (g_[k] == 0 && f_[k] != 0) return false;
        return true;
    }

    /// Distinct positive values attained by f or g, ascending.
    [[nodiscard]] std::vector<Rational> positive_values() const {
        std::set<Rational> s;
        for (std::size_t k = 0; k < size(); ++k) {
            if (f_[k] > 0) s.insert(f_[k]);
            if (g_[k] > 0) s.insert(g_[k]);
        }
        return {s.begin(), s.end()};
    }

private:
    std::vector<std::string> carrier_;
    std::vector<Rational> f_;
    std::vector<Rational> g_;
};

/// K = R, f(x, y) = d(Tx, Ty), g(x, y) = d(x, y).
inline FGInstance instance_to_fg(const FiniteMetricSpace<Rational>& space, const SelfMap& map, const Relation& rel) {
    if (rel.empty()) throw precondition_error("empty relation");
    if (map.size() != space.size() || rel.point_count() != space.size())
        throw precondition_error("map, relation and space sizes differ");
    std::vector<std::string> carrier;
    std::vector<Rational> f;
    std::vector<Rational> g;
    carrier.reserve(rel.size());
    for (auto [i, j] : rel.pairs()) {
        carrier.push_back("(" + space.label(i) + "," + space.label(j) + ")");
        f.push_back(space.dist(map(i), map(j)));
        g.push_back(space.dist(i, j));
    }
    return FGInstance(std::move(carrier), std::move(f), std::move(g));
}

}  // namespace mkfp

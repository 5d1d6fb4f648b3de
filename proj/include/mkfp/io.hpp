#pragma once

// JSON instance files, witness files and report serialization.

#include "mkfp/fixed_point.hpp"
#include "mkfp/metric_core.hpp"
#include "mkfp/modulus.hpp"
#include "mkfp/ordered_models.hpp"
#include "mkfp/piecewise.hpp"
#include "mkfp/witnesses.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace mkfp::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Well-formed JSON that does not describe a valid instance. `where` is a
/// JSON pointer into the document.
class schema_error : public parse_error {
public:
    schema_error(std::string where, const std::string& what)
        : parse_error((where.empty() ? std::string("/") : where) + ": " + what), where_(std::move(where)) {}
    [[nodiscard]] const std::string& where() const { return where_; }

private:
    std::string where_;
};

namespace detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw schema_error(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw schema_error(path, "missing field \"" + key + "\"");
    return *it;
}

inline const json* optional_field(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline const json& array(const json& v, const std::string& path) {
    if (!v.is_array()) throw schema_error(path, "expected an array");
    return v;
}

inline std::string string_value(const json& v, const std::string& path) {
    if (!v.is_string()) throw schema_error(path, "expected a string");
    return v.get<std::string>();
}

}  // namespace detail

/// Exact number: an integer literal or a "p/q" / decimal string. JSON floats
/// are rejected so that no binary rounding enters finite-mode data.
inline Rational rational_from_json(const json& v, const std::string& path = "") {
    if (v.is_number_integer()) {
        if (v.is_number_unsigned()) return Rational(BigInt(v.get<std::uint64_t>()));
        return Rational(v.get<long long>());
    }
    if (v.is_number_float()) throw schema_error(path, "floats are not allowed here; write the number as a \"p/q\" string");
    if (!v.is_string()) throw schema_error(path, "expected a rational (\"p/q\" string or integer)");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const parse_error& e) {
        throw schema_error(path, e.what());
    }
}

inline Extended extended_from_json(const json& v, const std::string& path = "") {
    if (v.is_string() && v.get<std::string>() == "inf") return Extended::infinity();
    return rational_from_json(v, path);
}

inline json to_json(const Rational& r) {
    if (denominator(r) == 1 && abs(numerator(r)) < BigInt(1LL << 53)) return json(numerator(r).convert_to<long long>());
    return json(to_string(r));
}
inline json to_json(const Extended& e) { return e.is_infinite() ? json("inf") : to_json(e.value()); }

inline double double_from_json(const json& v, const std::string& path = "") {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return to_double(parse_rational(v.get<std::string>()));
        } catch (const parse_error& e) {
            throw schema_error(path, e.what());
        }
    }
    throw schema_error(path, "expected a number");
}

// --- piecewise functions ----------------------------------------------------

inline json to_json(const PiecewiseFn& fn) {
    json bps = json::array();
    for (const auto& b : fn.breakpoints()) bps.push_back(to_json(b));
    json segs = json::array();
    for (const auto& s : fn.segments()) {
        if (s.is_infinite())
            segs.push_back("inf");
        else
            segs.push_back({{"c", to_json(s.intercept())}, {"s", to_json(s.slope())}});
    }
    json ov = json::array();
    for (const auto& [t, v] : fn.overrides()) ov.push_back({{"t", to_json(t)}, {"v", to_json(v)}});
    return {{"breakpoints", bps}, {"segments", segs}, {"overrides", ov}};
}

inline PiecewiseFn piecewise_from_json(const json& j, const std::string& path = "") {
    using namespace detail;
    std::vector<Rational> bps;
    const json& jb = array(field(j, "breakpoints", path), child(path, "breakpoints"));
    for (std::size_t i = 0; i < jb.size(); ++i) bps.push_back(rational_from_json(jb[i], child(child(path, "breakpoints"), i)));
    std::vector<Segment> segs;
    const json& js = array(field(j, "segments", path), child(path, "segments"));
    for (std::size_t i = 0; i < js.size(); ++i) {
        std::string p = child(child(path, "segments"), i);
        if (js[i].is_string() && js[i].get<std::string>() == "inf") {
            segs.push_back(Segment::infinite());
        } else {
            segs.emplace_back(rational_from_json(field(js[i], "c", p), child(p, "c")),
                              rational_from_json(field(js[i], "s", p), child(p, "s")));
        }
    }
    std::map<Rational, Extended> ov;
    if (const json* jo = optional_field(j, "overrides")) {
        array(*jo, child(path, "overrides"));
        for (std::size_t i = 0; i < jo->size(); ++i) {
            std::string p = child(child(path, "overrides"), i);
            ov[rational_from_json(field((*jo)[i], "t", p), child(p, "t"))] =
                extended_from_json(field((*jo)[i], "v", p), child(p, "v"));
        }
    }
    try {
        return PiecewiseFn(std::move(bps), std::move(segs), std::move(ov));
    } catch (const precondition_error& e) {
        throw schema_error(path, e.what());
    }
}

/// "c + s*t" style rendering of one affine piece.
inline std::string formula_string(const Segment& seg, const std::string& var = "t") {
    if (seg.is_infinite()) return "inf";
    const Rational& c = seg.intercept();
    const Rational& s = seg.slope();
    if (s == 0) return to_string(c);
    std::string lin = s == 1 ? var : s == -1 ? "-" + var : to_string(s) + "*" + var;
    if (c == 0) return lin;
    if (s < 0) return to_string(c) + " - " + (s == -1 ? var : to_string(-s) + "*" + var);
    return to_string(c) + " + " + lin;
}

// --- instances ----------------------------------------------------------------

struct FiniteInstance {
    FiniteMetricSpace<Rational> space;
    SelfMap map;
    Relation rel;
};

struct OrderFiniteFile {
    std::string model;  // "nr" or "rz"
    FiniteOrderInstance inst;
};

struct OrderNumericFile {
    NumericOrderInstance inst;
    NumericOptions opts;
};

struct InstanceFile {
    std::string kind;
    std::variant<std::monostate, FiniteInstance, FGInstance, OrderFiniteFile, OrderNumericFile> payload;

    [[nodiscard]] const FiniteInstance* finite() const { return std::get_if<FiniteInstance>(&payload); }
    [[nodiscard]] const FGInstance* fg() const { return std::get_if<FGInstance>(&payload); }
    [[nodiscard]] const OrderFiniteFile* order_finite() const { return std::get_if<OrderFiniteFile>(&payload); }
    [[nodiscard]] const OrderNumericFile* order_numeric() const { return std::get_if<OrderNumericFile>(&payload); }
};

namespace detail {

struct FiniteBase {
    std::vector<std::string> labels;
    FiniteMetricSpace<Rational> space;
    // Positions (line) or coordinates, used by "order_leq".
    std::vector<std::vector<Rational>> coords;
};

inline Index label_index(const FiniteMetricSpace<Rational>& space, const json& v, const std::string& path) {
    std::string l = string_value(v, path);
    auto idx = space.find(l);
    if (!idx) throw schema_error(path, "unknown point label \"" + l + "\"");
    return *idx;
}

inline FiniteBase parse_base(const json& j) {
    FiniteBase b{{}, FiniteMetricSpace<Rational>({"_"}, {{Rational(0)}}), {}};
    const json& pts = array(field(j, "points", ""), "/points");
    if (pts.empty()) throw schema_error("/points", "at least one point is required");
    for (std::size_t i = 0; i < pts.size(); ++i) b.labels.push_back(string_value(pts[i], child("/points", i)));
    const std::size_t n = b.labels.size();
    const json& m = field(j, "metric", "");
    if (!m.is_object()) throw schema_error("/metric", "expected an object");
    try {
        if (const json* mat = optional_field(m, "matrix")) {
            array(*mat, "/metric/matrix");
            if (mat->size() != n) throw schema_error("/metric/matrix", "matrix must have one row per point");
            std::vector<std::vector<Rational>> d(n);
            for (std::size_t r = 0; r < n; ++r) {
                std::string p = child("/metric/matrix", r);
                const json& row = array((*mat)[r], p);
                if (row.size() != n) throw schema_error(p, "matrix must be square");
                for (std::size_t c = 0; c < n; ++c) d[r].push_back(rational_from_json(row[c], child(p, c)));
            }
            b.space = FiniteMetricSpace<Rational>(b.labels, std::move(d));
        } else if (const json* pos = optional_field(m, "line_positions")) {
            array(*pos, "/metric/line_positions");
            if (pos->size() != n) throw schema_error("/metric/line_positions", "one position per point required");
            std::vector<Rational> x;
            for (std::size_t i = 0; i < n; ++i) {
                x.push_back(rational_from_json((*pos)[i], child("/metric/line_positions", i)));
                b.coords.push_back({x.back()});
            }
            b.space = make_line_space<Rational>(b.labels, x);
        } else if (const json* cs = optional_field(m, "coords")) {
            array(*cs, "/metric/coords");
            if (cs->size() != n) throw schema_error("/metric/coords", "one coordinate vector per point required");
            std::string norm = "max";
            if (const json* jn = optional_field(m, "norm")) norm = string_value(*jn, "/metric/norm");
            Norm nm;
            if (norm == "max")
                nm = Norm::max;
            else if (norm == "l1")
                nm = Norm::l1;
            else
                throw schema_error("/metric/norm", "finite mode supports \"max\" and \"l1\" (euclidean distances are not rational)");
            for (std::size_t i = 0; i < n; ++i) {
                std::string p = child("/metric/coords", i);
                const json& row = array((*cs)[i], p);
                std::vector<Rational> c;
                for (std::size_t k = 0; k < row.size(); ++k) c.push_back(rational_from_json(row[k], child(p, k)));
                if (!b.coords.empty() && c.size() != b.coords[0].size()) throw schema_error(p, "coordinate dimensions differ");
                b.coords.push_back(std::move(c));
            }
            b.space = make_coord_space<Rational>(b.labels, b.coords, nm);
        } else {
            throw schema_error("/metric", "expected one of \"matrix\", \"line_positions\", \"coords\"");
        }
    } catch (const precondition_error& e) {
        throw schema_error("/metric", e.what());
    }
    if (b.labels.size() != b.space.size()) throw schema_error("/points", "internal size mismatch");
    return b;
}

inline SelfMap parse_map(const json& j, const FiniteMetricSpace<Rational>& space) {
    const json& m = field(j, "map", "");
    const std::size_t n = space.size();
    std::vector<Index> img(n);
    if (m.is_array()) {
        if (m.size() != n) throw schema_error("/map", "map needs exactly one image per point");
        for (std::size_t i = 0; i < n; ++i) img[i] = label_index(space, m[i], child("/map", i));
    } else if (m.is_object()) {
        std::vector<char> seen(n, 0);
        for (auto it = m.begin(); it != m.end(); ++it) {
            auto src = space.find(it.key());
            if (!src) throw schema_error(child("/map", it.key()), "unknown point label \"" + it.key() + "\"");
            img[*src] = label_index(space, it.value(), child("/map", it.key()));
            seen[*src] = 1;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!seen[i]) throw schema_error("/map", "no image for point \"" + space.label(i) + "\"");
    } else {
        throw schema_error("/map", "expected an array of labels or a label->label object");
    }
    return SelfMap(std::move(img), n);
}

inline Relation parse_relation(const json& r, const std::string& path, const FiniteBase& base) {
    const auto& space = base.space;
    const std::size_t n = space.size();
    if (r.is_string()) {
        std::string s = r.get<std::string>();
        if (s == "all") return Relation::total(n);
        if (s == "order_leq") {
            if (base.coords.empty())
                throw schema_error(path, "\"order_leq\" needs line_positions or coords (componentwise order)");
            std::vector<IndexPair> p;
            for (Index u = 0; u < n; ++u)
                for (Index v = 0; v < n; ++v) {
                    bool le = true;
                    for (std::size_t k = 0; k < base.coords[u].size() && le; ++k) le = base.coords[u][k] <= base.coords[v][k];
                    if (le) p.emplace_back(u, v);
                }
            return Relation(n, p);
        }
        throw schema_error(path, "expected \"all\", \"order_leq\" or {\"pairs\": [...]}");
    }
    const json& pairs = array(field(r, "pairs", path), child(path, "pairs"));
    std::vector<IndexPair> p;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::string pp = child(child(path, "pairs"), i);
        const json& pr = array(pairs[i], pp);
        if (pr.size() != 2) throw schema_error(pp, "a pair has two labels");
        p.emplace_back(label_index(space, pr[0], child(pp, 0)), label_index(space, pr[1], child(pp, 1)));
    }
    bool reflexive = false;
    if (const json* jr = optional_field(r, "reflexive")) reflexive = jr->is_boolean() && jr->get<bool>();
    if (reflexive)
        for (Index i = 0; i < n; ++i) p.emplace_back(i, i);
    return Relation(n, p);
}

inline std::vector<Rational> values_on_carrier(const json& v, const std::vector<std::string>& carrier, const std::string& path) {
    std::vector<Rational> out;
    if (v.is_array()) {
        if (v.size() != carrier.size()) throw schema_error(path, "one value per carrier element required");
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational_from_json(v[i], child(path, i)));
    } else if (v.is_object()) {
        for (const auto& k : carrier) {
            auto it = v.find(k);
            if (it == v.end()) throw schema_error(path, "no value for carrier element \"" + k + "\"");
            out.push_back(rational_from_json(*it, child(path, k)));
        }
        if (v.size() != carrier.size()) throw schema_error(path, "value given for an element outside the carrier");
    } else {
        throw schema_error(path, "expected an array or an object keyed by carrier element");
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] < 0) throw schema_error(child(path, i), "values must be nonnegative");
    return out;
}

inline Eigen::VectorXd vector_from_json(const json& v, const std::string& path) {
    if (v.is_number() || v.is_string()) return Eigen::VectorXd::Constant(1, double_from_json(v, path));
    array(v, path);
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = double_from_json(v[i], child(path, i));
    return x;
}

}  // namespace detail

/// Parses an instance document. Throws schema_error for structural problems.
inline InstanceFile instance_from_json(const json& j) {
    using namespace detail;
    if (!j.is_object()) throw schema_error("", "expected an object");
    InstanceFile out;
    out.kind = string_value(field(j, "kind", ""), "/kind");
    if (out.kind == "fg") {
        std::vector<std::string> carrier;
        const json& c = array(field(j, "carrier", ""), "/carrier");
        if (c.empty()) throw schema_error("/carrier", "carrier must be nonempty");
        for (std::size_t i = 0; i < c.size(); ++i) carrier.push_back(string_value(c[i], child("/carrier", i)));
        auto f = values_on_carrier(field(j, "f", ""), carrier, "/f");
        auto g = values_on_carrier(field(j, "g", ""), carrier, "/g");
        try {
            out.payload = FGInstance(std::move(carrier), std::move(f), std::move(g));
        } catch (const precondition_error& e) {
            throw schema_error("", e.what());
        }
        return out;
    }
    if (out.kind == "finite" || out.kind == "order-finite") {
        FiniteBase base = parse_base(j);
        SelfMap map = parse_map(j, base.space);
        if (out.kind == "finite") {
            Relation rel = parse_relation(field(j, "relation", ""), "/relation", base);
            out.payload = FiniteInstance{base.space, std::move(map), std::move(rel)};
            return out;
        }
        Relation order = parse_relation(field(j, "order", ""), "/order", base);
        OrderFiniteFile of{"", FiniteOrderInstance{base.space, std::move(map), std::move(order), std::nullopt, std::nullopt}};
        const json& cs = field(j, "contraction", "");
        if (const json* th = optional_field(cs, "theta")) of.inst.theta = rational_from_json(*th, "/contraction/theta");
        if (const json* ps = optional_field(cs, "psi")) of.inst.psi = piecewise_from_json(*ps, "/contraction/psi");
        if (!of.inst.theta && !of.inst.psi) throw schema_error("/contraction", "expected \"theta\" or \"psi\"");
        if (const json* md = optional_field(j, "model"))
            of.model = string_value(*md, "/model");
        else
            of.model = of.inst.theta ? "nr" : "rz";
        if (of.model != "nr" && of.model != "rz") throw schema_error("/model", "expected \"nr\" or \"rz\"");
        if (of.model == "nr" && !of.inst.theta) throw schema_error("/contraction", "model \"nr\" needs \"theta\"");
        if (of.model == "rz" && !of.inst.psi) throw schema_error("/contraction", "model \"rz\" needs \"psi\"");
        out.payload = std::move(of);
        return out;
    }
    if (out.kind == "order-numeric") {
        OrderNumericFile on;
        std::string family = string_value(field(j, "family", ""), "/family");
        if (family == "scalar") {
            double theta = double_from_json(field(j, "theta", ""), "/theta");
            double c = double_from_json(field(j, "c", ""), "/c");
            double start = 0;
            if (const json* s = optional_field(j, "start")) start = double_from_json(*s, "/start");
            on.inst = NumericOrderInstance::scalar(theta, c, start);
            on.inst.theta = std::abs(theta);
        } else if (family == "affine") {
            const json& a = array(field(j, "A", ""), "/A");
            const auto n = static_cast<Eigen::Index>(a.size());
            on.inst.A.resize(n, n);
            for (Eigen::Index r = 0; r < n; ++r) {
                std::string p = child("/A", static_cast<std::size_t>(r));
                const json& row = array(a[static_cast<std::size_t>(r)], p);
                if (static_cast<Eigen::Index>(row.size()) != n) throw schema_error(p, "A must be square");
                for (Eigen::Index c = 0; c < n; ++c)
                    on.inst.A(r, c) = double_from_json(row[static_cast<std::size_t>(c)], child(p, static_cast<std::size_t>(c)));
            }
            on.inst.b = vector_from_json(field(j, "b", ""), "/b");
            if (on.inst.b.size() != n) throw schema_error("/b", "b must have one entry per row of A");
            if (const json* s = optional_field(j, "start"))
                on.inst.start = vector_from_json(*s, "/start");
            else
                on.inst.start = Eigen::VectorXd::Zero(n);
            if (on.inst.start.size() != n) throw schema_error("/start", "start dimension differs from A");
            if (const json* th = optional_field(j, "theta")) on.inst.theta = double_from_json(*th, "/theta");
        } else {
            throw schema_error("/family", "expected \"scalar\" or \"affine\"");
        }
        on.inst.family = family;
        if (const json* nm = optional_field(j, "norm")) {
            std::string s = string_value(*nm, "/norm");
            if (s == "max")
                on.inst.norm = VectorNorm::max;
            else if (s == "euclidean")
                on.inst.norm = VectorNorm::euclidean;
            else
                throw schema_error("/norm", "expected \"max\" or \"euclidean\"");
        }
        if (const json* t = optional_field(j, "tol")) on.opts.tol = double_from_json(*t, "/tol");
        if (const json* m = optional_field(j, "max_steps")) {
            if (!m->is_number_unsigned()) throw schema_error("/max_steps", "expected a nonnegative integer");
            on.opts.max_steps = m->get<std::size_t>();
        }
        out.payload = std::move(on);
        return out;
    }
    throw schema_error("/kind", "unknown kind \"" + out.kind + "\" (expected finite, fg, order-finite, order-numeric)");
}

/// Reads and parses a file. json::parse_error propagates for syntax errors.
inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return json::parse(ss.str());
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

/// Structural checks beyond the schema: metric axioms, order axioms and
/// contraction-spec admissibility. Empty result means valid.
inline std::vector<std::string> structural_violations(const InstanceFile& file) {
    std::vector<std::string> out;
    auto metric = [&](const FiniteMetricSpace<Rational>& s) {
        for (const auto& v : validate_space(s).violations) out.push_back(v.message());
    };
    if (const auto* f = file.finite()) {
        metric(f->space);
    } else if (const auto* o = file.order_finite()) {
        metric(o->inst.space);
        Check po = check_partial_order(o->inst.order);
        if (!po) {
            const char* what = po.witness.size() == 1 ? "reflexivity" : po.witness.size() == 2 ? "antisymmetry" : "transitivity";
            std::string at;
            for (auto i : po.witness) at += (at.empty() ? "" : ",") + o->inst.space.label(i);
            out.push_back(std::string("order ") + what + " violated at (" + at + ")");
        }
        if (o->inst.theta && (*o->inst.theta < 0 || *o->inst.theta >= 1)) out.emplace_back("theta not in [0,1)");
        if (o->inst.psi) {
            const auto& psi = *o->inst.psi;
            if (!psi.is_finite_valued()) out.emplace_back("psi takes the value inf");
            if (!psi.is_right_usc()) out.emplace_back("psi is not right upper semicontinuous");
            if (auto t = compare_counterexample(psi, Cmp::less, PiecewiseFn::identity()))
                out.push_back("psi(t) < t fails at t=" + to_string(*t));
        }
    } else if (const auto* n = file.order_numeric()) {
        double th = n->inst.theta.value_or(0.0);
        if (n->inst.theta && (th < 0 || th >= 1)) out.emplace_back("theta not in [0,1)");
        if (!n->inst.A.allFinite() || !n->inst.b.allFinite() || !n->inst.start.allFinite())
            out.emplace_back("non-finite coefficient");
        if (!(n->opts.tol > 0)) out.emplace_back("tol must be positive");
    }
    return out;
}

/// The (K, f, g) view of an instance, for kinds fg and finite.
inline FGInstance as_fg(const InstanceFile& file) {
    if (const auto* g = file.fg()) return *g;
    if (const auto* f = file.finite()) return instance_to_fg(f->space, f->map, f->rel);
    if (const auto* o = file.order_finite()) return instance_to_fg(o->inst.space, o->inst.map, o->inst.order);
    throw precondition_error("kind " + file.kind + " has no (K, f, g) view");
}

// --- reports ------------------------------------------------------------------

inline json to_json(const MkVerdict& v, const FGInstance& inst) {
    json j = {{"holds", v.holds}};
    if (!v.holds) {
        j["failing_eps"] = to_json(*v.failing_eps);
        j["failing_element"] = inst.carrier()[*v.failing_element];
    }
    return j;
}

inline json to_json(const ModulusProfile& p) {
    json rows = json::array();
    for (const auto& r : p.rows()) {
        json row;
        if (r.is_point) {
            row = {{"eps", to_json(r.lo)}, {"delta", formula_string(r.formula, "eps")}};
        } else {
            row = {{"from", to_json(r.lo)}, {"to", r.hi ? to_json(*r.hi) : json("inf")},
                   {"delta", formula_string(r.formula, "eps")}};
        }
        rows.push_back(row);
    }
    json bps = json::array();
    for (const auto& b : p.breakpoints()) bps.push_back(to_json(b));
    return {{"variant", to_string(p.variant())}, {"breakpoints", bps}, {"rows", rows}, {"function", to_json(p.function())}};
}

inline json to_json(const ConditionCheck& c) { return {{"holds", c.holds}, {"failures", c.failures}}; }

inline json to_json(const MoreoverCheck& m) {
    return {{"right_continuous", m.right_continuous}, {"nondecreasing", m.nondecreasing}, {"positive", m.positive},
            {"l_below_identity", m.below_diagonal}};
}

inline json to_json(const EquivalenceReport& r) {
    json conds = json::array();
    for (std::size_t i = 0; i < r.conditions.size(); ++i) {
        const auto& c = r.conditions[i];
        conds.push_back({{"condition", i + 1}, {"holds", c.holds}, {"basis", to_string(c.basis)}, {"detail", c.detail}});
    }
    json w = json::object();
    w["gamma"] = to_json(r.gamma);
    if (r.w) w["w"] = to_json(*r.w);
    if (r.l) w["l"] = to_json(*r.l);
    if (r.phi) w["phi"] = to_json(*r.phi);
    if (r.psi) w["psi"] = to_json(*r.psi);
    json j = {{"hypothesis_zero_sets", r.hypothesis},
              {"conditions", conds},
              {"all_agree", r.all_agree},
              {"consistent", r.consistent},
              {"phi_psi_from_l", r.phi_psi_from_l},
              {"gamma_never_infinite", r.gamma_never_infinite},
              {"witnesses", w},
              {"notes", r.notes}};
    j["moreover"] = r.moreover ? to_json(*r.moreover) : json(nullptr);
    return j;
}

inline json to_json(const std::vector<Assumption>& as) {
    json out = json::array();
    for (const auto& a : as) out.push_back({{"id", a.id}, {"holds", a.holds}, {"note", a.note}});
    return out;
}

inline json to_json(const Trajectory<Rational>& t, const FiniteMetricSpace<Rational>& space) {
    json states = json::array();
    for (auto s : t.states) states.push_back(space.label(s));
    json dists = json::array();
    for (const auto& d : t.step_dists) dists.push_back(to_json(d));
    json j = {{"start", space.label(t.start)}, {"states", states}, {"step_dists", dists}, {"outcome", to_string(t.outcome)}};
    j["fixed_point"] = t.fixed_point ? json(space.label(*t.fixed_point)) : json(nullptr);
    j["steps"] = t.fixed_point ? json(t.steps) : json(nullptr);
    j["monotonicity_violation"] = t.monotonicity_violation ? json(*t.monotonicity_violation) : json(nullptr);
    return j;
}

inline json to_json(const FptReport& r, const FiniteMetricSpace<Rational>& space) {
    json j = {{"assumptions", to_json(r.assumptions)}};
    j["start"] = r.start ? json(space.label(*r.start)) : json(nullptr);
    j["trajectory"] = r.trajectory ? to_json(*r.trajectory, space) : json(nullptr);
    j["fixed_point"] = r.fixed_point ? json(space.label(*r.fixed_point)) : json(nullptr);
    json fps = json::array();
    for (auto y : r.uniqueness.fixed_points) fps.push_back(space.label(y));
    j["uniqueness"] = {{"status", to_string(r.uniqueness.status)},
                       {"fixed_points", fps},
                       {"notes", r.uniqueness.notes},
                       {"unimplemented", "alternative criterion through R-comparable fixed points is not implemented; uniqueness is certified from (vi) and (vii) only"}};
    return j;
}

inline json to_json(const OrderReport& r, const FiniteMetricSpace<Rational>& space) {
    json j = {{"clauses", to_json(r.clauses)}, {"engine", to_json(r.fpt, space)}, {"reduction_consistent", r.reduction_consistent},
              {"notes", r.notes}};
    if (r.condition6_id_psi) j["condition6_with_id_psi"] = *r.condition6_id_psi;
    if (r.mk_on_order) j["mk_on_order"] = *r.mk_on_order;
    return j;
}

inline json vector_json(const Eigen::VectorXd& x) {
    if (x.size() == 1) return x(0);
    json a = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x(i));
    return a;
}

inline json to_json(const NumericReport& r) {
    const auto& t = r.trajectory;
    json dists = json::array();
    for (double d : t.step_dists) dists.push_back(d);
    // The full state log can be long; report the endpoints and the distances.
    json traj = {{"start", vector_json(t.states.front())},
                 {"converged", t.converged},
                 {"steps", t.steps},
                 {"step_dists", dists},
                 {"fixed_point", vector_json(t.fixed_point)},
                 {"residual", t.residual},
                 {"outcome", t.converged ? "fixed_point_reached" : "max_steps_exhausted"}};
    return {{"clauses", to_json(r.clauses)},
            {"assumptions", to_json(r.assumptions)},
            {"operator_norm", r.operator_norm},
            {"theta", r.theta},
            {"trajectory", traj},
            {"notes", r.notes}};
}

}  // namespace mkfp::io

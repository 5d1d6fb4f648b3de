// mkfp: command-line front end.
//
//   mkfp validate|check|witnesses|iterate|equivalence <file> [flags]
//
// Exit codes: 0 success / holds, 1 checked and fails, 2 input error.

#include "mkfp/mkfp.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using mkfp::io::json;
namespace io = mkfp::io;

constexpr int kOk = 0;
constexpr int kFails = 1;
constexpr int kInputError = 2;

struct Common {
    std::string file;
    std::string format = "json";
};

// --- text rendering -------------------------------------------------------

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
}

bool flat_object(const json& v) {
    if (!v.is_object()) return false;
    for (const auto& [k, x] : v.items())
        if (x.is_structured() && !(x.is_array() && x.empty())) return false;
    return true;
}

void render_text(std::ostream& os, const json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (v.is_object()) {
        for (const auto& [k, x] : v.items()) {
            if (x.is_structured() && !x.empty()) {
                os << pad << k << ":\n";
                render_text(os, x, indent + 2);
            } else {
                os << pad << k << ": " << (x.is_structured() ? std::string("(none)") : scalar_text(x)) << '\n';
            }
        }
    } else if (v.is_array()) {
        bool scalars = true;
        for (const auto& x : v) scalars = scalars && !x.is_structured();
        if (scalars) {
            os << pad;
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar_text(v[i]);
            os << '\n';
            return;
        }
        for (const auto& x : v) {
            if (!x.is_structured()) {
                os << pad << "- " << scalar_text(x) << '\n';
            } else if (flat_object(x)) {
                os << pad << "-";
                for (const auto& [k, y] : x.items()) os << ' ' << k << '=' << (y.is_array() ? std::string("[]") : scalar_text(y));
                os << '\n';
            } else {
                os << pad << "-\n";
                render_text(os, x, indent + 2);
            }
        }
    } else {
        os << pad << scalar_text(v) << '\n';
    }
}

int emit(const Common& c, json report, int code) {
    report["exit_code"] = code;
    if (c.format == "text") {
        render_text(std::cout, report, 0);
    } else {
        std::cout << report.dump(2) << '\n';
    }
    return code;
}

json header(const std::string& command, const Common& c) {
    return {{"schema_version", io::kSchemaVersion}, {"command", command}, {"file", c.file}};
}

int input_error(const Common& c, const std::string& command, const std::string& message) {
    json r = header(command, c);
    r["error"] = message;
    std::cerr << "mkfp " << command << ": " << message << '\n';
    return emit(c, r, kInputError);
}

/// Loads the instance; on failure prints the error and returns the exit code.
std::optional<io::InstanceFile> load(const Common& c, const std::string& command, int& code) {
    json doc;
    try {
        doc = io::read_json_file(c.file);
    } catch (const json::parse_error& e) {
        code = input_error(c, command, "parse error at byte " + std::to_string(e.byte) + ": " + e.what());
        return std::nullopt;
    } catch (const std::exception& e) {
        code = input_error(c, command, e.what());
        return std::nullopt;
    }
    try {
        auto file = io::instance_from_json(doc);
        auto violations = io::structural_violations(file);
        if (!violations.empty()) {
            std::string msg = "invalid instance:";
            for (const auto& v : violations) msg += " " + v + ";";
            code = input_error(c, command, msg);
            return std::nullopt;
        }
        return file;
    } catch (const std::exception& e) {
        code = input_error(c, command, e.what());
        return std::nullopt;
    }
}

// --- commands -------------------------------------------------------------

int cmd_validate(const Common& c) {
    json r = header("validate", c);
    json doc;
    try {
        doc = io::read_json_file(c.file);
    } catch (const json::parse_error& e) {
        return input_error(c, "validate", "parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    } catch (const std::exception& e) {
        return input_error(c, "validate", e.what());
    }
    std::vector<std::string> violations;
    try {
        auto file = io::instance_from_json(doc);
        r["kind"] = file.kind;
        violations = io::structural_violations(file);
    } catch (const io::schema_error& e) {
        violations.emplace_back(e.what());
    }
    r["valid"] = violations.empty();
    r["violations"] = violations;
    return emit(c, r, violations.empty() ? kOk : kFails);
}

int cmd_check(const Common& c, const std::string& variant) {
    int code = 0;
    auto file = load(c, "check", code);
    if (!file) return code;
    json r = header("check", c);
    r["kind"] = file->kind;
    try {
        mkfp::FGInstance inst = io::as_fg(*file);
        auto v = variant == "mks" ? mkfp::Variant::mks : mkfp::Variant::mk;
        mkfp::MkVerdict verdict = mkfp::mk_holds(inst, v);
        r["variant"] = variant;
        r["holds"] = verdict.holds;
        r["verdict"] = io::to_json(verdict, inst);
        r["verdicts"] = {{"mk", mkfp::mk_holds(inst, mkfp::Variant::mk).holds},
                         {"mks", mkfp::mk_holds(inst, mkfp::Variant::mks).holds}};
        r["hypothesis_zero_sets"] = inst.zero_set_hypothesis();
        r["profile"] = io::to_json(mkfp::modulus_profile(inst, v));
        return emit(c, r, verdict.holds ? kOk : kFails);
    } catch (const std::exception& e) {
        return input_error(c, "check", e.what());
    }
}

int cmd_witnesses(const Common& c, const std::string& emit_dir) {
    int code = 0;
    auto file = load(c, "witnesses", code);
    if (!file) return code;
    json r = header("witnesses", c);
    r["kind"] = file->kind;
    try {
        mkfp::FGInstance inst = io::as_fg(*file);
        mkfp::EquivalenceReport eq = mkfp::equivalence_report(inst);
        r["report"] = io::to_json(eq);
        if (!eq.holds(1)) {
            r["emitted"] = json::array();
            r["message"] = "MK condition fails; no witnesses emitted";
            return emit(c, r, kFails);
        }
        // Emit every witness whose condition verified.
        std::vector<std::pair<std::string, const mkfp::PiecewiseFn*>> out;
        if (eq.holds(3)) out.emplace_back("gamma", &eq.gamma);
        if (eq.w && eq.holds(4)) out.emplace_back("w", &*eq.w);
        if (eq.l && eq.holds(5)) out.emplace_back("l", &*eq.l);
        if (eq.phi && eq.psi && eq.holds(6)) {
            out.emplace_back("phi", &*eq.phi);
            out.emplace_back("psi", &*eq.psi);
        }
        json emitted = json::array();
        if (!emit_dir.empty()) {
            std::filesystem::create_directories(emit_dir);
            for (const auto& [name, fn] : out) {
                auto path = (std::filesystem::path(emit_dir) / (name + ".json")).string();
                io::write_json_file(path, io::to_json(*fn));
                emitted.push_back(path);
            }
        }
        r["emitted"] = emitted;
        bool all = true;
        for (int i = 1; i <= 6; ++i) all = all && eq.holds(i);
        if (!all) r["message"] = "not every condition holds; only verified witnesses emitted";
        return emit(c, r, all && eq.consistent ? kOk : kFails);
    } catch (const std::exception& e) {
        return input_error(c, "witnesses", e.what());
    }
}

std::optional<Eigen::VectorXd> parse_vector(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) return std::nullopt;
        } catch (...) {
            return std::nullopt;
        }
    }
    if (v.empty()) return std::nullopt;
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

int cmd_iterate(const Common& c, const std::string& start, std::optional<std::size_t> max_steps, std::optional<double> tol) {
    int code = 0;
    auto file = load(c, "iterate", code);
    if (!file) return code;
    json r = header("iterate", c);
    r["kind"] = file->kind;

    if (const auto* num = file->order_numeric()) {
        mkfp::NumericOrderInstance inst = num->inst;
        mkfp::NumericOptions opts = num->opts;
        if (max_steps) opts.max_steps = *max_steps;
        if (tol) opts.tol = *tol;
        if (!start.empty()) {
            auto x = parse_vector(start);
            if (!x || x->size() != inst.start.size())
                return input_error(c, "iterate", "start must be " + std::to_string(inst.start.size()) + " comma-separated numbers");
            inst.start = *x;
        }
        try {
            auto rep = mkfp::nr_solve_numeric(inst, opts);
            r["model"] = "nr";
            r["result"] = io::to_json(rep);
            return emit(c, r, rep.trajectory.converged ? kOk : kFails);
        } catch (const mkfp::clause_violation& e) {
            r["clause_violation"] = {{"clause", e.clause()}, {"message", e.what()}};
            return emit(c, r, kFails);
        } catch (const std::exception& e) {
            return input_error(c, "iterate", e.what());
        }
    }

    const mkfp::FiniteMetricSpace<mkfp::Rational>* space = nullptr;
    if (const auto* f = file->finite()) space = &f->space;
    if (const auto* o = file->order_finite()) space = &o->inst.space;
    if (!space) return input_error(c, "iterate", "kind " + file->kind + " has no map to iterate");

    mkfp::SolveOptions opts;
    opts.max_steps = max_steps;
    if (!start.empty()) {
        auto idx = space->find(start);
        if (!idx) return input_error(c, "iterate", "unknown start label \"" + start + "\"");
        opts.start = idx;
    }
    try {
        if (const auto* f = file->finite()) {
            mkfp::FptReport rep = mkfp::solve(f->space, f->map, f->rel, opts);
            r["result"] = io::to_json(rep, f->space);
            return emit(c, r, rep.fixed_point ? kOk : kFails);
        }
        const auto* o = file->order_finite();
        r["model"] = o->model;
        try {
            mkfp::OrderReport rep = o->model == "nr" ? mkfp::nr_check_and_solve(o->inst, opts) : mkfp::rz_check_and_solve(o->inst, opts);
            r["result"] = io::to_json(rep, o->inst.space);
            return emit(c, r, rep.fpt.fixed_point ? kOk : kFails);
        } catch (const mkfp::clause_violation& e) {
            r["clause_violation"] = {{"clause", e.clause()}, {"message", e.what()}};
            r["clauses"] = io::to_json(o->model == "nr" ? mkfp::nr_clauses(o->inst, opts.start) : mkfp::rz_clauses(o->inst));
            return emit(c, r, kFails);
        }
    } catch (const std::exception& e) {
        return input_error(c, "iterate", e.what());
    }
}

int cmd_equivalence(const Common& c) {
    int code = 0;
    auto file = load(c, "equivalence", code);
    if (!file) return code;
    if (file->kind != "fg" && file->kind != "finite")
        return input_error(c, "equivalence", "equivalence needs kind fg or finite, got " + file->kind);
    json r = header("equivalence", c);
    r["kind"] = file->kind;
    try {
        mkfp::EquivalenceReport eq = mkfp::equivalence_report(io::as_fg(*file));
        r["report"] = io::to_json(eq);
        bool all = true;
        for (int i = 1; i <= 6; ++i) all = all && eq.holds(i);
        return emit(c, r, all && eq.consistent ? kOk : kFails);
    } catch (const std::exception& e) {
        return input_error(c, "equivalence", e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Meir-Keeler conditions on relations: decide, witness, iterate"};
    app.require_subcommand(1);
    Common common;
    std::string variant = "mk";
    std::string emit_dir;
    std::string start;
    std::size_t max_steps = 0;
    double tol = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", common.file, "instance file (JSON)")->required();
        sub->add_option("--format", common.format, "report format")->check(CLI::IsMember({"json", "text"}));
    };
    auto* validate = app.add_subcommand("validate", "check structural invariants of an instance file");
    add_common(validate);
    auto* check = app.add_subcommand("check", "decide the MK / MKS condition and print the modulus profile");
    add_common(check);
    check->add_option("--variant", variant, "mk or mks")->check(CLI::IsMember({"mk", "mks"}));
    auto* witnesses = app.add_subcommand("witnesses", "construct and verify witness functions");
    add_common(witnesses);
    witnesses->add_option("--emit", emit_dir, "directory for gamma/w/l/phi/psi JSON files");
    auto* iterate = app.add_subcommand("iterate", "run the fixed-point engine");
    add_common(iterate);
    iterate->add_option("--start", start, "start label (finite) or comma-separated vector (numeric)");
    auto* ms = iterate->add_option("--max-steps", max_steps, "iteration budget");
    auto* tl = iterate->add_option("--tol", tol, "numeric stopping tolerance")->check(CLI::PositiveNumber);
    auto* equivalence = app.add_subcommand("equivalence", "decide all six characterizations");
    add_common(equivalence);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    if (const char* env = std::getenv("MKFP_FORMAT")) {
        std::string f = env;
        if (f == "json" || f == "text") common.format = f;
    }

    if (*validate) return cmd_validate(common);
    if (*check) return cmd_check(common, variant);
    if (*witnesses) return cmd_witnesses(common, emit_dir);
    if (*iterate)
        return cmd_iterate(common, start, ms->count() ? std::optional<std::size_t>(max_steps) : std::nullopt,
                           tl->count() ? std::optional<double>(tol) : std::nullopt);
    if (*equivalence) return cmd_equivalence(common);
    return kInputError;
}

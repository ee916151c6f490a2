// Copyright 2026 The gapq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <gapq/gapq.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Exit codes: 0 done/reject, 1 validation failure, 2 parse or I/O error,
// 3 accept, 4 budget exceeded.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitParse = 2;
constexpr int kExitAccept = 3;
constexpr int kExitBudget = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gapq::parse_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

gapq::FieldLoader loader_relative_to(const std::string& program_path) {
    const fs::path base = fs::path(program_path).parent_path();
    return [base](const std::string& ref) { return read_file((base / ref).string()); };
}

struct Output {
    std::string out_path;  // empty: stdout
    bool quiet = false;

    void report(const json& j) const {
        const std::string text = j.dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw gapq::parse_error("cannot write '" + out_path + "'");
            out << text;
        }
    }

    void note(const std::string& line) const {
        if (!quiet) std::cerr << line << "\n";
    }
};

json complex_json(gapq::Complex z) { return json::array({z.real(), z.imag()}); }

json form_json(const gapq::CanonicalForm& f) {
    json terms = json::array();
    for (const auto& [idx, coeff] : f.terms()) {
        json index = json::array({idx.basis_pos});
        for (auto e : idx.exponents) index.push_back(e);
        terms.push_back(json::array({index, coeff.str()}));
    }
    return terms;
}

std::uint64_t default_budget() {
    if (const char* env = std::getenv("GAPQ_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw gapq::parse_error("GAPQ_BUDGET must be a nonnegative integer");
        }
    }
    return gapq::limits::kDefaultBudget;
}

gapq::Program load_program(const std::string& path) {
    return gapq::Program::parse(read_file(path), loader_relative_to(path));
}

int cmd_validate(const std::string& field_path, const std::string& program_path,
                 const Output& out) {
    json report;
    bool valid = true;

    if (!field_path.empty()) {
        const auto fp = gapq::FieldPresentation::parse(read_file(field_path));
        const auto rep = gapq::validate_presentation(fp);
        json violations = json::array();
        for (const auto& v : rep.violations)
            violations.push_back(
                {{"kind", v.kind}, {"where", v.where}, {"detail", v.detail}, {"error", v.error}});
        report["field"] = {{"valid", rep.valid()}, {"violations", std::move(violations)}};
        valid = rep.valid();
    } else {
        gapq::ProgramCheck check;
        const auto program =
            gapq::Program::parse_checked(read_file(program_path), check, loader_relative_to(program_path));
        const auto field_rep = gapq::validate_presentation(program.field());
        json violations = json::array();
        for (const auto& v : field_rep.violations)
            violations.push_back(
                {{"kind", v.kind}, {"where", v.where}, {"detail", v.detail}, {"error", v.error}});
        json layers = json::array();
        for (const auto& rep : check.layer_unitarity)
            layers.push_back(
                {{"dim", rep.dim}, {"max_deviation", rep.max_deviation}, {"pass", rep.pass}});
        report["field"] = {{"valid", field_rep.valid()}, {"violations", std::move(violations)}};
        report["program"] = {{"problems", check.problems}, {"layers", std::move(layers)}};
        valid = field_rep.valid() && check.pass();
    }

    report["valid"] = valid;
    out.report(report);
    out.note(valid ? "valid" : "validation failed");
    return valid ? kExitOk : kExitInvalid;
}

int cmd_simulate(const std::string& program_path, const std::string& mode, double tolerance,
                 const Output& out) {
    const gapq::Program program = load_program(program_path);
    json report;
    report["mode"] = mode;
    json steps = json::array();
    json final_states = json::array();
    bool accept = false;

    if (mode == "numeric") {
        gapq::NumericSuperposition state = gapq::initial_numeric(program);
        for (std::size_t li = 0; li < program.step_count(); ++li) {
            state = gapq::step_numeric(state, program, li);
            const double norm = state.norm_squared();
            steps.push_back({{"t", li + 1},
                             {"norm", norm},
                             {"live_states", state.amplitudes.size()},
                             {"norm_ok", std::abs(norm - 1.0) <= tolerance}});
        }
        for (const auto& [rank, z] : state.amplitudes)
            final_states.push_back({{"state", program.reg().unrank(rank).symbols},
                                    {"numeric", complex_json(z)}});
        report["steps"] = std::move(steps);
        report["final"] = std::move(final_states);
        out.report(report);
        out.note("simulated " + std::to_string(program.step_count()) + " layers (numeric)");
        return kExitOk;
    }

    if (mode == "exact") {
        gapq::ExactSuperposition state = gapq::initial_exact(program);
        for (std::size_t li = 0; li < program.step_count(); ++li) {
            state = gapq::step_exact(state, program, li);
            steps.push_back({{"t", state.t},
                             {"live_states", state.amplitudes.size()},
                             {"max_ind", state.max_ind()}});
        }
        for (const auto& [rank, form] : state.amplitudes)
            final_states.push_back({{"state", program.reg().unrank(rank).symbols},
                                    {"form", form_json(form)}});
        gapq::SimulationResult partial;
        partial.exact = state;
        const gapq::Decision d = gapq::decide_nqp(program, partial);
        report["steps"] = std::move(steps);
        report["final"] = std::move(final_states);
        report["decision"] = {{"accept", d.accept}, {"g", d.g.str()}};
        accept = d.accept;
        out.report(report);
        out.note(accept ? "accept" : "reject");
        return kExitOk;
    }

    const gapq::SimulationResult sim = gapq::run(program);
    const gapq::Complex scale = [&] {
        gapq::Complex s{1.0, 0.0};
        const gapq::Complex u = program.field().u_numeric();
        for (std::size_t li = 0; li < program.step_count(); ++li) s = li == 0 ? u : s * u * u;
        return s;
    }();
    for (const auto& st : sim.trace.steps)
        steps.push_back({{"t", st.t},
                         {"norm", st.norm},
                         {"live_states", st.live_states},
                         {"max_ind", st.max_ind},
                         {"consistency_max_err", st.consistency_max_err},
                         {"norm_ok", std::abs(st.norm - 1.0) <= tolerance},
                         {"consistency_ok", st.consistency_max_err <= tolerance}});
    for (const auto& [rank, form] : sim.exact.amplitudes) {
        const auto nit = sim.numeric.amplitudes.find(rank);
        const gapq::Complex z =
            nit == sim.numeric.amplitudes.end() ? gapq::Complex{0.0, 0.0} : nit->second;
        final_states.push_back({{"state", program.reg().unrank(rank).symbols},
                                {"form", form_json(form)},
                                {"value", complex_json(program.field().numeric_embed(form) / scale)},
                                {"numeric", complex_json(z)}});
    }
    const gapq::Decision d = gapq::decide_nqp(program, sim);
    report["steps"] = std::move(steps);
    report["final"] = std::move(final_states);
    report["decision"] = {{"accept", d.accept}, {"g", d.g.str()}};
    out.report(report);
    out.note(d.accept ? "accept" : "reject");
    return kExitOk;
}

int cmd_decide(const std::string& program_path, const Output& out) {
    const gapq::Program program = load_program(program_path);
    const gapq::Decision d = gapq::decide_nqp(program);
    json evidence = json::array();
    for (const auto& ev : d.evidence)
        evidence.push_back({{"state", ev.state.symbols},
                            {"form", form_json(ev.form)},
                            {"exact_value", complex_json(ev.exact_value)},
                            {"numeric_value", complex_json(ev.numeric_value)}});
    out.report({{"accept", d.accept}, {"g", d.g.str()}, {"evidence", std::move(evidence)}});
    out.note(d.accept ? "accept (g = " + d.g.str() + ")" : "reject");
    return d.accept ? kExitAccept : kExitOk;
}

int cmd_compile(const std::string& predicate_path, const Output& out) {
    const auto spec = gapq::PredicateSpec::parse(read_file(predicate_path));
    const gapq::Program program = gapq::compile_gap(spec);
    out.report(program.to_json());
    out.note("compiled p=" + std::to_string(spec.p) + " predicate into " +
             std::to_string(program.step_count()) + " layers");
    return kExitOk;
}

int cmd_gap(const std::string& predicate_path, const Output& out) {
    const auto spec = gapq::PredicateSpec::parse(read_file(predicate_path));
    std::size_t ones = 0;
    for (bool b : spec.table) ones += b ? 1 : 0;
    const gapq::BigInt g = gapq::gap_value(spec);
    out.report({{"p", spec.p},
                {"ones", ones},
                {"zeros", spec.table.size() - ones},
                {"gap", g.str()}});
    out.note("gap = " + g.str());
    return kExitOk;
}

int cmd_crosscheck(const std::string& program_path, std::uint64_t budget, double tolerance,
                   const Output& out) {
    const gapq::Program program = load_program(program_path);
    const gapq::CrosscheckReport rep = gapq::crosscheck(program, budget);
    json discrepancies = json::array();
    for (const auto& d : rep.discrepancies) {
        json index = json::array({d.index.basis_pos});
        for (auto e : d.index.exponents) index.push_back(e);
        discrepancies.push_back({{"state", d.state.symbols},
                                 {"index", std::move(index)},
                                 {"simulator", d.simulator_value.str()},
                                 {"counting", d.counting_value.str()}});
    }
    const bool drift_ok = rep.exact_numeric_drift <= tolerance;
    out.report({{"match", rep.match},
                {"accept", rep.accept},
                {"g_counting", rep.g_counting.str()},
                {"g_simulator", rep.g_simulator.str()},
                {"discrepancies", std::move(discrepancies)},
                {"exact_numeric_drift", rep.exact_numeric_drift},
                {"drift_ok", drift_ok},
                {"visited", rep.visited}});
    if (!rep.pass() || !drift_ok) {
        out.note("crosscheck failed");
        return kExitInvalid;
    }
    out.note(rep.accept ? "crosscheck ok, accept" : "crosscheck ok, reject");
    return rep.accept ? kExitAccept : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact amplitude simulator and counting cross-checker"};
    app.require_subcommand(1);

    std::string field_path, program_path, predicate_path, out_path, mode = "both";
    std::uint64_t budget = 0;
    double tolerance = -1.0;
    bool quiet = false;

    app.add_option("--out", out_path, "write the JSON report to this file instead of stdout");
    app.add_flag("--quiet", quiet, "suppress the human-readable summary on stderr");

    auto* validate = app.add_subcommand("validate", "audit a field presentation or program");
    auto* vf = validate->add_option("--field", field_path, "field presentation file");
    auto* vp = validate->add_option("--program", program_path, "program file");
    vf->excludes(vp);

    auto* simulate = app.add_subcommand("simulate", "run a program and report the trace");
    simulate->add_option("--program", program_path, "program file")->required();
    simulate->add_option("--mode", mode, "exact, numeric, or both")
        ->check(CLI::IsMember({"exact", "numeric", "both"}));
    simulate->add_option("--tolerance", tolerance, "report-level norm/consistency threshold");

    auto* decide = app.add_subcommand("decide", "exact nonzero-amplitude acceptance decision");
    decide->add_option("--program", program_path, "program file")->required();

    auto* compile = app.add_subcommand("compile-gap", "translate a predicate into a program");
    compile->add_option("--predicate", predicate_path, "predicate file {p, table}")->required();

    auto* gap = app.add_subcommand("gap", "acceptance gap of a predicate");
    gap->add_option("--predicate", predicate_path, "predicate file {p, table}")->required();

    auto* crosscheck = app.add_subcommand("crosscheck", "path-sum vs stepper consistency audit");
    crosscheck->add_option("--program", program_path, "program file")->required();
    crosscheck->add_option("--budget", budget, "path enumeration budget (expansions)");
    crosscheck->add_option("--tolerance", tolerance, "exact/numeric drift threshold");

    // --out and --quiet live on the root but may be written after the
    // subcommand name.
    for (auto* sub : {validate, simulate, decide, compile, gap, crosscheck}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    Output out{out_path, quiet};
    auto fail = [](const char* kind, const std::exception& e, int code) {
        std::cout << json{{"error", {{"kind", kind}, {"message", e.what()}}}}.dump(2) << "\n";
        std::cerr << "gapq: " << e.what() << "\n";
        return code;
    };
    try {
        if (validate->parsed()) {
            if (field_path.empty() == program_path.empty())
                throw gapq::parse_error("validate: give exactly one of --field or --program");
            return cmd_validate(field_path, program_path, out);
        }
        if (simulate->parsed()) {
            const double tol = tolerance < 0 ? gapq::tol::kStepConsistency : tolerance;
            return cmd_simulate(program_path, mode, tol, out);
        }
        if (decide->parsed()) return cmd_decide(program_path, out);
        if (compile->parsed()) return cmd_compile(predicate_path, out);
        if (gap->parsed()) return cmd_gap(predicate_path, out);
        if (crosscheck->parsed()) {
            const std::uint64_t b = budget == 0 ? default_budget() : budget;
            const double tol = tolerance < 0 ? gapq::tol::kStepConsistency : tolerance;
            return cmd_crosscheck(program_path, b, tol, out);
        }
    } catch (const gapq::budget_exceeded& e) {
        return fail("budget_exceeded", e, kExitBudget);
    } catch (const gapq::parse_error& e) {
        return fail("parse_error", e, kExitParse);
    } catch (const gapq::lookup_error& e) {
        return fail("lookup_error", e, kExitParse);
    } catch (const gapq::validation_error& e) {
        return fail("validation_error", e, kExitInvalid);
    } catch (const gapq::presentation_mismatch& e) {
        return fail("presentation_mismatch", e, kExitInvalid);
    } catch (const gapq::invariant_error& e) {
        return fail("invariant_error", e, kExitInvalid);
    } catch (const std::exception& e) {
        std::cerr << "gapq: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}

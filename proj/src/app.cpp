#include "jetfield/app.hpp"

#include "jetfield/error.hpp"
#include "jetfield/hamiltonian.hpp"
#include "jetfield/lagrangian.hpp"
#include "jetfield/model_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace jetfield {

namespace {

using Json = nlohmann::ordered_json;

ReportEquation entry(const Equation& eq)
{
    return {eq.text(), to_string(eq.lhs), to_string(eq.rhs), std::string(to_string(eq.kind))};
}

void add_system(Report& report, const DynamicsSystem& system)
{
    for (const auto& eq : system.equations) report.equations.push_back(entry(eq));
}

void add_checks(Report& report, std::vector<CheckResult> checks)
{
    for (auto& c : checks) {
        if (!c.passed()) report.exit_code = 2;
        report.checks.push_back(std::move(c));
    }
}

bool mentions_jet(const ChartSet& charts, const Expr& e)
{
    for (const auto& s : free_symbols(e)) {
        const auto* info = charts.info(s);
        if (info && info->role == Role::Jet) return true;
    }
    return false;
}

DynamicsSystem legendre_equations(const FieldModel& model, const ChartSet& charts)
{
    const auto lambda = legendre_map(model, charts);
    DynamicsSystem out{Space::J1P, {}};
    for (int a = 0; a < charts.n(); ++a)
        for (int j = 0; j < charts.m(); ++j) {
            const Expr& rhs = lambda(a, j);
            out.equations.push_back(make_equation(Expr::symbol(charts.momentum(a, j)), rhs,
                                                  mentions_jet(charts, rhs) ? EquationClass::MomentumDef
                                                                            : EquationClass::Constraint));
        }
    return out;
}

DynamicsSystem system_for(const std::string& name, const FieldModel& model, const ChartSet& charts)
{
    const bool sources = model.sources.has_value();
    if (name == "el") return euler_lagrange(model, charts);
    if (name == "phase") return phase_dynamics(model, charts, sources);
    if (name == "hamilton-phase") return hamiltonian_dynamics(model, charts, hamiltonian_of(model, charts), sources);
    throw Error(ErrorKind::InvalidModel, "unknown system '" + name + "'");
}

void run_examples(Report& report, const RunOptions& options)
{
    std::vector<std::string> names = builtin_names();
    if (!options.example.empty()) names = {builtin_model(options.example).name};
    for (const auto& name : names) {
        const auto model = builtin_model(name);
        if (!options.out_dir) {
            report.notes.push_back(name + " " + model_digest(model));
            continue;
        }
        std::filesystem::create_directories(*options.out_dir);
        const auto path = std::filesystem::path(*options.out_dir) / (name + ".json");
        std::ofstream out(path);
        out << print_model(model);
        if (!out) throw Error(ErrorKind::InvalidModel, "cannot write '" + path.string() + "'");
        report.notes.push_back("wrote " + path.string());
    }
}

std::string scientific(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

}  // namespace

Report run(const std::string& command, const std::optional<FieldModel>& model, const RunOptions& options)
{
    Report report;
    report.command = command;
    if (command == "examples") {
        run_examples(report, options);
        return report;
    }
    if (!model) throw Error(ErrorKind::InvalidModel, "command '" + command + "' needs a model");
    report.model_digest = model_digest(*model);
    const ChartSet charts(*model);

    try {
        if (command == "derive el") {
            add_system(report, euler_lagrange(*model, charts));
        } else if (command == "derive phase") {
            add_system(report, phase_dynamics(*model, charts, model->sources.has_value()));
        } else if (command == "derive hamilton-phase") {
            add_system(report, system_for("hamilton-phase", *model, charts));
        } else if (command == "legendre") {
            add_system(report, legendre_equations(*model, charts));
            try {
                const auto v = inverse_legendre(*model, charts);
                for (int a = 0; a < charts.n(); ++a)
                    for (int j = 0; j < charts.m(); ++j)
                        report.equations.push_back(entry(make_equation(Expr::symbol(charts.jet(a, j)), v(a, j),
                                                                       EquationClass::MomentumInverse)));
            } catch (const SingularLagrangianError& e) {
                // The momentum map itself is still well defined; only its inverse is missing.
                report.notes.push_back(std::string(e.what()));
            }
        } else if (command == "hamiltonize") {
            const auto H = legendre_transform(*model, charts);
            report.equations.push_back({"h = " + to_string(H.h), "h", to_string(H.h), "Hamiltonian"});
        } else if (command == "check identities") {
            add_checks(report, identity_suite(*model, charts));
        } else if (command == "check consistency") {
            add_checks(report, {check_master_consistency(*model, charts)});
        } else if (command == "verify") {
            const auto system = system_for(options.system, *model, charts);
            const auto grid = read_grid_file(options.grid_path);
            auto residual = residuals(system, *model, charts, grid, options.momenta, options.tolerance,
                                      options.parameters);
            add_system(report, system);
            if (!residual.passed) report.exit_code = 2;
            report.residuals = std::move(residual);
        } else {
            throw Error(ErrorKind::InvalidModel, "unknown command '" + command + "'");
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularLagrangian && e.kind() != ErrorKind::NonQuadratic) throw;
        report.notes.push_back(std::string(e.what()));
        report.exit_code = 2;
    }
    return report;
}

std::string to_json(const Report& report)
{
    Json doc;
    doc["command"] = report.command;
    doc["model_digest"] = report.model_digest;
    Json equations = Json::array();
    for (const auto& eq : report.equations)
        equations.push_back({{"text", eq.text}, {"lhs", eq.lhs}, {"rhs", eq.rhs}, {"class", eq.kind}});
    doc["equations"] = equations;
    Json checks = Json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"verdict", std::string(to_string(c.verdict))},
                          {"detail", c.detail},
                          {"witnesses", c.witnesses}});
    doc["checks"] = checks;
    if (report.residuals) {
        const auto& r = *report.residuals;
        Json entries = Json::array();
        for (const auto& e : r.entries)
            entries.push_back({{"equation", e.equation},
                               {"class", std::string(to_string(e.kind))},
                               {"max_abs", e.max_abs},
                               {"l2", e.l2},
                               {"points", e.points}});
        doc["residuals"] = {{"tolerance", r.tolerance},
                            {"boundary_layer", r.boundary_layer},
                            {"passed", r.passed},
                            {"entries", entries}};
    } else {
        doc["residuals"] = nullptr;
    }
    doc["status"] = report.status();
    doc["notes"] = report.notes;
    return doc.dump(2) + "\n";
}

std::string to_text(const Report& report)
{
    std::ostringstream out;
    out << "command    " << report.command << "\n";
    if (!report.model_digest.empty()) out << "model      " << report.model_digest << "\n";
    if (!report.equations.empty()) {
        std::size_t width = 0;
        for (const auto& eq : report.equations) width = std::max(width, eq.text.size());
        out << "equations\n";
        for (const auto& eq : report.equations) out << "  " << pad(eq.text, width) << "   " << eq.kind << "\n";
    }
    if (!report.checks.empty()) {
        std::size_t width = 0;
        for (const auto& c : report.checks) width = std::max(width, c.name.size());
        out << "checks\n";
        for (const auto& c : report.checks) {
            out << "  " << pad(c.name, width) << "   " << pad(std::string(to_string(c.verdict)), 8) << " "
                << c.detail << "\n";
            for (const auto& w : c.witnesses) out << "      " << w << "\n";
        }
    }
    if (report.residuals) {
        const auto& r = *report.residuals;
        std::size_t width = 8;
        for (const auto& e : r.entries) width = std::max(width, e.equation.size());
        out << "residuals  tolerance " << scientific(r.tolerance) << ", boundary layer " << r.boundary_layer
            << (r.passed ? ", passed" : ", FAILED") << "\n";
        out << "  " << pad("equation", width) << "   " << pad("max_abs", 11) << pad("l2", 11) << "points\n";
        for (const auto& e : r.entries)
            out << "  " << pad(e.equation, width) << "   " << pad(scientific(e.max_abs), 11)
                << pad(scientific(e.l2), 11) << e.points << "\n";
    }
    for (const auto& n : report.notes) out << "note       " << n << "\n";
    out << "status     " << report.status() << "\n";
    return out.str();
}

}  // namespace jetfield

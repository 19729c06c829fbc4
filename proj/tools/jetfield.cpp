#include "jetfield/app.hpp"
#include "jetfield/error.hpp"
#include "jetfield/model_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

struct Common {
    bool json = false;
    std::string report_path;
};

void add_common(CLI::App* cmd, Common& common)
{
    cmd->add_flag("--json", common.json, "Print the report as JSON");
    cmd->add_option("--report", common.report_path, "Also write the JSON report to this file");
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items)
{
    std::map<std::string, double> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected NAME=VALUE, got " + item);
        try {
            std::size_t used = 0;
            const double value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument(item);
            out[item.substr(0, eq)] = value;
        } catch (const std::logic_error&) {
            throw CLI::ValidationError("--param", "not a number in " + item);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Field-theory dynamics on jet bundles: derive, transform, check and verify."};
    app.require_subcommand(1);

    Common common;
    jetfield::RunOptions options;
    std::string model_source;
    std::string command;
    std::vector<std::string> params;
    std::string momenta = "legendre";

    auto* derive = app.add_subcommand("derive", "Derive a dynamics system");
    std::string system_name;
    derive->add_option("system", system_name, "el | phase | hamilton-phase")
        ->required()
        ->check(CLI::IsMember({"el", "phase", "hamilton-phase"}));
    derive->add_option("model", model_source, "Model file or builtin:NAME")->required();
    add_common(derive, common);

    auto* legendre = app.add_subcommand("legendre", "Momentum map and, when regular, its inverse");
    legendre->add_option("model", model_source, "Model file or builtin:NAME")->required();
    add_common(legendre, common);

    auto* hamiltonize = app.add_subcommand("hamiltonize", "Hamiltonian section by Legendre transform");
    hamiltonize->add_option("model", model_source, "Model file or builtin:NAME")->required();
    add_common(hamiltonize, common);

    auto* check = app.add_subcommand("check", "Run structural checks");
    std::string suite;
    check->add_option("suite", suite, "identities | consistency")
        ->required()
        ->check(CLI::IsMember({"identities", "consistency"}));
    check->add_option("model", model_source, "Model file or builtin:NAME")->required();
    add_common(check, common);

    auto* verify = app.add_subcommand("verify", "Finite-difference residuals of a system on a sampled grid");
    verify->add_option("model", model_source, "Model file or builtin:NAME")->required();
    verify->add_option("--grid", options.grid_path, "Grid file")->required();
    verify->add_option("--tol", options.tolerance, "Residual tolerance")->capture_default_str();
    verify->add_option("--momenta", momenta, "legendre | supplied")
        ->check(CLI::IsMember({"legendre", "supplied"}))
        ->capture_default_str();
    verify->add_option("--system", options.system, "el | phase | hamilton-phase")
        ->check(CLI::IsMember({"el", "phase", "hamilton-phase"}))
        ->capture_default_str();
    verify->add_option("--param", params, "Parameter value NAME=VALUE (repeatable)");
    add_common(verify, common);

    auto* examples = app.add_subcommand("examples", "List or write the built-in models");
    examples->add_option("name", options.example, "One built-in model");
    examples->add_option("--out", options.out_dir, "Directory to write NAME.json files into");
    add_common(examples, common);

    try {
        app.parse(argc, argv);
        options.parameters = parse_params(params);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    options.momenta = momenta == "supplied" ? jetfield::MomentumSource::Supplied : jetfield::MomentumSource::Legendre;

    if (derive->parsed()) command = "derive " + system_name;
    if (legendre->parsed()) command = "legendre";
    if (hamiltonize->parsed()) command = "hamiltonize";
    if (check->parsed()) command = "check " + suite;
    if (verify->parsed()) command = "verify";
    if (examples->parsed()) command = "examples";

    try {
        std::optional<jetfield::FieldModel> model;
        if (!model_source.empty()) model = jetfield::load_model(model_source);
        const auto report = jetfield::run(command, model, options);
        const auto json = jetfield::to_json(report);
        if (!common.report_path.empty()) {
            std::ofstream out(common.report_path);
            out << json;
            if (!out) {
                std::cerr << "error: cannot write report to " << common.report_path << "\n";
                return 1;
            }
        }
        std::cout << (common.json ? json : jetfield::to_text(report));
        return report.exit_code;
    } catch (const jetfield::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

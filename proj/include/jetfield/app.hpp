#pragma once

#include "jetfield/charts.hpp"
#include "jetfield/grid.hpp"
#include "jetfield/identities.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jetfield {

struct RunOptions {
    std::string system = "el";           // verify: el | phase | hamilton-phase
    std::string grid_path;               // verify
    double tolerance = 1e-6;             // verify
    MomentumSource momenta = MomentumSource::Legendre;
    std::map<std::string, double> parameters;
    std::string example;                 // examples: one name, or all when empty
    std::optional<std::string> out_dir;  // examples: write files here
};

struct ReportEquation {
    std::string text;
    std::string lhs;
    std::string rhs;
    std::string kind;
};

struct Report {
    std::string command;
    std::string model_digest;
    std::vector<ReportEquation> equations;
    std::vector<CheckResult> checks;
    std::optional<ResidualReport> residuals;
    std::vector<std::string> notes;
    int exit_code = 0;

    [[nodiscard]] std::string status() const { return exit_code == 0 ? "ok" : "failed"; }
};

/// Runs one command: "derive el", "derive phase", "derive hamilton-phase",
/// "legendre", "hamiltonize", "check identities", "check consistency",
/// "verify" or "examples". Engine failures that belong to the answer
/// (a singular Lagrangian, a failed check, residuals over tolerance) are
/// recorded in the report with exit code 2; malformed input throws.
Report run(const std::string& command, const std::optional<FieldModel>& model, const RunOptions& options);

/// Keys in fixed order: command, model_digest, equations, checks, residuals,
/// status, notes.
std::string to_json(const Report& report);
std::string to_text(const Report& report);

}  // namespace jetfield

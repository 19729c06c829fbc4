#pragma once

#include "jetfield/charts.hpp"
#include "jetfield/expr.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jetfield {

struct CheckResult {
    std::string name;
    Verdict verdict = Verdict::Failed;
    std::string detail;
    std::vector<std::string> witnesses;  // offending components or points

    [[nodiscard]] bool passed() const { return verdict != Verdict::Failed; }
};

/// alpha duality: pairing(alpha(u), w) = jet_pairing(u, kappa(w)). Proved
/// symbolically, then confirmed exactly at `trials` random rational points.
CheckResult check_alpha_duality(const ChartSet& charts, int trials = 100, std::uint64_t seed = 1);

/// dl/dy dy + dl/dy_j dy_j = E.dy + sum_j D_j(P_j.dy) as a polynomial identity.
CheckResult check_variational_identity(const FieldModel& model, const ChartSet& charts);

/// kappa^-1 . kappa = id, as matrices and at `trials` random points.
CheckResult check_kappa_roundtrip(const ChartSet& charts, int trials = 100, std::uint64_t seed = 2);

/// beta = R . alpha component by component.
CheckResult check_beta_factorization(const ChartSet& charts);

/// beta* omega_PJdE = -omega_J1P.
CheckResult check_pullback(const ChartSet& charts);

/// Substituting the momentum definitions and their total derivatives into the
/// divergence laws reproduces the Euler-Lagrange residuals.
CheckResult check_phase_el_consistency(const FieldModel& model, const ChartSet& charts);

/// Lagrangian and Hamiltonian phase dynamics agree after the Legendre
/// substitution, equation by equation, and v(lambda(y_j)) = y_j.
/// Fails with a SingularLagrangian or NonQuadratic witness when h cannot be built.
CheckResult check_master_consistency(const FieldModel& model, const ChartSet& charts);

/// The suite run by `check identities`.
std::vector<CheckResult> identity_suite(const FieldModel& model, const ChartSet& charts);

}  // namespace jetfield

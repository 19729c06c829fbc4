#pragma once

#include "jetfield/charts.hpp"
#include "jetfield/expr.hpp"
#include "jetfield/lagrangian.hpp"

#include <string>
#include <vector>

namespace jetfield {

enum class Provenance { UserSupplied, LegendreDerived };

/// Coefficient h of a Hamiltonian section relative to the volume form,
/// a function on P.
struct HamiltonianSection {
    Expr h;
    Provenance provenance = Provenance::LegendreDerived;
};

/// Solution y_a_j = v_a_j(x, y, p) of p = dl/dy_j for a jet-quadratic
/// Lagrangian (n x m). Throws NonQuadratic or SingularLagrangian, the latter
/// carrying the kernel directions of the quadratic part.
DenseMatrix<Expr> inverse_legendre(const FieldModel& model, const ChartSet& charts);

/// h = sum p_a_j v_a_j - l(v) with v from inverse_legendre, normalized.
HamiltonianSection legendre_transform(const FieldModel& model, const ChartSet& charts);

/// The model's own Hamiltonian when present, otherwise the Legendre transform.
HamiltonianSection hamiltonian_of(const FieldModel& model, const ChartSet& charts);

/// dH as a family of PJdE points over P: xi_a = dh/dy_a, v_a_j = dh/dp_a_j.
struct SectionDifferential {
    Coords<Expr> xi;       // n
    DenseMatrix<Expr> v;   // n x m
};

SectionDifferential section_differential(const ChartSet& charts, const HamiltonianSection& H);

/// VsJ1E -> PJdE: (x, y, y_j; E, P) -> (x, y, p := P; xi := -E, v := y_j).
LinearMap r_map(const ChartSet& charts);

/// J1P -> PJdE: xi_a = -sum_k dp_a_k_k, v_a_j = y_a_j, (x, y, p) passed through.
/// Equal to r_map composed after alpha_map.
LinearMap beta_map(const ChartSet& charts);

template <class Scalar>
ChartPoint<Scalar> beta(const ChartSet& charts, const ChartPoint<Scalar>& u)
{
    return apply(beta_map(charts), u);
}

/// Hamilton's phase dynamics beta^-1(dH(P)) over J1P:
///   y_a_j = dh/dp_a_j                     (MomentumInverse)
///   sum_k dp_a_k_k = -dh/dy_a + s rho_a    (DivergenceLaw)
DynamicsSystem hamiltonian_dynamics(const FieldModel& model, const ChartSet& charts, const HamiltonianSection& H,
                                    bool with_sources);

struct FormMismatch {
    std::string row;
    std::string column;
    Rational expected;
    Rational actual;
};

struct PullbackReport {
    bool proved = false;
    std::vector<FormMismatch> mismatches;
};

/// Compares beta* omega_PJdE with -omega_J1P component by component.
PullbackReport pullback_symplectic_check(const ChartSet& charts, const LinearMap& beta);
PullbackReport pullback_symplectic_check(const ChartSet& charts);

}  // namespace jetfield

#pragma once

#include "jetfield/charts.hpp"
#include "jetfield/expr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace jetfield {

/// A vertical covector on J1E with values in top forms: components along dy_a
/// (E) and dy_a_j (P), as coefficients of the volume form.
struct VerticalCovector {
    Coords<Expr> e;        // n
    DenseMatrix<Expr> p;   // n x m
};

enum class EquationClass { MomentumDef, MomentumInverse, DivergenceLaw, EulerLagrange, Constraint };
std::string_view to_string(EquationClass c);

/// lhs = rhs, stored normalized together with the canonical residual lhs - rhs.
struct Equation {
    Expr lhs;
    Expr rhs;
    EquationClass kind;
    Expr residual;

    [[nodiscard]] std::string text() const;
};

Equation make_equation(const Expr& lhs, const Expr& rhs, EquationClass kind);

struct DynamicsSystem {
    Space space;
    std::vector<Equation> equations;
};

/// dL: E_a = dl/dy_a, P_a_j = dl/dy_a_j.
VerticalCovector vertical_differential(const FieldModel& model, const ChartSet& charts);

/// The Lagrangian morphism J1P -> VsJ1E:
/// (x, y, p_a_j, y_a_j, dp_a_j_k) -> (x, y, y_a_j; E_a = sum_l dp_a_l_l, P_a_j = p_a_j).
/// Off-trace momentum jets do not contribute.
LinearMap alpha_map(const ChartSet& charts);

template <class Scalar>
ChartPoint<Scalar> alpha(const ChartSet& charts, const ChartPoint<Scalar>& u)
{
    return apply(alpha_map(charts), u);
}

/// Evaluation of a point of VsJ1E on a vertical vector of J1E (VJ1E):
/// sum_a E_a dy_a + sum_{a,j} P_a_j dy_a_j. Throws BaseMismatch.
template <class Scalar>
Scalar covector_pairing(const ChartSet& charts, const ChartPoint<Scalar>& mu, const ChartPoint<Scalar>& w)
{
    if (mu.space != Space::VsJ1E || w.space != Space::VJ1E)
        throw Error(ErrorKind::ChartMismatch, "covector_pairing expects points of VsJ1E and VJ1E");
    detail::require_same_base(charts, mu, w);
    Scalar total = from_rational<Scalar>(Rational(0));
    for (int a = 0; a < charts.n(); ++a) {
        total = total + charts.at(mu, charts.slot_e(a)) * charts.at(w, charts.variation(a));
        for (int j = 0; j < charts.m(); ++j)
            total = total + charts.at(mu, charts.slot_p(a, j)) * charts.at(w, charts.variation_jet(a, j));
    }
    return total;
}

/// Phase dynamics alpha^-1(dL(J1E)) over J1P:
///   p_a_j = dl/dy_a_j                     (MomentumDef, or Constraint when jet-free)
///   sum_j dp_a_j_j = dl/dy_a + s rho_a     (DivergenceLaw)
/// with rho = 0 unless `with_sources`. Singular Lagrangians are fine.
DynamicsSystem phase_dynamics(const FieldModel& model, const ChartSet& charts, bool with_sources);

/// Total derivative D_j (zero-based j). Acts on base, fiber and first-jet
/// symbols, on variations (D_j dy_a = dy_a_j) and on momenta
/// (D_j p_a_i = dp_a_i_j). Throws OrderOverflow on second-order symbols.
Expr total_derivative(const ChartSet& charts, const Expr& e, int j);

/// Splitting of a covector into its Euler-Lagrange part (on J2E) and its
/// boundary part: E_a = mu.e_a - sum_j D_j mu.p_a_j, P = mu.p.
struct EulerBoundarySplit {
    Coords<Expr> euler;         // n
    DenseMatrix<Expr> boundary; // n x m
};

EulerBoundarySplit ep_split(const ChartSet& charts, const VerticalCovector& mu);

/// Euler-Lagrange equations over J2E: dl/dy_a - sum_j D_j(dl/dy_a_j) + s rho_a = 0,
/// displayed with second-jet terms on the left.
DynamicsSystem euler_lagrange(const FieldModel& model, const ChartSet& charts);

/// Legendre map components p_a_j = dl/dy_a_j as functions on J1E (n x m).
DenseMatrix<Expr> legendre_map(const FieldModel& model, const ChartSet& charts);

}  // namespace jetfield

#include "jetfield/lagrangian.hpp"

namespace jetfield {

std::string_view to_string(EquationClass c)
{
    switch (c) {
        case EquationClass::MomentumDef: return "MomentumDef";
        case EquationClass::MomentumInverse: return "MomentumInverse";
        case EquationClass::DivergenceLaw: return "DivergenceLaw";
        case EquationClass::EulerLagrange: return "EulerLagrange";
        case EquationClass::Constraint: return "Constraint";
    }
    return "?";
}

std::string Equation::text() const
{
    return to_string(lhs) + " = " + to_string(rhs);
}

Equation make_equation(const Expr& lhs, const Expr& rhs, EquationClass kind)
{
    Expr l = normalize(lhs);
    Expr r = normalize(rhs);
    return {l, r, kind, normalize(l - r)};
}

VerticalCovector vertical_differential(const FieldModel& model, const ChartSet& charts)
{
    const int m = charts.m();
    const int n = charts.n();
    VerticalCovector mu{Coords<Expr>(n), DenseMatrix<Expr>(n, m)};
    for (int a = 0; a < n; ++a) {
        mu.e(a) = diff(model.lagrangian, charts.fiber(a));
        for (int j = 0; j < m; ++j) mu.p(a, j) = diff(model.lagrangian, charts.jet(a, j));
    }
    return mu;
}

LinearMap alpha_map(const ChartSet& charts)
{
    const Space from = Space::J1P;
    const Space to = Space::VsJ1E;
    DenseMatrix<Rational> mat = DenseMatrix<Rational>::Zero(charts.dimension(to), charts.dimension(from));
    auto set = [&](const std::string& target, const std::string& source) {
        mat(charts.index(to, target), charts.index(from, source)) = Rational(1);
    };
    for (int i = 0; i < charts.m(); ++i) set(charts.base(i), charts.base(i));
    for (int a = 0; a < charts.n(); ++a) {
        set(charts.fiber(a), charts.fiber(a));
        for (int j = 0; j < charts.m(); ++j) {
            set(charts.jet(a, j), charts.jet(a, j));
            set(charts.slot_p(a, j), charts.momentum(a, j));
            set(charts.slot_e(a), charts.momentum_jet(a, j, j));
        }
    }
    return {from, to, std::move(mat)};
}

namespace {

bool depends_on_jets(const ChartSet& charts, const Expr& e)
{
    for (const auto& s : free_symbols(e)) {
        const auto* info = charts.info(s);
        if (info && info->role == Role::Jet) return true;
    }
    return false;
}

Expr trace(const ChartSet& charts, const ChartPoint<Expr>& alpha_u, int a)
{
    return charts.at(alpha_u, charts.slot_e(a));
}

}  // namespace

DynamicsSystem phase_dynamics(const FieldModel& model, const ChartSet& charts, bool with_sources)
{
    const auto mu = vertical_differential(model, charts);
    const auto image = alpha(charts, charts.symbolic_point(Space::J1P));
    DynamicsSystem out{Space::J1P, {}};
    for (int a = 0; a < charts.n(); ++a)
        for (int j = 0; j < charts.m(); ++j) {
            const auto kind = depends_on_jets(charts, mu.p(a, j)) ? EquationClass::MomentumDef
                                                                   : EquationClass::Constraint;
            out.equations.push_back(make_equation(charts.at(image, charts.slot_p(a, j)), mu.p(a, j), kind));
        }
    for (int a = 0; a < charts.n(); ++a) {
        Expr rhs = mu.e(a);
        if (with_sources) rhs = rhs + Expr(model.source_sign) * model.source(a);
        out.equations.push_back(make_equation(trace(charts, image, a), rhs, EquationClass::DivergenceLaw));
    }
    return out;
}

Expr total_derivative(const ChartSet& charts, const Expr& e, int j)
{
    if (j < 0 || j >= charts.m()) throw Error(ErrorKind::ChartMismatch, "total derivative index out of range");
    Expr acc = 0;
    for (const auto& s : free_symbols(e)) {
        const auto* info = charts.info(s);
        if (!info) continue;  // parameter
        Expr direction;
        switch (info->role) {
            case Role::Base:
                if (info->j != j) continue;
                direction = 1;
                break;
            case Role::Fiber: direction = Expr::symbol(charts.jet(info->a, j)); break;
            case Role::Jet: direction = Expr::symbol(charts.jet2(info->a, info->j, j)); break;
            case Role::Variation: direction = Expr::symbol(charts.variation_jet(info->a, j)); break;
            case Role::Momentum: direction = Expr::symbol(charts.momentum_jet(info->a, info->j, j)); break;
            case Role::Jet2:
            case Role::VariationJet:
            case Role::MomentumJet:
                throw Error(ErrorKind::OrderOverflow, "total derivative of '" + s + "' needs third-order symbols");
            default:
                throw Error(ErrorKind::ChartMismatch, "total derivative is undefined on '" + s + "'");
        }
        acc = acc + direction * diff(e, s);
    }
    return normalize(acc);
}

EulerBoundarySplit ep_split(const ChartSet& charts, const VerticalCovector& mu)
{
    EulerBoundarySplit out{Coords<Expr>(charts.n()), DenseMatrix<Expr>(charts.n(), charts.m())};
    for (int a = 0; a < charts.n(); ++a) {
        Expr divergence = 0;
        for (int j = 0; j < charts.m(); ++j) {
            out.boundary(a, j) = normalize(mu.p(a, j));
            divergence = divergence + total_derivative(charts, mu.p(a, j), j);
        }
        out.euler(a) = normalize(mu.e(a) - divergence);
    }
    return out;
}

DynamicsSystem euler_lagrange(const FieldModel& model, const ChartSet& charts)
{
    const auto split = ep_split(charts, vertical_differential(model, charts));
    DynamicsSystem out{Space::J2E, {}};
    for (int a = 0; a < charts.n(); ++a) {
        // residual R = sum_j D_j P_a_j - dl/dy_a - s rho_a; principal part on the left
        const Expr residual = normalize(-split.euler(a) - Expr(model.source_sign) * model.source(a));
        std::vector<Expr> principal;
        std::vector<Expr> rest;
        const auto terms = residual.kind() == ExprKind::Sum ? residual.children() : std::vector<Expr>{residual};
        for (const auto& t : terms) {
            bool second = false;
            for (const auto& s : free_symbols(t)) {
                const auto* info = charts.info(s);
                second = second || (info && info->role == Role::Jet2);
            }
            (second ? principal : rest).push_back(t);
        }
        if (principal.empty())
            out.equations.push_back(make_equation(residual, 0, EquationClass::EulerLagrange));
        else
            out.equations.push_back(make_equation(Expr::sum(principal), -Expr::sum(rest), EquationClass::EulerLagrange));
    }
    return out;
}

DenseMatrix<Expr> legendre_map(const FieldModel& model, const ChartSet& charts)
{
    return vertical_differential(model, charts).p;
}

}  // namespace jetfield

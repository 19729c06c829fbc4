#include "jetfield/hamiltonian.hpp"

#include "jetfield/linalg.hpp"

namespace jetfield {

namespace {

std::vector<std::string> jet_symbols(const ChartSet& charts)
{
    std::vector<std::string> out;
    for (int a = 0; a < charts.n(); ++a)
        for (int j = 0; j < charts.m(); ++j) out.push_back(charts.jet(a, j));
    return out;
}

bool mentions_any(const Expr& e, const std::vector<std::string>& names)
{
    for (const auto& s : free_symbols(e))
        if (std::find(names.begin(), names.end(), s) != names.end()) return true;
    return false;
}

}  // namespace

DenseMatrix<Expr> inverse_legendre(const FieldModel& model, const ChartSet& charts)
{
    const auto jets = jet_symbols(charts);
    const auto size = static_cast<Eigen::Index>(jets.size());
    std::map<std::string, Expr> at_zero;
    for (const auto& s : jets) at_zero.emplace(s, Expr(0));

    // l = v^T A v / 2 + b^T v + c with A, b, c jet-free
    DenseMatrix<Expr> hessian(size, size);
    Coords<Expr> linear(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        const Expr first = diff(model.lagrangian, jets[i]);
        linear(i) = substitute(first, at_zero);
        for (Eigen::Index k = 0; k < size; ++k) {
            hessian(i, k) = diff(first, jets[k]);
            if (mentions_any(hessian(i, k), jets))
                throw Error(ErrorKind::NonQuadratic, "lagrangian is not quadratic in the jet coordinates");
        }
    }
    Expr quadratic = substitute(model.lagrangian, at_zero);
    for (Eigen::Index i = 0; i < size; ++i) {
        const Expr vi = Expr::symbol(jets[i]);
        quadratic = quadratic + linear(i) * vi;
        for (Eigen::Index k = 0; k < size; ++k)
            quadratic = quadratic + Expr(Rational(1, 2)) * hessian(i, k) * vi * Expr::symbol(jets[k]);
    }
    if (!normalize(quadratic - model.lagrangian).is_zero())
        throw Error(ErrorKind::NonQuadratic, "lagrangian is not quadratic in the jet coordinates");

    auto inv = inverse<Expr>(hessian);
    if (!inv) {
        const auto kernel = null_space<Expr>(hessian);
        std::vector<std::string> directions;
        for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
            Expr dir = 0;
            for (Eigen::Index r = 0; r < kernel.rows(); ++r) dir = dir + kernel(r, c) * Expr::symbol(jets[r]);
            directions.push_back(to_string(normalize(dir)));
        }
        throw SingularLagrangianError(std::move(directions));
    }

    DenseMatrix<Expr> v(charts.n(), charts.m());
    for (Eigen::Index i = 0; i < size; ++i) {
        Expr acc = 0;
        for (Eigen::Index k = 0; k < size; ++k) {
            const int a = static_cast<int>(k) / charts.m();
            const int j = static_cast<int>(k) % charts.m();
            acc = acc + (*inv)(i, k) * (Expr::symbol(charts.momentum(a, j)) - linear(k));
        }
        v(static_cast<int>(i) / charts.m(), static_cast<int>(i) % charts.m()) = normalize(acc);
    }
    return v;
}

HamiltonianSection legendre_transform(const FieldModel& model, const ChartSet& charts)
{
    const auto v = inverse_legendre(model, charts);
    std::map<std::string, Expr> jets_of_p;
    Expr pv = 0;
    for (int a = 0; a < charts.n(); ++a)
        for (int j = 0; j < charts.m(); ++j) {
            jets_of_p.emplace(charts.jet(a, j), v(a, j));
            pv = pv + Expr::symbol(charts.momentum(a, j)) * v(a, j);
        }
    return {normalize(pv - substitute(model.lagrangian, jets_of_p)), Provenance::LegendreDerived};
}

HamiltonianSection hamiltonian_of(const FieldModel& model, const ChartSet& charts)
{
    if (model.hamiltonian) return {normalize(*model.hamiltonian), Provenance::UserSupplied};
    return legendre_transform(model, charts);
}

SectionDifferential section_differential(const ChartSet& charts, const HamiltonianSection& H)
{
    SectionDifferential out{Coords<Expr>(charts.n()), DenseMatrix<Expr>(charts.n(), charts.m())};
    for (int a = 0; a < charts.n(); ++a) {
        out.xi(a) = diff(H.h, charts.fiber(a));
        for (int j = 0; j < charts.m(); ++j) out.v(a, j) = diff(H.h, charts.momentum(a, j));
    }
    return out;
}

LinearMap r_map(const ChartSet& charts)
{
    const Space from = Space::VsJ1E;
    const Space to = Space::PJdE;
    DenseMatrix<Rational> mat = DenseMatrix<Rational>::Zero(charts.dimension(to), charts.dimension(from));
    auto set = [&](const std::string& target, const std::string& source, int sign) {
        mat(charts.index(to, target), charts.index(from, source)) = Rational(sign);
    };
    for (int i = 0; i < charts.m(); ++i) set(charts.base(i), charts.base(i), 1);
    for (int a = 0; a < charts.n(); ++a) {
        set(charts.fiber(a), charts.fiber(a), 1);
        set(charts.covector(a), charts.slot_e(a), -1);
        for (int j = 0; j < charts.m(); ++j) {
            set(charts.momentum(a, j), charts.slot_p(a, j), 1);
            set(charts.velocity(a, j), charts.jet(a, j), 1);
        }
    }
    return {from, to, std::move(mat)};
}

LinearMap beta_map(const ChartSet& charts)
{
    const Space from = Space::J1P;
    const Space to = Space::PJdE;
    DenseMatrix<Rational> mat = DenseMatrix<Rational>::Zero(charts.dimension(to), charts.dimension(from));
    auto set = [&](const std::string& target, const std::string& source, int sign) {
        mat(charts.index(to, target), charts.index(from, source)) = Rational(sign);
    };
    for (int i = 0; i < charts.m(); ++i) set(charts.base(i), charts.base(i), 1);
    for (int a = 0; a < charts.n(); ++a) {
        set(charts.fiber(a), charts.fiber(a), 1);
        for (int j = 0; j < charts.m(); ++j) {
            set(charts.momentum(a, j), charts.momentum(a, j), 1);
            set(charts.velocity(a, j), charts.jet(a, j), 1);
            set(charts.covector(a), charts.momentum_jet(a, j, j), -1);
        }
    }
    return {from, to, std::move(mat)};
}

DynamicsSystem hamiltonian_dynamics(const FieldModel& model, const ChartSet& charts, const HamiltonianSection& H,
                                    bool with_sources)
{
    const auto dh = section_differential(charts, H);
    const auto image = beta(charts, charts.symbolic_point(Space::J1P));
    DynamicsSystem out{Space::J1P, {}};
    for (int a = 0; a < charts.n(); ++a)
        for (int j = 0; j < charts.m(); ++j)
            out.equations.push_back(make_equation(charts.at(image, charts.velocity(a, j)), dh.v(a, j),
                                                  EquationClass::MomentumInverse));
    for (int a = 0; a < charts.n(); ++a) {
        // xi-slot of beta is minus the trace: -trace + s rho = dh/dy, rearranged
        Expr rhs = -dh.xi(a);
        if (with_sources) rhs = rhs + Expr(model.source_sign) * model.source(a);
        out.equations.push_back(
            make_equation(-charts.at(image, charts.covector(a)), rhs, EquationClass::DivergenceLaw));
    }
    return out;
}

PullbackReport pullback_symplectic_check(const ChartSet& charts, const LinearMap& beta)
{
    const auto forms = canonical_forms(charts);
    const auto pulled = pullback(forms.omega_pjde, beta);
    PullbackReport report;
    const auto& syms = charts.symbols(Space::J1P);
    for (Eigen::Index r = 0; r < pulled.table.rows(); ++r)
        for (Eigen::Index c = 0; c < pulled.table.cols(); ++c) {
            const Rational expected = -forms.omega_j1p.table(r, c);
            if (pulled.table(r, c) != expected)
                report.mismatches.push_back({syms[r], syms[c], expected, pulled.table(r, c)});
        }
    report.proved = report.mismatches.empty();
    return report;
}

PullbackReport pullback_symplectic_check(const ChartSet& charts)
{
    return pullback_symplectic_check(charts, beta_map(charts));
}

}  // namespace jetfield

#include "jetfield/identities.hpp"

#include "jetfield/hamiltonian.hpp"
#include "jetfield/lagrangian.hpp"

#include <random>

namespace jetfield {

namespace {

Verdict worst(Verdict a, Verdict b)
{
    return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

Rational random_rational(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long long> num(-50, 50);
    std::uniform_int_distribution<long long> den(1, 12);
    return Rational(num(rng), den(rng));
}

ChartPoint<Rational> random_point(const ChartSet& charts, Space s, std::mt19937_64& rng)
{
    ChartPoint<Rational> p{s, Coords<Rational>(charts.dimension(s))};
    for (Eigen::Index i = 0; i < p.coords.size(); ++i) p.coords(i) = random_rational(rng);
    return p;
}

/// Copies the (x, y, y_j) coordinates of `from` into `to`.
template <class Scalar>
void share_base(const ChartSet& charts, const ChartPoint<Scalar>& from, ChartPoint<Scalar>& to)
{
    auto copy = [&](const std::string& s) { to.coords(charts.index(to.space, s)) = charts.at(from, s); };
    for (int i = 0; i < charts.m(); ++i) copy(charts.base(i));
    for (int a = 0; a < charts.n(); ++a) {
        copy(charts.fiber(a));
        for (int j = 0; j < charts.m(); ++j) copy(charts.jet(a, j));
    }
}

std::string shape(const ChartSet& charts)
{
    return "m=" + std::to_string(charts.m()) + " n=" + std::to_string(charts.n());
}

/// Compares equation residuals and records a witness on mismatch.
void compare(CheckResult& out, const std::string& label, const Expr& lhs, const Expr& rhs)
{
    const Verdict v = equivalent(lhs, rhs);
    out.verdict = worst(out.verdict, v);
    if (v == Verdict::Failed) out.witnesses.push_back(label + ": " + to_string(normalize(lhs - rhs)) + " != 0");
}

}  // namespace

CheckResult check_alpha_duality(const ChartSet& charts, int trials, std::uint64_t seed)
{
    CheckResult out{"alpha-duality", Verdict::Proved, "", {}};
    const auto u = charts.symbolic_point(Space::J1P);
    const auto w = charts.symbolic_point(Space::VJ1E);
    const Expr lhs = covector_pairing(charts, alpha(charts, u), w);
    const Expr rhs = jet_pairing(charts, u, kappa_flip(charts, w));
    compare(out, "symbolic", lhs, rhs);

    std::mt19937_64 rng(seed);
    int agreed = 0;
    for (int t = 0; t < trials; ++t) {
        const auto un = random_point(charts, Space::J1P, rng);
        auto wn = random_point(charts, Space::VJ1E, rng);
        share_base(charts, un, wn);
        const Rational l = covector_pairing(charts, alpha(charts, un), wn);
        const Rational r = jet_pairing(charts, un, kappa_flip(charts, wn));
        if (l == r)
            ++agreed;
        else if (out.witnesses.size() < 5)
            out.witnesses.push_back("trial " + std::to_string(t) + ": " + l.str() + " vs " + r.str());
    }
    if (agreed != trials) out.verdict = Verdict::Failed;
    out.detail = shape(charts) + ", symbolic identity plus " + std::to_string(agreed) + "/" +
                 std::to_string(trials) + " exact random points";
    return out;
}

CheckResult check_variational_identity(const FieldModel& model, const ChartSet& charts)
{
    CheckResult out{"variational-identity", Verdict::Proved, "", {}};
    const auto mu = vertical_differential(model, charts);
    const auto split = ep_split(charts, mu);
    Expr lhs = 0;
    Expr rhs = 0;
    for (int a = 0; a < charts.n(); ++a) {
        const Expr dy = Expr::symbol(charts.variation(a));
        lhs = lhs + mu.e(a) * dy;
        rhs = rhs + split.euler(a) * dy;
        for (int j = 0; j < charts.m(); ++j) lhs = lhs + mu.p(a, j) * Expr::symbol(charts.variation_jet(a, j));
    }
    for (int j = 0; j < charts.m(); ++j) {
        Expr flux = 0;
        for (int a = 0; a < charts.n(); ++a) flux = flux + split.boundary(a, j) * Expr::symbol(charts.variation(a));
        rhs = rhs + total_derivative(charts, flux, j);
    }
    compare(out, "identity", lhs, rhs);
    out.detail = "dL = E + d_M P on " + shape(charts);
    return out;
}

CheckResult check_kappa_roundtrip(const ChartSet& charts, int trials, std::uint64_t seed)
{
    CheckResult out{"kappa-roundtrip", Verdict::Proved, "", {}};
    const auto round = compose(kappa_inverse_map(charts), kappa_map(charts));
    const auto dim = charts.dimension(Space::VJ1E);
    if (round.matrix != DenseMatrix<Rational>::Identity(dim, dim)) {
        out.verdict = Verdict::Failed;
        out.witnesses.push_back("kappa^-1 kappa is not the identity matrix");
    }
    std::mt19937_64 rng(seed);
    int agreed = 0;
    for (int t = 0; t < trials; ++t) {
        const auto w = random_point(charts, Space::VJ1E, rng);
        const auto back = kappa_unflip(charts, kappa_flip(charts, w));
        if (back.coords == w.coords) ++agreed;
    }
    if (agreed != trials) out.verdict = Verdict::Failed;
    out.detail = shape(charts) + ", " + std::to_string(agreed) + "/" + std::to_string(trials) + " random points";
    return out;
}

CheckResult check_beta_factorization(const ChartSet& charts)
{
    CheckResult out{"beta-factorization", Verdict::Proved, "", {}};
    const auto u = charts.symbolic_point(Space::J1P);
    const auto direct = beta(charts, u);
    const auto factored = apply(r_map(charts), alpha(charts, u));
    const auto& syms = charts.symbols(Space::PJdE);
    for (std::size_t i = 0; i < syms.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        compare(out, syms[i], direct.coords(k), factored.coords(k));
    }
    out.detail = "beta = R . alpha on " + shape(charts);
    return out;
}

CheckResult check_pullback(const ChartSet& charts)
{
    CheckResult out{"symplectic-pullback", Verdict::Proved, "", {}};
    const auto report = pullback_symplectic_check(charts);
    if (!report.proved) {
        out.verdict = Verdict::Failed;
        for (const auto& mm : report.mismatches)
            out.witnesses.push_back("(" + mm.row + ", " + mm.column + "): expected " + mm.expected.str() + ", got " +
                                    mm.actual.str());
    }
    out.detail = "beta* omega_PJdE = -omega_J1P on " + shape(charts);
    return out;
}

CheckResult check_phase_el_consistency(const FieldModel& model, const ChartSet& charts)
{
    CheckResult out{"phase-el-consistency", Verdict::Proved, "", {}};
    const auto phase = phase_dynamics(model, charts, true);
    const auto el = euler_lagrange(model, charts);
    const auto lambda = legendre_map(model, charts);
    std::map<std::string, Expr> momenta;
    for (int a = 0; a < charts.n(); ++a)
        for (int j = 0; j < charts.m(); ++j) {
            momenta.emplace(charts.momentum(a, j), lambda(a, j));
            for (int k = 0; k < charts.m(); ++k)
                momenta.emplace(charts.momentum_jet(a, j, k), total_derivative(charts, lambda(a, j), k));
        }
    const auto first_law = static_cast<std::size_t>(charts.n() * charts.m());
    for (int a = 0; a < charts.n(); ++a) {
        const Expr substituted = substitute(phase.equations[first_law + a].residual, momenta);
        compare(out, "fiber " + std::to_string(a + 1), substituted, el.equations[a].residual);
    }
    out.detail = "divergence laws with p = dl/dy_j reproduce the Euler-Lagrange system";
    return out;
}

CheckResult check_master_consistency(const FieldModel& model, const ChartSet& charts)
{
    CheckResult out{"master-consistency", Verdict::Proved, "", {}};
    HamiltonianSection H;
    DenseMatrix<Expr> v;
    try {
        H = hamiltonian_of(model, charts);
        v = inverse_legendre(model, charts);
    } catch (const Error& e) {
        out.verdict = Verdict::Failed;
        out.witnesses.push_back(e.what());
        out.detail = "no Hamiltonian counterpart";
        return out;
    }
    const auto lambda = legendre_map(model, charts);
    const auto lag = phase_dynamics(model, charts, true);
    const auto ham = hamiltonian_dynamics(model, charts, H, true);

    std::map<std::string, Expr> p_of_jets;
    std::map<std::string, Expr> jets_of_p;
    for (int a = 0; a < charts.n(); ++a)
        for (int j = 0; j < charts.m(); ++j) {
            p_of_jets.emplace(charts.momentum(a, j), lambda(a, j));
            jets_of_p.emplace(charts.jet(a, j), v(a, j));
        }

    for (std::size_t i = 0; i < lag.equations.size(); ++i) {
        const auto& le = lag.equations[i];
        const auto& he = ham.equations[i];
        const std::string label = std::string(to_string(le.kind)) + " #" + std::to_string(i + 1);
        if (le.kind == EquationClass::DivergenceLaw) {
            compare(out, label + " (p = lambda)", substitute(he.residual, p_of_jets), le.residual);
            compare(out, label + " (y_j = v)", substitute(le.residual, jets_of_p), he.residual);
        } else {
            // each system's momentum relation holds on the other's solutions
            compare(out, label + " (v . lambda)", substitute(he.residual, p_of_jets), 0);
            compare(out, label + " (lambda . v)", substitute(le.residual, jets_of_p), 0);
        }
    }
    out.detail = std::string(H.provenance == Provenance::UserSupplied ? "supplied" : "Legendre") +
                 " Hamiltonian, " + std::to_string(lag.equations.size()) + " equations compared";
    return out;
}

std::vector<CheckResult> identity_suite(const FieldModel& model, const ChartSet& charts)
{
    return {
        check_alpha_duality(charts),
        check_variational_identity(model, charts),
        check_beta_factorization(charts),
        check_pullback(charts),
        check_kappa_roundtrip(charts),
        check_phase_el_consistency(model, charts),
    };
}

}  // namespace jetfield

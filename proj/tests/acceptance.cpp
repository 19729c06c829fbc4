// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "jetfield/app.hpp"
#include "jetfield/error.hpp"
#include "jetfield/grid.hpp"
#include "jetfield/hamiltonian.hpp"
#include "jetfield/identities.hpp"
#include "jetfield/lagrangian.hpp"
#include "jetfield/model_io.hpp"
#include "jetfield/parser.hpp"
#include "models.hpp"
#include "oracles.hpp"
#include "random_exprs.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace jetfield;
using testing_support::make_model;

namespace {

/// Collects the first few failure reasons of one criterion.
class Criterion {
public:
    void expect(bool ok, const std::string& what)
    {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) reasons_ << (failures_ > 1 ? "; " : "") << what;
    }
    [[nodiscard]] bool passed() const { return failures_ == 0; }
    [[nodiscard]] std::string reasons() const { return reasons_.str(); }

private:
    int failures_ = 0;
    std::ostringstream reasons_;
};

Expr P(const std::string& text) { return normalize(parse_expr(text)); }

/// Normalize-equal comparison of a report's equations against "lhs = rhs" texts, in order.
bool same_equations(const std::vector<ReportEquation>& got, const std::vector<std::string>& expected)
{
    if (got.size() != expected.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i) {
        const auto at = expected[i].find(" = ");
        if (P(got[i].lhs) != P(expected[i].substr(0, at))) return false;
        if (P(got[i].rhs) != P(expected[i].substr(at + 3))) return false;
    }
    return true;
}

bool same_equations(const DynamicsSystem& system, const std::vector<std::string>& expected)
{
    std::vector<ReportEquation> got;
    for (const auto& eq : system.equations) got.push_back({eq.text(), to_string(eq.lhs), to_string(eq.rhs), ""});
    return same_equations(got, expected);
}

bool proved(const CheckResult& c) { return c.verdict == Verdict::Proved; }

void electrostatics_end_to_end(Criterion& c)
{
    const auto model = builtin_model("electrostatics3d");
    const RunOptions options;

    const auto phase = run("derive phase", model, options);
    c.expect(phase.exit_code == 0 &&
                 same_equations(phase.equations, {"p1_1 = y1_1", "p1_2 = y1_2", "p1_3 = y1_3",
                                                  "dp1_1_1 + dp1_2_2 + dp1_3_3 = rho"}),
             "derive phase");

    const auto el = run("derive el", model, options);
    c.expect(el.exit_code == 0 && same_equations(el.equations, {"y1_1_1 + y1_2_2 + y1_3_3 = rho"}), "derive el");

    const auto ham = run("hamiltonize", model, options);
    c.expect(ham.exit_code == 0 && ham.equations.size() == 1 &&
                 P(ham.equations[0].rhs) == P("(p1_1^2 + p1_2^2 + p1_3^2)/2"),
             "hamiltonize");

    const auto hp = run("derive hamilton-phase", model, options);
    c.expect(hp.exit_code == 0 && same_equations(hp.equations, {"y1_1 = p1_1", "y1_2 = p1_2", "y1_3 = p1_3",
                                                                "dp1_1_1 + dp1_2_2 + dp1_3_3 = rho"}),
             "derive hamilton-phase");
}

void mechanics_reduction(Criterion& c)
{
    const auto model = builtin_model("oscillator1d");
    const ChartSet charts(model);
    const auto el = euler_lagrange(model, charts);
    c.expect(same_equations(el, {"y1_1_1 = -y1"}), "Euler-Lagrange equation");
    c.expect(legendre_transform(model, charts).h == P("p1_1^2/2 + y1^2/2"), "Hamiltonian");
    c.expect(same_equations(hamiltonian_dynamics(model, charts, legendre_transform(model, charts), false),
                            {"y1_1 = p1_1", "dp1_1_1 = -y1"}),
             "Hamilton equations");

    // The gradient of the discrete action, divided by h, approaches -R where R
    // is the derived residual lhs - rhs.
    const int N = 2001;
    const double h = 2.0 / (N - 1);
    auto phi = [](double x) { return 0.7 * std::sin(1.3 * x) + 0.2 * x * x; };
    auto phi_xx = [](double x) { return -0.7 * 1.69 * std::sin(1.3 * x) + 0.4; };
    std::vector<double> y(N);
    for (int i = 0; i < N; ++i) y[i] = phi(i * h);
    const testing_support::DiscreteAction action{
        1, {N}, {h}, [](double u, const std::vector<double>& g) { return g[0] * g[0] / 2 - u * u / 2; }};
    const CompiledExpr residual(el.equations.at(0).residual, std::vector<std::string>{"y1", "y1_1_1"});
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> pick(5, N - 6);
    double worst = 0;
    for (int t = 0; t < 10; ++t) {
        const int i = pick(rng);
        const double x = i * h;
        const double discrete = action.gradient(y, {i}, 1e-4) / h;
        worst = std::max(worst, std::abs(discrete + residual(std::vector<double>{phi(x), phi_xx(x)})));
    }
    c.expect(worst <= 1e-6, "discrete action gradient differs by " + std::to_string(worst));
}

void identity_suite_criterion(Criterion& c)
{
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 2; ++n) {
            const ChartSet charts(make_model(m, n, "0"));
            const auto tag = " m=" + std::to_string(m) + " n=" + std::to_string(n);
            c.expect(proved(check_alpha_duality(charts, 100)), "alpha duality" + tag);
            c.expect(proved(check_kappa_roundtrip(charts, 100)), "kappa round trip" + tag);
            c.expect(proved(check_beta_factorization(charts)), "beta = R . alpha" + tag);
        }

    std::vector<FieldModel> models;
    for (const char* name : {"electrostatics3d", "wave2d", "oscillator1d"}) models.push_back(builtin_model(name));
    std::mt19937_64 rng(12);
    for (int t = 0; t < 10; ++t) {
        FieldModel model = make_model(1 + t % 3, 1 + t % 2, "0");
        const ChartSet charts(model);
        model.lagrangian = testing_support::random_polynomial(rng, charts.symbols(Space::J1E), 3, 8);
        models.push_back(model);
    }
    for (const auto& model : models)
        c.expect(proved(check_variational_identity(model, ChartSet(model))), "variational identity " + model.name);

    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            c.expect(proved(check_pullback(ChartSet(make_model(m, n, "0")))),
                     "pullback m=" + std::to_string(m) + " n=" + std::to_string(n));
}

void master_consistency(Criterion& c)
{
    for (const auto& name : builtin_names()) {
        const auto model = builtin_model(name);
        c.expect(proved(check_master_consistency(model, ChartSet(model))), name);
    }
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const int m = 1 + t % 3;
        const int n = 1 + (t / 3) % 3;
        FieldModel model = make_model(m, n, "0");
        const ChartSet charts(model);
        const int size = m * n;
        const auto A = testing_support::random_spd(rng, size);
        std::vector<Expr> v;
        for (int a = 0; a < n; ++a)
            for (int j = 0; j < m; ++j) v.push_back(Expr::symbol(charts.jet(a, j)));
        Expr l = testing_support::random_polynomial(rng, {"x1", "y1"}, 2, 3);
        for (int i = 0; i < size; ++i) {
            l = l + Expr(testing_support::small_rational(rng)) * Expr::symbol("y1") * v[i];
            for (int k = 0; k < size; ++k) l = l + Expr(A(i, k) / Rational(2)) * v[i] * v[k];
        }
        model.lagrangian = normalize(l);
        c.expect(proved(check_master_consistency(model, charts)), "random SPD model " + std::to_string(t));
    }
}

void singular_behavior(Criterion& c)
{
    const auto model = make_model(1, 1, "y1_1");
    const ChartSet charts(model);
    const auto phase = phase_dynamics(model, charts, false);
    c.expect(same_equations(phase, {"p1_1 = 1", "dp1_1_1 = 0"}), "phase system");
    c.expect(phase.equations.size() == 2 && phase.equations[0].kind == EquationClass::Constraint &&
                 phase.equations[1].kind == EquationClass::DivergenceLaw,
             "equation classes");

    const auto ham = run("hamiltonize", model, RunOptions{});
    c.expect(ham.exit_code == 2 && ham.notes.size() == 1 && ham.notes[0].rfind("SingularLagrangian", 0) == 0,
             "hamiltonize report");
    bool threw = false;
    try {
        (void)legendre_transform(model, charts);
    } catch (const SingularLagrangianError& e) {
        threw = e.directions() == std::vector<std::string>{"y1_1"};
    }
    c.expect(threw, "SingularLagrangian with direction y1_1");
    c.expect(run("derive phase", model, RunOptions{}).exit_code == 0, "derive phase exit code");
}

void numeric_residuals(Criterion& c)
{
    {
        const auto model = builtin_model("electrostatics3d");
        const ChartSet charts(model);
        const GridGeometry cube{{21, 21, 21}, {-1, -1, -1}, {1, 1, 1}};
        const auto grid =
            sample(cube, {"y1"}, {[](auto x) { return x[0] * x[0] + x[1] * x[1] - 2 * x[2] * x[2]; }});
        const auto r = residuals(euler_lagrange(model, charts), model, charts, grid, MomentumSource::Legendre, 1e-9,
                                 {{"rho", 0.0}});
        c.expect(r.passed && r.entries.at(0).max_abs <= 1e-9, "harmonic electrostatics residual");
    }
    {
        const auto model = builtin_model("wave2d");
        const ChartSet charts(model);
        const auto el = euler_lagrange(model, charts);
        auto phi = [](auto x) { return std::sin(x[0] - x[1]); };
        const auto square = sample({{101, 101}, {0, 0}, {2, 2}}, {"y1"}, {phi});
        const double e = residuals(el, model, charts, square, MomentumSource::Legendre, 5e-3).entries.at(0).max_abs;
        c.expect(e <= 5e-3, "wave residual " + std::to_string(e));

        // On equal spacings the two second differences of sin(x1 - x2) carry
        // identical truncation errors that cancel, so the order is measured
        // with unequal spacings.
        const auto coarse = sample({{101, 101}, {0, 0}, {2, 1}}, {"y1"}, {phi});
        const auto fine = sample({{201, 201}, {0, 0}, {2, 1}}, {"y1"}, {phi});
        const double e1 = residuals(el, model, charts, coarse, MomentumSource::Legendre, 5e-3).entries.at(0).max_abs;
        const double e2 = residuals(el, model, charts, fine, MomentumSource::Legendre, 5e-3).entries.at(0).max_abs;
        const double ratio = e1 / e2;
        c.expect(e1 <= 5e-3 && ratio >= 3.5 && ratio <= 4.5, "convergence ratio " + std::to_string(ratio));
    }
    {
        const auto model = builtin_model("laplace2d");
        const ChartSet charts(model);
        const auto grid = sample({{11, 11}, {0, 0}, {1, 1}}, {"y1"}, {[](auto x) { return x[0] * x[0]; }});
        const auto r = residuals(euler_lagrange(model, charts), model, charts, grid, MomentumSource::Legendre, 1e-6);
        c.expect(!r.passed && r.entries.at(0).max_abs >= 1.0, "negative control");
    }
}

void null_lagrangians(Criterion& c)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 10; ++t) {
        const int m = 1 + t % 3;
        FieldModel model = make_model(m, 2, "0");
        const ChartSet charts(model);
        std::vector<std::string> xy;
        for (int i = 0; i < m; ++i) xy.push_back(charts.base(i));
        xy.push_back("y1");
        xy.push_back("y2");
        Expr l = 0;
        for (int j = 0; j < m; ++j)
            l = l + total_derivative(charts, testing_support::random_polynomial(rng, xy, 3, 6), j);
        model.lagrangian = normalize(l);
        bool null = !model.lagrangian.is_zero();
        for (const auto& eq : euler_lagrange(model, charts).equations) null = null && eq.residual.is_zero();
        c.expect(null, "total-derivative Lagrangian " + std::to_string(t));
    }
}

}  // namespace

int main()
{
    struct Entry {
        int number;
        const char* title;
        double budget_seconds;  // 0 when the criterion sets no runtime limit
        std::function<void(Criterion&)> body;
    };
    const std::vector<Entry> criteria{
        {1, "electrostatics end to end", 1.0, electrostatics_end_to_end},
        {2, "mechanics reduction", 1.0, mechanics_reduction},
        {3, "identity suite", 10.0, identity_suite_criterion},
        {4, "master consistency", 10.0, master_consistency},
        {5, "singular Lagrangian", 0.0, singular_behavior},
        {6, "numeric residuals", 5.0, numeric_residuals},
        {7, "null Lagrangians", 0.0, null_lagrangians},
    };

    bool all = true;
    for (const auto& entry : criteria) {
        Criterion c;
        const auto start = std::chrono::steady_clock::now();
        try {
            entry.body(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (entry.budget_seconds > 0)
            c.expect(seconds < entry.budget_seconds, "runtime over " + std::to_string(entry.budget_seconds) + " s");
        all = all && c.passed();
        std::printf("%s criterion %d: %s (%.3f s)%s%s\n", c.passed() ? "PASS" : "FAIL", entry.number, entry.title,
                    seconds, c.passed() ? "" : " -- ", c.reasons().c_str());
    }
    return all ? 0 : 1;
}

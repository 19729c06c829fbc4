#include "jetfield/error.hpp"
#include "jetfield/grid.hpp"
#include "models.hpp"
#include "random_exprs.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace jetfield;
using testing_support::make_model;

namespace {

double max_interior_error(const GridGeometry& g, const Eigen::ArrayXd& values,
                          const std::function<double(std::span<const double>)>& exact, int layer = 1)
{
    double worst = 0;
    std::vector<double> x(g.dimension());
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        if (!g.interior(k, layer)) continue;
        const auto idx = g.unflatten(k);
        for (int d = 0; d < g.dimension(); ++d) x[d] = g.coordinate(d, idx[d]);
        worst = std::max(worst, std::abs(values(k) - exact(x)));
    }
    return worst;
}

GridGeometry cube(int m, int points, double lo, double hi)
{
    return {std::vector<int>(m, points), std::vector<double>(m, lo), std::vector<double>(m, hi)};
}

}  // namespace

TEST_CASE("finite-difference jets are exact on constants, affine and quadratic fields")
{
    const ChartSet charts(make_model(2, 1, "0"));
    const auto g = cube(2, 9, -1.0, 1.5);
    {
        const auto grid = sample(g, {"y1"}, {[](std::span<const double>) { return 3.25; }});
        const auto jets = fd_jets(charts, grid, 2);
        for (const auto* s : {"y1_1", "y1_2", "y1_1_1", "y1_1_2", "y1_2_2"})
            CHECK(max_interior_error(g, jets.at(s), [](auto) { return 0.0; }) == 0.0);
    }
    {
        const auto grid = sample(g, {"y1"}, {[](std::span<const double> x) { return x[0]; }});
        const auto jets = fd_jets(charts, grid, 1);
        CHECK(max_interior_error(g, jets.at("y1_1"), [](auto) { return 1.0; }) <= 1e-15);
        CHECK(max_interior_error(g, jets.at("y1_2"), [](auto) { return 0.0; }) == 0.0);
        CHECK(std::isnan(jets.at("y1_1")(0)));
    }
    {
        const auto grid = sample(g, {"y1"}, {[](std::span<const double> x) { return x[0] * x[0]; }});
        const auto jets = fd_jets(charts, grid, 2);
        CHECK(max_interior_error(g, jets.at("y1_1"), [](auto x) { return 2 * x[0]; }) <= 1e-12);
        CHECK(max_interior_error(g, jets.at("y1_1_1"), [](auto) { return 2.0; }) <= 1e-12);
    }
}

TEST_CASE("finite-difference jets are exact on random per-axis quadratics")
{
    std::mt19937_64 rng(17);
    const ChartSet charts(make_model(2, 1, "0"));
    const auto g = cube(2, 11, -1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        // f = sum c_ab x1^a x2^b with a, b <= 2
        double c[3][3];
        for (auto& row : c)
            for (auto& v : row) v = testing_support::small_rational(rng).to_double();
        auto f = [&](std::span<const double> x) {
            double s = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) s += c[a][b] * std::pow(x[0], a) * std::pow(x[1], b);
            return s;
        };
        // analytic partials written out by the power rule
        auto d = [&](int da, int db) {
            return [&c, da, db](std::span<const double> x) {
                double s = 0;
                for (int a = da; a < 3; ++a)
                    for (int b = db; b < 3; ++b) {
                        double coeff = c[a][b];
                        for (int k = 0; k < da; ++k) coeff *= a - k;
                        for (int k = 0; k < db; ++k) coeff *= b - k;
                        s += coeff * std::pow(x[0], a - da) * std::pow(x[1], b - db);
                    }
                return s;
            };
        };
        const auto jets = fd_jets(charts, sample(g, {"y1"}, {f}), 2);
        CHECK(max_interior_error(g, jets.at("y1_1"), d(1, 0)) <= 1e-12);
        CHECK(max_interior_error(g, jets.at("y1_2"), d(0, 1)) <= 1e-12);
        CHECK(max_interior_error(g, jets.at("y1_1_1"), d(2, 0)) <= 1e-12);
        CHECK(max_interior_error(g, jets.at("y1_1_2"), d(1, 1)) <= 1e-12);
        CHECK(max_interior_error(g, jets.at("y1_2_2"), d(0, 2)) <= 1e-12);
    }
}

TEST_CASE("grid errors")
{
    const ChartSet charts(make_model(2, 1, "0"));
    auto kind = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidModel;
    };
    const GridGeometry tiny{{2, 5}, {0, 0}, {1, 1}};
    const auto small = sample(tiny, {"y1"}, {[](auto) { return 0.0; }});
    CHECK(kind([&] { fd_jets(charts, small, 1); }) == ErrorKind::GridTooSmall);
    const auto other = sample(cube(2, 4, 0, 1), {"y2"}, {[](auto) { return 0.0; }});
    CHECK(kind([&] { fd_jets(charts, other, 1); }) == ErrorKind::MissingField);
    std::istringstream bad("grid m=2 shape=3,3 min=0,0 max=1,1 fields=y1\n1 2 3\n");
    CHECK(kind([&] { read_grid(bad); }) == ErrorKind::InvalidGrid);
    std::istringstream comma("grid m=1 shape=3 min=0 max=1 fields=y1\n1,5 2 3\n");
    CHECK(kind([&] { read_grid(comma); }) == ErrorKind::InvalidGrid);
    std::istringstream flipped("grid m=1 shape=3 min=1 max=0 fields=y1\n1 2 3\n");
    CHECK(kind([&] { read_grid(flipped); }) == ErrorKind::InvalidGrid);
}

TEST_CASE("grid files round trip")
{
    const GridGeometry g{{3, 4}, {0, -1}, {1.5, 2}};
    const auto grid = sample(g, {"y1", "rho"}, {[](auto x) { return std::sin(x[0]) * x[1]; },
                                               [](auto x) { return 1.0 / 3.0 + x[0]; }});
    std::stringstream buffer;
    write_grid(buffer, grid);
    const std::string text = buffer.str();
    CHECK(text.rfind("grid m=2 shape=3,4 min=0,-1 max=1.5,2 fields=y1,rho\n", 0) == 0);
    const auto back = read_grid(buffer);
    CHECK(back.geometry.shape == g.shape);
    CHECK(back.names == grid.names);
    for (std::size_t f = 0; f < 2; ++f) CHECK((back.fields[f] == grid.fields[f]).all());
}

TEST_CASE("electrostatics residual on a harmonic field")
{
    const auto model = testing_support::electrostatics();
    const ChartSet charts(model);
    const auto grid = sample(cube(3, 21, -1, 1), {"y1"},
                             {[](auto x) { return x[0] * x[0] + x[1] * x[1] - 2 * x[2] * x[2]; }});
    const std::map<std::string, double> rho0{{"rho", 0.0}};

    const auto el = residuals(euler_lagrange(model, charts), model, charts, grid, MomentumSource::Legendre, 1e-9, rho0);
    CHECK(el.passed);
    REQUIRE(el.entries.size() == 1);
    CHECK(el.entries[0].max_abs <= 1e-9);
    CHECK(el.entries[0].points == 19 * 19 * 19);

    const auto phase = residuals(phase_dynamics(model, charts, true), model, charts, grid, MomentumSource::Legendre,
                                 1e-9, rho0);
    CHECK(phase.passed);
    CHECK(phase.boundary_layer == 2);
    CHECK(phase.entries.size() == 4);

    // analytically supplied momenta give the same verdict
    const auto supplied = sample(cube(3, 21, -1, 1), {"y1", "p1_1", "p1_2", "p1_3"},
                                 {[](auto x) { return x[0] * x[0] + x[1] * x[1] - 2 * x[2] * x[2]; },
                                  [](auto x) { return 2 * x[0]; }, [](auto x) { return 2 * x[1]; },
                                  [](auto x) { return -4 * x[2]; }});
    const auto direct = residuals(phase_dynamics(model, charts, true), model, charts, supplied,
                                  MomentumSource::Supplied, 1e-9, rho0);
    CHECK(direct.passed);
    for (std::size_t i = 0; i < direct.entries.size(); ++i)
        CHECK(std::abs(direct.entries[i].max_abs - phase.entries[i].max_abs) <= 1e-9);

    // a free parameter without a value is reported
    CHECK_THROWS_AS(residuals(euler_lagrange(model, charts), model, charts, grid, MomentumSource::Legendre, 1e-9),
                    Error);
    // a grid field can carry the source pointwise
    const auto with_rho = sample(cube(3, 21, -1, 1), {"y1", "rho"},
                                 {[](auto x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; },
                                  [](auto) { return 6.0; }});
    CHECK(residuals(euler_lagrange(model, charts), model, charts, with_rho, MomentumSource::Legendre, 1e-9).passed);
}

TEST_CASE("legendre momenta agree with analytic momenta up to truncation")
{
    const auto model = testing_support::electrostatics();
    const ChartSet charts(model);
    const auto g = cube(3, 17, 0, 1);
    // harmonic but not polynomial, so both variants carry truncation error
    const auto supplied = sample(g, {"y1", "p1_1", "p1_2", "p1_3"},
                                 {[](auto x) { return std::exp(x[0]) * std::cos(x[1]) + x[2]; },
                                  [](auto x) { return std::exp(x[0]) * std::cos(x[1]); },
                                  [](auto x) { return -std::exp(x[0]) * std::sin(x[1]); }, [](auto) { return 1.0; }});
    const std::map<std::string, double> rho0{{"rho", 0.0}};
    const auto sys = phase_dynamics(model, charts, true);
    const auto a = residuals(sys, model, charts, supplied, MomentumSource::Supplied, 1e-2, rho0);
    const auto b = residuals(sys, model, charts, supplied, MomentumSource::Legendre, 1e-2, rho0);
    CHECK(a.passed);
    CHECK(b.passed);
    const double h = 1.0 / 16;
    CHECK(a.entries[3].max_abs > 0.0);
    CHECK(b.entries[3].max_abs > 0.0);
    CHECK(std::abs(a.entries[3].max_abs - b.entries[3].max_abs) <= 4 * h * h);
}

TEST_CASE("wave residual is second order")
{
    const auto model = make_model(2, 1, "y1_1^2/2 - y1_2^2/2");
    const ChartSet charts(model);
    const auto el = euler_lagrange(model, charts);
    auto phi = [](auto x) { return std::sin(x[0] - x[1]); };

    const auto square = sample(cube(2, 101, 0, 2), {"y1"}, {phi});
    const auto r = residuals(el, model, charts, square, MomentumSource::Legendre, 5e-3);
    CHECK(r.passed);
    CHECK(r.entries[0].max_abs <= 5e-3);

    // unequal spacings keep the truncation error from cancelling
    const auto coarse = sample({{101, 101}, {0, 0}, {2, 1}}, {"y1"}, {phi});
    const auto fine = sample({{201, 201}, {0, 0}, {2, 1}}, {"y1"}, {phi});
    const double e1 = residuals(el, model, charts, coarse, MomentumSource::Legendre, 5e-3).entries[0].max_abs;
    const double e2 = residuals(el, model, charts, fine, MomentumSource::Legendre, 5e-3).entries[0].max_abs;
    CHECK(e1 <= 5e-3);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("residuals flag a section that violates the dynamics")
{
    const auto model = make_model(2, 1, "(y1_1^2 + y1_2^2)/2");
    const ChartSet charts(model);
    const auto grid = sample(cube(2, 11, 0, 1), {"y1"}, {[](auto x) { return x[0] * x[0]; }});
    const auto r = residuals(euler_lagrange(model, charts), model, charts, grid, MomentumSource::Legendre, 1e-6);
    CHECK_FALSE(r.passed);
    CHECK(r.entries[0].max_abs >= 1.0);
    CHECK(r.entries[0].l2 > 0.0);
}

TEST_CASE("Jacobi Poisson solver")
{
    {
        const auto g = cube(2, 9, 0, 1);
        const auto res = jacobi_poisson(g, Eigen::ArrayXd::Zero(g.size()), 10, 1e-12);
        CHECK(res.converged);
        CHECK((res.phi == 0.0).all());
    }
    {
        const auto g = cube(2, 65, 0, 1);
        const double pi = std::numbers::pi;
        auto exact = [pi](std::span<const double> x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
        const auto rho = sample(g, {"rho"}, {[&](auto x) { return -2 * pi * pi * exact(x); }}).fields[0];
        const auto res = jacobi_poisson(g, rho, 100000, 1e-10);
        CHECK(res.converged);
        CHECK(max_interior_error(g, res.phi, exact, 0) <= 5e-3);
    }
    {
        const auto g = cube(2, 9, 0, 1);
        const auto rho = Eigen::ArrayXd::Constant(g.size(), 1.0);
        const auto res = jacobi_poisson(g, rho, 1, 0.0);
        CHECK_FALSE(res.converged);
        CHECK(res.iterations == 1);
        const double h = 1.0 / 8;
        // one sweep from zero: phi = -rho h^2 / 4 inside, 0 on the boundary
        CHECK(res.phi(g.stride(0) * 4 + 4) == doctest::Approx(-h * h / 4));
        CHECK(res.phi(0) == 0.0);
    }
}

TEST_CASE("pairwise L2 norm")
{
    CHECK(grid_l2({3, 4}, 1.0) == doctest::Approx(5.0));
    CHECK(grid_l2({}, 1.0) == 0.0);
    std::vector<double> ones(1000, 1.0);
    CHECK(grid_l2(ones, 0.25) == doctest::Approx(std::sqrt(250.0)));
}

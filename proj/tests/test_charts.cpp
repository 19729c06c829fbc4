#include "jetfield/charts.hpp"
#include "models.hpp"
#include "random_exprs.hpp"

#include <doctest.h>

#include <set>

using namespace jetfield;
using testing_support::make_model;

namespace {

using Names = std::vector<std::string>;

ChartPoint<Rational> rational_point(const ChartSet& charts, Space s, const std::map<std::string, long long>& nonzero)
{
    std::map<std::string, Rational> values;
    for (const auto& name : charts.symbols(s)) {
        auto it = nonzero.find(name);
        values.emplace(name, Rational(it == nonzero.end() ? 0 : it->second));
    }
    return charts.point(s, values);
}

ChartPoint<Rational> random_point(const ChartSet& charts, Space s, std::mt19937_64& rng)
{
    ChartPoint<Rational> p{s, Coords<Rational>(charts.dimension(s))};
    for (Eigen::Index i = 0; i < p.coords.size(); ++i) p.coords(i) = testing_support::small_rational(rng);
    return p;
}

}  // namespace

TEST_CASE("mechanics charts")
{
    const ChartSet charts(make_model(1, 1, "0"));
    CHECK(charts.symbols(Space::J1E) == Names{"x1", "y1", "y1_1"});
    CHECK(charts.symbols(Space::P) == Names{"x1", "y1", "p1_1"});
    CHECK(charts.symbols(Space::J1P) == Names{"x1", "y1", "p1_1", "y1_1", "dp1_1_1"});
    CHECK(charts.symbols(Space::PJdE) == Names{"x1", "y1", "p1_1", "xi1", "v1_1"});
    CHECK(charts.symbols(Space::JdE) == Names{"x1", "y1", "p1_1", "r"});
}

TEST_CASE("three-dimensional base has three momenta")
{
    const ChartSet charts(make_model(3, 1, "0"));
    CHECK(charts.symbols(Space::P) == Names{"x1", "x2", "x3", "y1", "p1_1", "p1_2", "p1_3"});
}

TEST_CASE("second jets are stored once per unordered pair")
{
    const ChartSet charts(make_model(2, 2, "0"));
    const auto& j2 = charts.symbols(Space::J2E);
    CHECK(Names(j2.end() - 6, j2.end()) == Names{"y1_1_1", "y1_1_2", "y1_2_2", "y2_1_1", "y2_1_2", "y2_2_2"});
    CHECK(charts.jet2(0, 1, 0) == "y1_1_2");
    CHECK(charts.jet2(1, 0, 1) == "y2_1_2");
}

TEST_CASE("chart sizes agree with brute-force counts")
{
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            const ChartSet charts(make_model(m, n, "0"));
            int pairs = 0;
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    if (j <= k) ++pairs;
            int all_pairs = 0;
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) ++all_pairs;
            CAPTURE(m);
            CAPTURE(n);
            CHECK(charts.dimension(Space::E) == m + n);
            CHECK(charts.dimension(Space::J1E) == m + n + n * m);
            CHECK(charts.dimension(Space::J2E) == m + n + n * m + n * pairs);
            CHECK(charts.dimension(Space::VE) == m + 2 * n);
            CHECK(charts.dimension(Space::VJ1E) == m + n + n * m + n + n * m);
            CHECK(charts.dimension(Space::J1VE) == charts.dimension(Space::VJ1E));
            CHECK(charts.dimension(Space::P) == m + n + n * m);
            CHECK(charts.dimension(Space::J1P) == m + n + n * m + n * m + n * all_pairs);
            CHECK(charts.dimension(Space::JdE) == m + n + n * m + 1);
            CHECK(charts.dimension(Space::PJdE) == m + n + n * m + n + n * m);
            CHECK(charts.dimension(Space::VsJ1E) == m + n + n * m + n + n * m);
            for (Space s : all_spaces) {
                const auto& syms = charts.symbols(s);
                CHECK(std::set<std::string>(syms.begin(), syms.end()).size() == syms.size());
            }
        }
}

TEST_CASE("user names clashing with generated names are rejected")
{
    auto model = make_model(1, 1, "0");
    model.fibers = {"y1", "y1_1"};
    try {
        ChartSet charts(model);
        FAIL("expected NameCollision");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NameCollision);
    }
    auto with_param = make_model(1, 1, "0", {"p1_1"});
    CHECK_THROWS_AS(ChartSet{with_param}, Error);
    auto reserved = make_model(1, 1, "0", {"sin"});
    CHECK_THROWS_AS(ChartSet{reserved}, Error);
}

TEST_CASE("validate rejects symbols outside the Lagrangian's chart")
{
    auto model = make_model(3, 1, "y1_1");
    model.lagrangian = Expr::symbol("p1_1");
    const ChartSet charts(model);
    try {
        validate(model, charts);
        FAIL("expected UnknownSymbol");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownSymbol);
    }
}

TEST_CASE("kappa relabels the vertical coordinates")
{
    const ChartSet charts(make_model(1, 1, "0"));
    const auto w = rational_point(charts, Space::VJ1E, {{"y1", 1}, {"y1_1", 2}, {"dy1", 3}, {"dy1_1", 4}});
    const auto flipped = kappa_flip(charts, w);
    CHECK(flipped.space == Space::J1VE);
    CHECK(charts.symbols(Space::J1VE) == Names{"x1", "y1", "dy1", "y1_1", "dy1_1"});
    const auto named = charts.named(flipped);
    CHECK(named.at("x1") == Rational(0));
    CHECK(named.at("y1") == Rational(1));
    CHECK(named.at("dy1") == Rational(3));
    CHECK(named.at("y1_1") == Rational(2));
    CHECK(named.at("dy1_1") == Rational(4));

    const auto zero = rational_point(charts, Space::VJ1E, {{"y1", 5}, {"y1_1", -2}});
    const auto zf = kappa_flip(charts, zero);
    CHECK(charts.at(zf, "dy1").is_zero());
    CHECK(charts.at(zf, "dy1_1").is_zero());

    CHECK_THROWS_AS(kappa_flip(charts, flipped), Error);
}

TEST_CASE("kappa round trips on random points")
{
    std::mt19937_64 rng(3);
    const ChartSet charts(make_model(2, 2, "0"));
    for (int t = 0; t < 100; ++t) {
        const auto w = random_point(charts, Space::VJ1E, rng);
        CHECK(kappa_unflip(charts, kappa_flip(charts, w)).coords == w.coords);
        const auto v = random_point(charts, Space::J1VE, rng);
        CHECK(kappa_flip(charts, kappa_unflip(charts, v)).coords == v.coords);
        // same multiset of values
        auto a = std::vector<Rational>(w.coords.begin(), w.coords.end());
        const auto f = kappa_flip(charts, w);
        auto b = std::vector<Rational>(f.coords.begin(), f.coords.end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("jet pairing")
{
    {
        const ChartSet charts(make_model(1, 1, "0"));
        const auto u = rational_point(charts, Space::J1P, {{"p1_1", 2}, {"dp1_1_1", 5}});
        const auto w = rational_point(charts, Space::J1VE, {{"dy1", 1}, {"dy1_1", 3}});
        CHECK(jet_pairing(charts, u, w) == Rational(11));
        const auto w0 = rational_point(charts, Space::J1VE, {});
        CHECK(jet_pairing(charts, u, w0).is_zero());
        const auto moved = rational_point(charts, Space::J1VE, {{"y1", 1}});
        try {
            jet_pairing(charts, u, moved);
            FAIL("expected BaseMismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::BaseMismatch);
        }
    }
    {
        const ChartSet charts(make_model(2, 1, "0"));
        const auto u = rational_point(charts, Space::J1P, {{"p1_1", 1}, {"dp1_2_2", 4}, {"dp1_1_2", 100}});
        const auto w = rational_point(charts, Space::J1VE, {{"dy1", 2}, {"dy1_1", 7}});
        // hand substitution: trace 0 + 4 times dy1 = 2, plus p1_1 * dy1_1 = 7
        CHECK(jet_pairing(charts, u, w) == Rational(4 * 2 + 1 * 7));
    }
}

TEST_CASE("jet pairing is bilinear in the vertical components")
{
    std::mt19937_64 rng(5);
    const ChartSet charts(make_model(2, 2, "0"));
    auto vertical_only = [&](ChartPoint<Rational> p, const ChartPoint<Rational>& base) {
        for (const auto& s : charts.symbols(Space::J1P)) {
            const auto* info = charts.info(s);
            if (info->role == Role::Base || info->role == Role::Fiber || info->role == Role::Jet)
                p.coords(charts.index(p.space, s)) = charts.at(base, s);
        }
        return p;
    };
    for (int t = 0; t < 30; ++t) {
        const auto base = random_point(charts, Space::J1P, rng);
        const auto u1 = vertical_only(random_point(charts, Space::J1P, rng), base);
        const auto u2 = vertical_only(random_point(charts, Space::J1P, rng), base);
        auto w = random_point(charts, Space::J1VE, rng);
        for (const auto& s : charts.symbols(Space::J1VE)) {
            const auto* info = charts.info(s);
            if (info->role == Role::Base || info->role == Role::Fiber || info->role == Role::Jet)
                w.coords(charts.index(Space::J1VE, s)) = charts.at(base, s);
        }
        const Rational c = testing_support::small_rational(rng);
        ChartPoint<Rational> mix = u1;
        for (const auto& s : charts.symbols(Space::J1P)) {
            const auto* info = charts.info(s);
            if (info->role == Role::Momentum || info->role == Role::MomentumJet) {
                const int i = charts.index(Space::J1P, s);
                mix.coords(i) = c * u1.coords(i) + u2.coords(i);
            }
        }
        CHECK(jet_pairing(charts, mix, w) == c * jet_pairing(charts, u1, w) + jet_pairing(charts, u2, w));

        auto w2 = w;
        for (const auto& s : {charts.variation(0), charts.variation_jet(1, 1)})
            w2.coords(charts.index(Space::J1VE, s)) = testing_support::small_rational(rng);
        ChartPoint<Rational> wmix = w;
        for (const auto& s : charts.symbols(Space::J1VE)) {
            const auto* info = charts.info(s);
            if (info->role == Role::Variation || info->role == Role::VariationJet) {
                const int i = charts.index(Space::J1VE, s);
                wmix.coords(i) = c * w.coords(i) + w2.coords(i);
            }
        }
        CHECK(jet_pairing(charts, u1, wmix) == c * jet_pairing(charts, u1, w) + jet_pairing(charts, u1, w2));
    }
}

TEST_CASE("canonical forms")
{
    {
        const ChartSet charts(make_model(1, 1, "0"));
        const auto forms = canonical_forms(charts);
        CHECK(forms.theta.rows() == 1);
        CHECK(forms.theta(0, 0) == Expr::symbol("p1_1"));
        const auto& w = forms.omega_j1p;
        CHECK(w.at(charts, "dp1_1_1", "y1") == Rational(1));
        CHECK(w.at(charts, "y1", "dp1_1_1") == Rational(-1));
        CHECK(w.at(charts, "p1_1", "y1_1") == Rational(1));
        CHECK(w.at(charts, "y1_1", "p1_1") == Rational(-1));
        int nonzero = 0;
        for (Eigen::Index r = 0; r < w.table.rows(); ++r)
            for (Eigen::Index c = 0; c < w.table.cols(); ++c) nonzero += w.table(r, c).is_zero() ? 0 : 1;
        CHECK(nonzero == 4);
    }
    {
        const ChartSet charts(make_model(2, 1, "0"));
        const auto forms = canonical_forms(charts);
        const auto& w = forms.omega_pjde;
        CHECK(w.at(charts, "xi1", "y1") == Rational(1));
        CHECK(w.at(charts, "v1_1", "p1_1") == Rational(1));
        CHECK(w.at(charts, "v1_2", "p1_2") == Rational(1));
        int nonzero = 0;
        for (Eigen::Index r = 0; r < w.table.rows(); ++r)
            for (Eigen::Index c = 0; c < w.table.cols(); ++c) nonzero += w.table(r, c).is_zero() ? 0 : 1;
        CHECK(nonzero == 6);
        CHECK(forms.theta(1, 0) == Expr::symbol("p1_2"));
    }
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n) {
            const ChartSet charts(make_model(m, n, "0"));
            const auto forms = canonical_forms(charts);
            CHECK(forms.omega_j1p.table == -forms.omega_j1p.table.transpose());
            CHECK(forms.omega_pjde.table == -forms.omega_pjde.table.transpose());
        }
}

TEST_CASE("points must cover the chart exactly")
{
    const ChartSet charts(make_model(1, 1, "0"));
    std::map<std::string, Rational> partial{{"x1", Rational(0)}, {"y1", Rational(1)}};
    try {
        charts.point(Space::J1E, partial);
        FAIL("expected ChartMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ChartMismatch);
    }
}

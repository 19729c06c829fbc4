#pragma once

#include "jetfield/error.hpp"
#include "jetfield/expr.hpp"
#include "jetfield/parser.hpp"
#include "jetfield/rational.hpp"

#include <Eigen/Core>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jetfield {

/// The spaces of the triple, each carried by one adapted chart.
///
/// VsJ1E is the codomain of the Lagrangian morphism: covectors on J1E with
/// values in top forms, coordinatized by (x, y, y_j; E_a, P_a_j).
enum class Space { E, J1E, J2E, VE, VJ1E, J1VE, P, J1P, JdE, PJdE, VsJ1E };
inline constexpr std::array all_spaces{Space::E,   Space::J1E, Space::J2E, Space::VE,  Space::VJ1E, Space::J1VE,
                                       Space::P,   Space::J1P, Space::JdE, Space::PJdE, Space::VsJ1E};
std::string_view to_string(Space s);

enum class Role {
    Base,          // x_i
    Fiber,         // y_a
    Jet,           // y_a_j
    Jet2,          // y_a_j_k, j <= k
    Variation,     // dy_a
    VariationJet,  // dy_a_j
    Momentum,      // p_a_j
    MomentumJet,   // dp_a_j_k = d p_a_j / d x_k
    Affine,        // r
    Covector,      // xi_a
    Velocity,      // v_a_j
    SlotE,         // E_a
    SlotP,         // P_a_j
};

/// Role and zero-based indices (fiber a, jet j, jet k) of a chart symbol.
struct SymbolInfo {
    Role role;
    int a = -1;
    int j = -1;
    int k = -1;
};

struct Parameter {
    std::string name;
    std::optional<Rational> value;
    friend bool operator==(const Parameter&, const Parameter&) = default;
};

/// A fibration in adapted coordinates together with a Lagrangian density.
/// All densities are coefficients relative to dx1 ^ ... ^ dxm.
struct FieldModel {
    std::string name;
    std::vector<std::string> base;
    std::vector<std::string> fibers;
    std::vector<Parameter> parameters;
    Expr lagrangian;
    std::optional<std::vector<Expr>> sources;
    std::optional<Expr> hamiltonian;
    int source_sign = 1;

    [[nodiscard]] int m() const { return static_cast<int>(base.size()); }
    [[nodiscard]] int n() const { return static_cast<int>(fibers.size()); }
    /// Source term rho_a, or 0 when the model has none.
    [[nodiscard]] Expr source(int a) const;
    [[nodiscard]] std::map<std::string, Rational> fixed_parameters() const;

    friend bool operator==(const FieldModel&, const FieldModel&) = default;
};

template <class Scalar>
using Coords = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A point (numeric or symbolic) in one chart, coordinates in chart order.
template <class Scalar>
struct ChartPoint {
    Space space;
    Coords<Scalar> coords;
};

/// Conversion of exact constants into a coordinate scalar type.
template <class Scalar>
Scalar from_rational(const Rational& r)
{
    if constexpr (std::is_same_v<Scalar, double>)
        return r.to_double();
    else
        return Scalar(r);
}

/// Adapted coordinate charts of every space of the triple for one model.
/// Immutable after construction.
class ChartSet {
public:
    /// Throws NameCollision when user names clash with generated names.
    explicit ChartSet(const FieldModel& model);

    [[nodiscard]] int m() const { return m_; }
    [[nodiscard]] int n() const { return n_; }

    [[nodiscard]] const std::vector<std::string>& symbols(Space s) const { return charts_[static_cast<int>(s)]; }
    [[nodiscard]] int dimension(Space s) const { return static_cast<int>(symbols(s).size()); }
    /// Position of a symbol in a chart, or -1.
    [[nodiscard]] int index(Space s, std::string_view name) const;
    [[nodiscard]] const SymbolInfo* info(std::string_view name) const;
    [[nodiscard]] const std::vector<std::string>& parameters() const { return parameters_; }
    [[nodiscard]] bool is_parameter(std::string_view name) const;

    /// Chart symbols plus declared parameters.
    [[nodiscard]] SymbolScope scope(Space s) const;

    // Zero-based indices throughout.
    [[nodiscard]] const std::string& base(int i) const { return base_[i]; }
    [[nodiscard]] const std::string& fiber(int a) const { return fiber_[a]; }
    [[nodiscard]] const std::string& jet(int a, int j) const { return jet_[a * m_ + j]; }
    /// Second jet; index order is irrelevant (stored with j <= k).
    [[nodiscard]] const std::string& jet2(int a, int j, int k) const;
    [[nodiscard]] const std::string& variation(int a) const { return variation_[a]; }
    [[nodiscard]] const std::string& variation_jet(int a, int j) const { return variation_jet_[a * m_ + j]; }
    [[nodiscard]] const std::string& momentum(int a, int j) const { return momentum_[a * m_ + j]; }
    [[nodiscard]] const std::string& momentum_jet(int a, int j, int k) const
    {
        return momentum_jet_[(a * m_ + j) * m_ + k];
    }
    [[nodiscard]] const std::string& affine() const { return affine_; }
    [[nodiscard]] const std::string& covector(int a) const { return covector_[a]; }
    [[nodiscard]] const std::string& velocity(int a, int j) const { return velocity_[a * m_ + j]; }
    [[nodiscard]] const std::string& slot_e(int a) const { return slot_e_[a]; }
    [[nodiscard]] const std::string& slot_p(int a, int j) const { return slot_p_[a * m_ + j]; }

    /// Builds a point from a named assignment covering exactly the chart.
    template <class Scalar>
    ChartPoint<Scalar> point(Space s, const std::map<std::string, Scalar>& values) const
    {
        const auto& syms = symbols(s);
        if (values.size() != syms.size())
            throw Error(ErrorKind::ChartMismatch, "assignment does not cover chart " + std::string(to_string(s)));
        ChartPoint<Scalar> p{s, Coords<Scalar>(static_cast<Eigen::Index>(syms.size()))};
        for (std::size_t i = 0; i < syms.size(); ++i) {
            auto it = values.find(syms[i]);
            if (it == values.end())
                throw Error(ErrorKind::ChartMismatch,
                            "assignment lacks '" + syms[i] + "' of chart " + std::string(to_string(s)));
            p.coords(static_cast<Eigen::Index>(i)) = it->second;
        }
        return p;
    }

    /// The point whose coordinates are the chart's own symbols.
    [[nodiscard]] ChartPoint<Expr> symbolic_point(Space s) const;

    template <class Scalar>
    std::map<std::string, Scalar> named(const ChartPoint<Scalar>& p) const
    {
        std::map<std::string, Scalar> out;
        const auto& syms = symbols(p.space);
        for (std::size_t i = 0; i < syms.size(); ++i) out.emplace(syms[i], p.coords(static_cast<Eigen::Index>(i)));
        return out;
    }

    template <class Scalar>
    const Scalar& at(const ChartPoint<Scalar>& p, std::string_view name) const
    {
        const int i = index(p.space, name);
        if (i < 0)
            throw Error(ErrorKind::ChartMismatch,
                        "'" + std::string(name) + "' is not a coordinate of " + std::string(to_string(p.space)));
        return p.coords(i);
    }

private:
    void add(Space s, const std::string& name);
    void register_symbol(const std::string& name, SymbolInfo info);

    int m_;
    int n_;
    std::array<std::vector<std::string>, all_spaces.size()> charts_;
    std::array<std::unordered_map<std::string, int>, all_spaces.size()> positions_;
    std::unordered_map<std::string, SymbolInfo> info_;
    std::vector<std::string> parameters_;
    std::vector<std::string> base_, fiber_, jet_, jet2_, variation_, variation_jet_, momentum_, momentum_jet_,
        covector_, velocity_, slot_e_, slot_p_;
    std::string affine_;
};

/// Checks the model's symbol invariants against its charts: the Lagrangian
/// lives on J1E, sources on E, the Hamiltonian on P (plus parameters).
/// Throws UnknownSymbol or InvalidModel.
void validate(const FieldModel& model, const ChartSet& charts);

/// Constant-coefficient linear map between two charts.
struct LinearMap {
    Space from;
    Space to;
    DenseMatrix<Rational> matrix;  // rows: target coordinates, cols: source coordinates
};

template <class Scalar>
ChartPoint<Scalar> apply(const LinearMap& map, const ChartPoint<Scalar>& p)
{
    if (p.space != map.from)
        throw Error(ErrorKind::ChartMismatch, "map expects a point of " + std::string(to_string(map.from)) +
                                                  ", got " + std::string(to_string(p.space)));
    ChartPoint<Scalar> out{map.to, Coords<Scalar>(map.matrix.rows())};
    for (Eigen::Index r = 0; r < map.matrix.rows(); ++r) {
        Scalar acc = from_rational<Scalar>(Rational(0));
        for (Eigen::Index c = 0; c < map.matrix.cols(); ++c) {
            const Rational& w = map.matrix(r, c);
            if (w.is_zero()) continue;
            if (w == Rational(1))
                acc = acc + p.coords(c);
            else
                acc = acc + from_rational<Scalar>(w) * p.coords(c);
        }
        out.coords(r) = acc;
    }
    return out;
}

LinearMap compose(const LinearMap& outer, const LinearMap& inner);

/// The canonical flip VJ1E -> J1VE, (x, y, y_j, dy, dy_j) -> (x, y, dy, y_j, dy_j).
LinearMap kappa_map(const ChartSet& charts);
LinearMap kappa_inverse_map(const ChartSet& charts);

template <class Scalar>
ChartPoint<Scalar> kappa_flip(const ChartSet& charts, const ChartPoint<Scalar>& w)
{
    return apply(kappa_map(charts), w);
}

template <class Scalar>
ChartPoint<Scalar> kappa_unflip(const ChartSet& charts, const ChartPoint<Scalar>& w)
{
    return apply(kappa_inverse_map(charts), w);
}

namespace detail {

template <class Scalar>
bool same(const Scalar& a, const Scalar& b)
{
    if constexpr (std::is_same_v<Scalar, Expr>)
        return equivalent(a, b) != Verdict::Failed;
    else
        return a == b;
}

template <class Scalar>
void require_same_base(const ChartSet& charts, const ChartPoint<Scalar>& u, const ChartPoint<Scalar>& w)
{
    auto check = [&](const std::string& s) {
        if (!same(charts.at(u, s), charts.at(w, s)))
            throw Error(ErrorKind::BaseMismatch, "points disagree on '" + s + "'");
    };
    for (int i = 0; i < charts.m(); ++i) check(charts.base(i));
    for (int a = 0; a < charts.n(); ++a) {
        check(charts.fiber(a));
        for (int j = 0; j < charts.m(); ++j) check(charts.jet(a, j));
    }
}

}  // namespace detail

/// Evaluation of a momentum jet (J1P) on the jet of a variation (J1VE):
/// sum_a sum_l dp_a_l_l dy_a + sum_{a,j} p_a_j dy_a_j, as the coefficient of
/// the volume form. Throws BaseMismatch when (x, y, y_j) disagree.
template <class Scalar>
Scalar jet_pairing(const ChartSet& charts, const ChartPoint<Scalar>& u, const ChartPoint<Scalar>& w)
{
    if (u.space != Space::J1P || w.space != Space::J1VE)
        throw Error(ErrorKind::ChartMismatch, "jet_pairing expects points of J1P and J1VE");
    detail::require_same_base(charts, u, w);
    Scalar total = from_rational<Scalar>(Rational(0));
    for (int a = 0; a < charts.n(); ++a) {
        Scalar trace = from_rational<Scalar>(Rational(0));
        for (int l = 0; l < charts.m(); ++l) trace = trace + charts.at(u, charts.momentum_jet(a, l, l));
        total = total + trace * charts.at(w, charts.variation(a));
        for (int j = 0; j < charts.m(); ++j)
            total = total + charts.at(u, charts.momentum(a, j)) * charts.at(w, charts.variation_jet(a, j));
    }
    return total;
}

/// Antisymmetric coefficient table of a constant 2-form over one chart:
/// table(s, t) is the coefficient of ds ^ dt, with table(t, s) = -table(s, t).
struct FormTable {
    Space space;
    DenseMatrix<Rational> table;

    [[nodiscard]] Rational at(const ChartSet& charts, std::string_view s, std::string_view t) const;
};

struct CanonicalForms {
    /// theta_P coefficients: (i, a) -> p_a_i, relative to dy_a (x) eta_i.
    DenseMatrix<Expr> theta;
    FormTable omega_j1p;
    FormTable omega_pjde;
};

CanonicalForms canonical_forms(const ChartSet& charts);

/// Pullback of a constant 2-form through a linear map: M^T W M.
FormTable pullback(const FormTable& form, const LinearMap& map);

}  // namespace jetfield

#include "jetfield/charts.hpp"

#include <set>

namespace jetfield {

std::string_view to_string(Space s)
{
    switch (s) {
        case Space::E: return "E";
        case Space::J1E: return "J1E";
        case Space::J2E: return "J2E";
        case Space::VE: return "VE";
        case Space::VJ1E: return "VJ1E";
        case Space::J1VE: return "J1VE";
        case Space::P: return "P";
        case Space::J1P: return "J1P";
        case Space::JdE: return "JdE";
        case Space::PJdE: return "PJdE";
        case Space::VsJ1E: return "VsJ1E";
    }
    return "?";
}

Expr FieldModel::source(int a) const
{
    if (!sources) return Expr();
    return (*sources)[a];
}

std::map<std::string, Rational> FieldModel::fixed_parameters() const
{
    std::map<std::string, Rational> out;
    for (const auto& p : parameters)
        if (p.value) out.emplace(p.name, *p.value);
    return out;
}

namespace {

std::string idx(int i) { return std::to_string(i + 1); }

}  // namespace

ChartSet::ChartSet(const FieldModel& model) : m_(model.m()), n_(model.n())
{
    if (m_ < 1 || n_ < 1) throw Error(ErrorKind::InvalidModel, "base and fiber dimensions must be at least 1");

    for (int i = 0; i < m_; ++i) {
        base_.push_back(model.base[i]);
        register_symbol(base_.back(), {Role::Base, -1, i});
    }
    for (int a = 0; a < n_; ++a) {
        const std::string& y = model.fibers[a];
        fiber_.push_back(y);
        register_symbol(y, {Role::Fiber, a});
        variation_.push_back("d" + y);
        register_symbol(variation_.back(), {Role::Variation, a});
        covector_.push_back("xi" + idx(a));
        register_symbol(covector_.back(), {Role::Covector, a});
        slot_e_.push_back("E" + idx(a));
        register_symbol(slot_e_.back(), {Role::SlotE, a});
        for (int j = 0; j < m_; ++j) {
            jet_.push_back(y + "_" + idx(j));
            register_symbol(jet_.back(), {Role::Jet, a, j});
            variation_jet_.push_back("d" + y + "_" + idx(j));
            register_symbol(variation_jet_.back(), {Role::VariationJet, a, j});
            momentum_.push_back("p" + idx(a) + "_" + idx(j));
            register_symbol(momentum_.back(), {Role::Momentum, a, j});
            velocity_.push_back("v" + idx(a) + "_" + idx(j));
            register_symbol(velocity_.back(), {Role::Velocity, a, j});
            slot_p_.push_back("P" + idx(a) + "_" + idx(j));
            register_symbol(slot_p_.back(), {Role::SlotP, a, j});
            for (int k = 0; k < m_; ++k) {
                momentum_jet_.push_back("dp" + idx(a) + "_" + idx(j) + "_" + idx(k));
                register_symbol(momentum_jet_.back(), {Role::MomentumJet, a, j, k});
                if (j <= k) {
                    jet2_.push_back(y + "_" + idx(j) + "_" + idx(k));
                    register_symbol(jet2_.back(), {Role::Jet2, a, j, k});
                }
            }
        }
    }
    affine_ = "r";
    register_symbol(affine_, {Role::Affine});

    for (const auto& p : model.parameters) {
        if (info_.count(p.name) || std::count(parameters_.begin(), parameters_.end(), p.name))
            throw Error(ErrorKind::NameCollision, "parameter '" + p.name + "' clashes with another symbol");
        parameters_.push_back(p.name);
    }
    for (std::string_view reserved : {"sin", "cos", "exp", "log", "sqrt"}) {
        if (info_.count(std::string(reserved)) || is_parameter(reserved))
            throw Error(ErrorKind::NameCollision, "'" + std::string(reserved) + "' is a function name");
    }

    auto add_all = [&](Space s, const std::vector<std::string>& names) {
        for (const auto& name : names) add(s, name);
    };
    auto add_e = [&](Space s) {
        add_all(s, base_);
        add_all(s, fiber_);
    };
    add_e(Space::E);

    add_e(Space::J1E);
    add_all(Space::J1E, jet_);

    add_e(Space::J2E);
    add_all(Space::J2E, jet_);
    add_all(Space::J2E, jet2_);

    add_e(Space::VE);
    add_all(Space::VE, variation_);

    add_e(Space::VJ1E);
    add_all(Space::VJ1E, jet_);
    add_all(Space::VJ1E, variation_);
    add_all(Space::VJ1E, variation_jet_);

    add_e(Space::J1VE);
    add_all(Space::J1VE, variation_);
    add_all(Space::J1VE, jet_);
    add_all(Space::J1VE, variation_jet_);

    add_e(Space::P);
    add_all(Space::P, momentum_);

    add_e(Space::J1P);
    add_all(Space::J1P, momentum_);
    add_all(Space::J1P, jet_);
    add_all(Space::J1P, momentum_jet_);

    add_e(Space::JdE);
    add_all(Space::JdE, momentum_);
    add(Space::JdE, affine_);

    add_e(Space::PJdE);
    add_all(Space::PJdE, momentum_);
    add_all(Space::PJdE, covector_);
    add_all(Space::PJdE, velocity_);

    add_e(Space::VsJ1E);
    add_all(Space::VsJ1E, jet_);
    add_all(Space::VsJ1E, slot_e_);
    add_all(Space::VsJ1E, slot_p_);
}

void ChartSet::register_symbol(const std::string& name, SymbolInfo info)
{
    if (!info_.emplace(name, info).second)
        throw Error(ErrorKind::NameCollision, "symbol '" + name + "' is generated more than once");
}

void ChartSet::add(Space s, const std::string& name)
{
    auto& chart = charts_[static_cast<int>(s)];
    positions_[static_cast<int>(s)].emplace(name, static_cast<int>(chart.size()));
    chart.push_back(name);
}

int ChartSet::index(Space s, std::string_view name) const
{
    const auto& pos = positions_[static_cast<int>(s)];
    auto it = pos.find(std::string(name));
    return it == pos.end() ? -1 : it->second;
}

const SymbolInfo* ChartSet::info(std::string_view name) const
{
    auto it = info_.find(std::string(name));
    return it == info_.end() ? nullptr : &it->second;
}

bool ChartSet::is_parameter(std::string_view name) const
{
    return std::find(parameters_.begin(), parameters_.end(), name) != parameters_.end();
}

SymbolScope ChartSet::scope(Space s) const
{
    SymbolScope out;
    out.symbols.insert(symbols(s).begin(), symbols(s).end());
    out.symbols.insert(parameters_.begin(), parameters_.end());
    return out;
}

const std::string& ChartSet::jet2(int a, int j, int k) const
{
    if (j > k) std::swap(j, k);
    // Row-major upper triangle: offset of row j is j*m - j*(j-1)/2.
    const int per_fiber = m_ * (m_ + 1) / 2;
    const int offset = j * m_ - j * (j - 1) / 2 + (k - j);
    return jet2_[a * per_fiber + offset];
}

ChartPoint<Expr> ChartSet::symbolic_point(Space s) const
{
    const auto& syms = symbols(s);
    ChartPoint<Expr> p{s, Coords<Expr>(static_cast<Eigen::Index>(syms.size()))};
    for (std::size_t i = 0; i < syms.size(); ++i) p.coords(static_cast<Eigen::Index>(i)) = Expr::symbol(syms[i]);
    return p;
}

void validate(const FieldModel& model, const ChartSet& charts)
{
    auto check = [&](const Expr& e, Space s, const std::string& what) {
        const auto scope = charts.scope(s);
        for (const auto& sym : free_symbols(e))
            if (!scope.contains(sym))
                throw Error(ErrorKind::UnknownSymbol,
                            what + " references '" + sym + "', which is not a coordinate of " +
                                std::string(to_string(s)) + " or a parameter");
    };
    check(model.lagrangian, Space::J1E, "lagrangian");
    if (model.sources) {
        if (static_cast<int>(model.sources->size()) != model.n())
            throw Error(ErrorKind::InvalidModel, "need one source expression per fiber");
        for (const auto& rho : *model.sources) check(rho, Space::E, "source");
    }
    if (model.hamiltonian) check(*model.hamiltonian, Space::P, "hamiltonian");
    if (model.source_sign != 1 && model.source_sign != -1)
        throw Error(ErrorKind::InvalidModel, "source_sign must be +1 or -1");
}

LinearMap compose(const LinearMap& outer, const LinearMap& inner)
{
    if (outer.from != inner.to) throw Error(ErrorKind::ChartMismatch, "maps do not compose");
    return {inner.from, outer.to, outer.matrix * inner.matrix};
}

namespace {

LinearMap relabel(const ChartSet& charts, Space from, Space to)
{
    DenseMatrix<Rational> mat = DenseMatrix<Rational>::Zero(charts.dimension(to), charts.dimension(from));
    const auto& target = charts.symbols(to);
    for (std::size_t r = 0; r < target.size(); ++r) {
        const int c = charts.index(from, target[r]);
        if (c < 0) throw Error(ErrorKind::ChartMismatch, "charts are not relabelings of each other");
        mat(static_cast<Eigen::Index>(r), c) = Rational(1);
    }
    return {from, to, std::move(mat)};
}

}  // namespace

LinearMap kappa_map(const ChartSet& charts)
{
    return relabel(charts, Space::VJ1E, Space::J1VE);
}

LinearMap kappa_inverse_map(const ChartSet& charts)
{
    return relabel(charts, Space::J1VE, Space::VJ1E);
}

Rational FormTable::at(const ChartSet& charts, std::string_view s, std::string_view t) const
{
    const int i = charts.index(space, s);
    const int j = charts.index(space, t);
    if (i < 0 || j < 0) throw Error(ErrorKind::ChartMismatch, "symbol is not a coordinate of the form's chart");
    return table(i, j);
}

namespace {

void wedge(const ChartSet& charts, FormTable& form, const std::string& s, const std::string& t, const Rational& c)
{
    const int i = charts.index(form.space, s);
    const int j = charts.index(form.space, t);
    form.table(i, j) += c;
    form.table(j, i) -= c;
}

FormTable zero_form(const ChartSet& charts, Space s)
{
    return {s, DenseMatrix<Rational>::Zero(charts.dimension(s), charts.dimension(s))};
}

}  // namespace

CanonicalForms canonical_forms(const ChartSet& charts)
{
    const int m = charts.m();
    const int n = charts.n();
    CanonicalForms out{DenseMatrix<Expr>(m, n), zero_form(charts, Space::J1P), zero_form(charts, Space::PJdE)};
    for (int i = 0; i < m; ++i)
        for (int a = 0; a < n; ++a) out.theta(i, a) = Expr::symbol(charts.momentum(a, i));

    // omega_J1P = d dp_a_i_i ^ dy_a + dp_b_j ^ dy_b_j
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < m; ++i) {
            wedge(charts, out.omega_j1p, charts.momentum_jet(a, i, i), charts.fiber(a), Rational(1));
            wedge(charts, out.omega_j1p, charts.momentum(a, i), charts.jet(a, i), Rational(1));
        }
    // omega_PJdE = dxi_a ^ dy_a + dv_b_k ^ dp_b_k
    for (int a = 0; a < n; ++a) {
        wedge(charts, out.omega_pjde, charts.covector(a), charts.fiber(a), Rational(1));
        for (int k = 0; k < m; ++k)
            wedge(charts, out.omega_pjde, charts.velocity(a, k), charts.momentum(a, k), Rational(1));
    }
    return out;
}

FormTable pullback(const FormTable& form, const LinearMap& map)
{
    if (form.space != map.to) throw Error(ErrorKind::ChartMismatch, "form does not live on the map's target");
    // M^T W M, visiting only nonzero entries; both factors are very sparse
    const auto& M = map.matrix;
    std::vector<std::vector<std::pair<Eigen::Index, Rational>>> rows(M.rows());
    for (Eigen::Index s = 0; s < M.rows(); ++s)
        for (Eigen::Index i = 0; i < M.cols(); ++i)
            if (!M(s, i).is_zero()) rows[s].emplace_back(i, M(s, i));
    DenseMatrix<Rational> out = DenseMatrix<Rational>::Zero(M.cols(), M.cols());
    for (Eigen::Index s = 0; s < form.table.rows(); ++s)
        for (Eigen::Index t = 0; t < form.table.cols(); ++t) {
            const Rational& w = form.table(s, t);
            if (w.is_zero()) continue;
            for (const auto& [i, ms] : rows[s])
                for (const auto& [j, mt] : rows[t]) out(i, j) += ms * w * mt;
        }
    return {map.from, std::move(out)};
}

}  // namespace jetfield

#include "jetfield/grid.hpp"

#include "jetfield/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace jetfield {

Eigen::Index GridGeometry::size() const
{
    Eigen::Index n = 1;
    for (int s : shape) n *= s;
    return n;
}

Eigen::Index GridGeometry::stride(int axis) const
{
    Eigen::Index s = 1;
    for (int d = dimension() - 1; d > axis; --d) s *= shape[d];
    return s;
}

std::vector<int> GridGeometry::unflatten(Eigen::Index flat) const
{
    std::vector<int> idx(shape.size());
    for (int d = dimension() - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % shape[d]);
        flat /= shape[d];
    }
    return idx;
}

bool GridGeometry::interior(Eigen::Index flat, int layer) const
{
    for (int d = dimension() - 1; d >= 0; --d) {
        const auto i = static_cast<int>(flat % shape[d]);
        if (i < layer || i > shape[d] - 1 - layer) return false;
        flat /= shape[d];
    }
    return true;
}

void GridGeometry::check() const
{
    if (shape.empty() || lower.size() != shape.size() || upper.size() != shape.size())
        throw Error(ErrorKind::InvalidGrid, "shape, min and max must have one entry per base axis");
    for (int d = 0; d < dimension(); ++d) {
        if (shape[d] < 2) throw Error(ErrorKind::InvalidGrid, "every axis needs at least two points");
        if (!(upper[d] > lower[d])) throw Error(ErrorKind::InvalidGrid, "max must exceed min on every axis");
    }
}

const Eigen::ArrayXd* GridSection::find(std::string_view name) const
{
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return &fields[i];
    return nullptr;
}

const Eigen::ArrayXd& GridSection::field(std::string_view name) const
{
    const auto* f = find(name);
    if (!f) throw Error(ErrorKind::MissingField, "grid has no field '" + std::string(name) + "'");
    return *f;
}

GridSection sample(const GridGeometry& geometry, const std::vector<std::string>& names,
                   const std::vector<PointFunction>& functions)
{
    geometry.check();
    GridSection out{geometry, names, {}};
    std::vector<double> x(geometry.dimension());
    for (const auto& f : functions) {
        Eigen::ArrayXd values(geometry.size());
        for (Eigen::Index k = 0; k < geometry.size(); ++k) {
            const auto idx = geometry.unflatten(k);
            for (int d = 0; d < geometry.dimension(); ++d) x[d] = geometry.coordinate(d, idx[d]);
            values(k) = f(x);
        }
        out.fields.push_back(std::move(values));
    }
    return out;
}

namespace {

double parse_double(std::string_view s)
{
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw Error(ErrorKind::InvalidGrid, "not a number: '" + std::string(s) + "'");
    return v;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

GridSection read_grid(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header)) throw Error(ErrorKind::InvalidGrid, "empty grid file");
    std::istringstream hs(header);
    std::string word;
    hs >> word;
    if (word != "grid") throw Error(ErrorKind::InvalidGrid, "grid file must start with 'grid'");

    std::map<std::string, std::string> keys;
    while (hs >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::InvalidGrid, "malformed header entry '" + word + "'");
        keys[word.substr(0, eq)] = word.substr(eq + 1);
    }
    for (const char* k : {"m", "shape", "min", "max", "fields"})
        if (!keys.count(k)) throw Error(ErrorKind::InvalidGrid, std::string("header lacks '") + k + "='");
    if (keys.size() != 5) throw Error(ErrorKind::InvalidGrid, "unknown header entries");

    GridSection grid;
    const int m = static_cast<int>(parse_double(keys["m"]));
    for (const auto& s : split(keys["shape"], ',')) {
        const double v = parse_double(s);
        if (v != std::floor(v) || v < 1) throw Error(ErrorKind::InvalidGrid, "shape entries must be counts");
        grid.geometry.shape.push_back(static_cast<int>(v));
    }
    for (const auto& s : split(keys["min"], ',')) grid.geometry.lower.push_back(parse_double(s));
    for (const auto& s : split(keys["max"], ',')) grid.geometry.upper.push_back(parse_double(s));
    if (grid.geometry.dimension() != m) throw Error(ErrorKind::InvalidGrid, "shape does not match m");
    grid.geometry.check();
    grid.names = split(keys["fields"], ',');

    const Eigen::Index size = grid.geometry.size();
    std::string token;
    for (const auto& name : grid.names) {
        Eigen::ArrayXd values(size);
        for (Eigen::Index k = 0; k < size; ++k) {
            if (!(in >> token))
                throw Error(ErrorKind::InvalidGrid, "field '" + name + "' has fewer than " + std::to_string(size) +
                                                        " samples");
            values(k) = parse_double(token);
        }
        grid.fields.push_back(std::move(values));
    }
    if (in >> token) throw Error(ErrorKind::InvalidGrid, "trailing data after the last field");
    return grid;
}

GridSection read_grid_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidGrid, "cannot open grid file '" + path + "'");
    return read_grid(in);
}

void write_grid(std::ostream& out, const GridSection& grid)
{
    const auto& g = grid.geometry;
    auto join = [](const auto& values, auto fmt) {
        std::string s;
        for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + fmt(values[i]);
        return s;
    };
    out << "grid m=" << g.dimension() << " shape=" << join(g.shape, [](int v) { return std::to_string(v); })
        << " min=" << join(g.lower, format_double) << " max=" << join(g.upper, format_double)
        << " fields=" << join(grid.names, [](const std::string& s) { return s; }) << '\n';
    const int last = g.shape.back();
    for (std::size_t f = 0; f < grid.fields.size(); ++f) {
        if (f) out << '\n';
        for (Eigen::Index k = 0; k < grid.fields[f].size(); ++k)
            out << format_double(grid.fields[f](k)) << ((k + 1) % last == 0 ? '\n' : ' ');
    }
}

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// Central first difference along `axis` at nodes at least `layer` nodes
/// away from the boundary.
Eigen::ArrayXd central_first(const GridGeometry& g, const Eigen::ArrayXd& f, int axis, int layer)
{
    Eigen::ArrayXd out = Eigen::ArrayXd::Constant(g.size(), nan);
    const Eigen::Index s = g.stride(axis);
    const double h = g.spacing(axis);
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (g.interior(k, layer)) out(k) = (f(k + s) - f(k - s)) / (2 * h);
    return out;
}

Eigen::ArrayXd central_second(const GridGeometry& g, const Eigen::ArrayXd& f, int j, int k)
{
    Eigen::ArrayXd out = Eigen::ArrayXd::Constant(g.size(), nan);
    const Eigen::Index sj = g.stride(j);
    const Eigen::Index sk = g.stride(k);
    const double hj = g.spacing(j);
    const double hk = g.spacing(k);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (!g.interior(i, 1)) continue;
        if (j == k)
            out(i) = (f(i + sj) - 2 * f(i) + f(i - sj)) / (hj * hj);
        else
            out(i) = (f(i + sj + sk) - f(i + sj - sk) - f(i - sj + sk) + f(i - sj - sk)) / (4 * hj * hk);
    }
    return out;
}

Eigen::ArrayXd coordinate_array(const GridGeometry& g, int axis)
{
    Eigen::ArrayXd out(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) out(k) = g.coordinate(axis, g.unflatten(k)[axis]);
    return out;
}

void require_points(const GridGeometry& g, int minimum)
{
    for (int d = 0; d < g.dimension(); ++d)
        if (g.shape[d] < minimum)
            throw Error(ErrorKind::GridTooSmall, "axis " + std::to_string(d + 1) + " has " +
                                                     std::to_string(g.shape[d]) + " points, need at least " +
                                                     std::to_string(minimum));
}

}  // namespace

std::map<std::string, Eigen::ArrayXd> fd_jets(const ChartSet& charts, const GridSection& grid, int order)
{
    if (order < 1 || order > 2) throw Error(ErrorKind::ChartMismatch, "jets of order 1 or 2 only");
    const auto& g = grid.geometry;
    g.check();
    if (g.dimension() != charts.m()) throw Error(ErrorKind::ChartMismatch, "grid dimension differs from the base");
    require_points(g, 3);

    std::map<std::string, Eigen::ArrayXd> out;
    for (int i = 0; i < charts.m(); ++i) out[charts.base(i)] = coordinate_array(g, i);
    for (int a = 0; a < charts.n(); ++a) {
        const auto& y = grid.field(charts.fiber(a));
        out[charts.fiber(a)] = y;
        for (int j = 0; j < charts.m(); ++j) {
            out[charts.jet(a, j)] = central_first(g, y, j, 1);
            if (order == 2)
                for (int k = j; k < charts.m(); ++k) out[charts.jet2(a, j, k)] = central_second(g, y, j, k);
        }
    }
    return out;
}

double grid_l2(const std::vector<double>& values, double cell_volume)
{
    // pairwise reduction of the squares, fixed by the input order
    std::vector<double> level;
    level.reserve(values.size());
    for (double v : values) level.push_back(v * v);
    while (level.size() > 1) {
        std::vector<double> next((level.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = level[2 * i] + (2 * i + 1 < level.size() ? level[2 * i + 1] : 0.0);
        level = std::move(next);
    }
    return std::sqrt((level.empty() ? 0.0 : level.front()) * cell_volume);
}

ResidualReport residuals(const DynamicsSystem& system, const FieldModel& model, const ChartSet& charts,
                         const GridSection& grid, MomentumSource momenta, double tolerance,
                         const std::map<std::string, double>& parameters)
{
    if (system.space != Space::J2E && system.space != Space::J1P)
        throw Error(ErrorKind::ChartMismatch, "residuals need a system over J2E or J1P");
    const auto& g = grid.geometry;
    const bool legendre = system.space == Space::J1P && momenta == MomentumSource::Legendre;
    if (legendre) require_points(g, 5);

    auto values = fd_jets(charts, grid, system.space == Space::J2E ? 2 : 1);

    // parameters: grid field, then explicit value, then the model's fixed value
    const auto fixed = model.fixed_parameters();
    for (const auto& name : charts.parameters()) {
        if (const auto* f = grid.find(name)) {
            values[name] = *f;
        } else if (auto it = parameters.find(name); it != parameters.end()) {
            values[name] = Eigen::ArrayXd::Constant(g.size(), it->second);
        } else if (auto fx = fixed.find(name); fx != fixed.end()) {
            values[name] = Eigen::ArrayXd::Constant(g.size(), fx->second.to_double());
        }
    }

    int layer = 1;
    if (system.space == Space::J1P) {
        const auto lambda = legendre ? legendre_map(model, charts) : DenseMatrix<Expr>();
        std::vector<std::string> slots(charts.symbols(Space::J1E));
        for (const auto& p : charts.parameters())
            if (values.count(p)) slots.push_back(p);
        for (int a = 0; a < charts.n(); ++a)
            for (int j = 0; j < charts.m(); ++j) {
                const auto& name = charts.momentum(a, j);
                if (!legendre) {
                    values[name] = grid.field(name);
                    continue;
                }
                const CompiledExpr f(lambda(a, j), slots);
                Eigen::ArrayXd p = Eigen::ArrayXd::Constant(g.size(), nan);
                std::vector<double> point(slots.size());
                for (Eigen::Index k = 0; k < g.size(); ++k) {
                    if (!g.interior(k, 1)) continue;
                    for (std::size_t s = 0; s < slots.size(); ++s) point[s] = values.at(slots[s])(k);
                    p(k) = f(point);
                }
                values[name] = std::move(p);
            }
        layer = legendre ? 2 : 1;
        for (int a = 0; a < charts.n(); ++a)
            for (int j = 0; j < charts.m(); ++j)
                for (int k = 0; k < charts.m(); ++k)
                    values[charts.momentum_jet(a, j, k)] =
                        central_first(g, values.at(charts.momentum(a, j)), k, layer);
    }

    ResidualReport report;
    report.tolerance = tolerance;
    report.boundary_layer = layer;
    double volume = 1;
    for (int d = 0; d < g.dimension(); ++d) volume *= g.spacing(d);

    std::vector<Eigen::Index> nodes;
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (g.interior(k, layer)) nodes.push_back(k);

    bool ok = true;
    for (const auto& eq : system.equations) {
        const auto symbols = free_symbols(eq.residual);
        for (const auto& s : symbols)
            if (!values.count(s)) {
                if (charts.is_parameter(s))
                    throw Error(ErrorKind::MissingAssignment, "no value for parameter '" + s + "'");
                throw Error(ErrorKind::MissingField, "cannot evaluate '" + s + "' on the grid");
            }
        const CompiledExpr f(eq.residual, symbols);
        std::vector<double> point(symbols.size());
        std::vector<double> r;
        r.reserve(nodes.size());
        double max_abs = 0;
        for (Eigen::Index k : nodes) {
            for (std::size_t s = 0; s < symbols.size(); ++s) point[s] = values.at(symbols[s])(k);
            const double v = f(point);
            r.push_back(v);
            max_abs = std::max(max_abs, std::abs(v));
            if (std::isnan(v)) max_abs = std::numeric_limits<double>::infinity();
        }
        ResidualEntry entry{eq.text(), eq.kind, max_abs, grid_l2(r, volume), static_cast<Eigen::Index>(nodes.size())};
        ok = ok && max_abs <= tolerance;
        report.entries.push_back(std::move(entry));
    }
    report.passed = ok;
    return report;
}

PoissonResult jacobi_poisson(const GridGeometry& geometry, const Eigen::ArrayXd& rho, int max_iterations,
                             double tolerance)
{
    geometry.check();
    if (rho.size() != geometry.size()) throw Error(ErrorKind::InvalidGrid, "source does not match the grid");
    const int m = geometry.dimension();
    std::vector<Eigen::Index> stride(m);
    std::vector<double> inv_h2(m);
    double diag = 0;
    for (int d = 0; d < m; ++d) {
        stride[d] = geometry.stride(d);
        inv_h2[d] = 1.0 / (geometry.spacing(d) * geometry.spacing(d));
        diag += 2 * inv_h2[d];
    }
    std::vector<Eigen::Index> nodes;
    for (Eigen::Index k = 0; k < geometry.size(); ++k)
        if (geometry.interior(k, 1)) nodes.push_back(k);

    PoissonResult result;
    result.phi = Eigen::ArrayXd::Zero(geometry.size());
    Eigen::ArrayXd next = result.phi;
    while (result.iterations < max_iterations) {
        double update = 0;
        for (Eigen::Index k : nodes) {
            double acc = -rho(k);
            for (int d = 0; d < m; ++d) acc += (result.phi(k + stride[d]) + result.phi(k - stride[d])) * inv_h2[d];
            next(k) = acc / diag;
            update = std::max(update, std::abs(next(k) - result.phi(k)));
        }
        result.phi.swap(next);
        ++result.iterations;
        result.final_update = update;
        if (update < tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace jetfield

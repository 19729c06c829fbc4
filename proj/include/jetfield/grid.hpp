#pragma once

#include "jetfield/charts.hpp"
#include "jetfield/lagrangian.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace jetfield {

/// Uniform rectangular grid over a box of the base; samples are stored
/// row-major with the first axis varying slowest.
struct GridGeometry {
    std::vector<int> shape;
    std::vector<double> lower;
    std::vector<double> upper;

    [[nodiscard]] int dimension() const { return static_cast<int>(shape.size()); }
    [[nodiscard]] Eigen::Index size() const;
    [[nodiscard]] double spacing(int axis) const { return (upper[axis] - lower[axis]) / (shape[axis] - 1); }
    [[nodiscard]] Eigen::Index stride(int axis) const;
    [[nodiscard]] std::vector<int> unflatten(Eigen::Index flat) const;
    [[nodiscard]] double coordinate(int axis, int index) const { return lower[axis] + index * spacing(axis); }
    /// True when every index is at least `layer` away from the boundary.
    [[nodiscard]] bool interior(Eigen::Index flat, int layer) const;

    /// Throws InvalidGrid on inconsistent sizes or non-positive extents.
    void check() const;
};

/// Samples of named fields (fibers, supplied momenta, or pointwise parameter
/// values) on a grid.
struct GridSection {
    GridGeometry geometry;
    std::vector<std::string> names;
    std::vector<Eigen::ArrayXd> fields;

    [[nodiscard]] const Eigen::ArrayXd* find(std::string_view name) const;
    /// Throws MissingField.
    [[nodiscard]] const Eigen::ArrayXd& field(std::string_view name) const;
};

using PointFunction = std::function<double(std::span<const double>)>;

/// Samples each function at the grid nodes.
GridSection sample(const GridGeometry& geometry, const std::vector<std::string>& names,
                   const std::vector<PointFunction>& functions);

/// Grid text format: a header line
///   grid m=<m> shape=<n1,...> min=<a1,...> max=<b1,...> fields=<y1,...>
/// followed by one whitespace-separated row-major block of numbers per field,
/// blocks separated by blank lines. Numbers use '.' regardless of locale.
GridSection read_grid(std::istream& in);
GridSection read_grid_file(const std::string& path);
void write_grid(std::ostream& out, const GridSection& grid);

/// Finite-difference jets keyed by chart symbol (x_i, y_a, y_a_j and, for
/// order 2, y_a_j_k). Values are valid on nodes at least one node from the
/// boundary; boundary nodes hold NaN. Throws GridTooSmall or MissingField.
std::map<std::string, Eigen::ArrayXd> fd_jets(const ChartSet& charts, const GridSection& grid, int order);

enum class MomentumSource { Legendre, Supplied };

struct ResidualEntry {
    std::string equation;
    EquationClass kind;
    double max_abs = 0.0;
    double l2 = 0.0;
    Eigen::Index points = 0;
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;
    double tolerance = 0.0;
    bool passed = false;
    int boundary_layer = 1;
};

/// Evaluates every equation of a J2E or J1P system at the interior nodes.
/// Parameter values come from grid fields of the same name, then from
/// `parameters`, then from the model's fixed values.
/// With Legendre momenta, p = dl/dy_j is synthesized before differencing, so
/// the residuals live two nodes inside the boundary.
ResidualReport residuals(const DynamicsSystem& system, const FieldModel& model, const ChartSet& charts,
                         const GridSection& grid, MomentumSource momenta, double tolerance,
                         const std::map<std::string, double>& parameters = {});

struct PoissonResult {
    Eigen::ArrayXd phi;
    int iterations = 0;
    double final_update = 0.0;
    bool converged = false;
};

/// Jacobi iteration for laplacian(phi) = rho with phi = 0 on the boundary.
/// Stops once the largest update is below `tolerance`; when the cap is hit
/// first the partial result is returned with converged = false.
PoissonResult jacobi_poisson(const GridGeometry& geometry, const Eigen::ArrayXd& rho, int max_iterations,
                             double tolerance);

/// sqrt(sum r^2 * cell volume) with a fixed pairwise summation order.
double grid_l2(const std::vector<double>& values, double cell_volume);

}  // namespace jetfield

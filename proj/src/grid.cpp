#include "epidiffuse/grid.hpp"

#include <cmath>

namespace epidiffuse {

namespace {

void check_axis(double length, int n) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw InputError("grid extent must be positive and finite");
    if (n < 3) throw InputError("grid needs at least 3 cells per axis");
}

}  // namespace

Grid Grid::line(double length, int n) {
    check_axis(length, n);
    Grid g;
    g.dim = 1;
    g.extent = {length, 0.0};
    g.cells = {n, 1};
    g.h = {length / n, 0.0};
    g.measure = length;
    return g;
}

Grid Grid::rect(double lx, double ly, int nx, int ny) {
    check_axis(lx, nx);
    check_axis(ly, ny);
    Grid g;
    g.dim = 2;
    g.extent = {lx, ly};
    g.cells = {nx, ny};
    g.h = {lx / nx, ly / ny};
    g.measure = lx * ly;
    return g;
}

Field constant_field(const Grid& grid, double c) {
    return {grid, Array::Constant(grid.total_cells(), c)};
}

Field laplacian(const Field& f) {
    const Grid& g = f.grid;
    const int nx = g.cells[0];
    const int ny = g.dim == 2 ? g.cells[1] : 1;
    Field out{g, Array::Zero(g.total_cells())};

    Eigen::Map<const Array2d> v(f.values.data(), nx, ny);
    Eigen::Map<Array2d> l(out.values.data(), nx, ny);

    // x direction; ghost value = adjacent interior value, so the boundary
    // stencil collapses to a one-sided difference.
    const double ihx2 = 1.0 / (g.h[0] * g.h[0]);
    l.middleRows(1, nx - 2) =
        (v.middleRows(0, nx - 2) - 2.0 * v.middleRows(1, nx - 2) + v.middleRows(2, nx - 2)) * ihx2;
    l.row(0) = (v.row(1) - v.row(0)) * ihx2;
    l.row(nx - 1) = (v.row(nx - 2) - v.row(nx - 1)) * ihx2;

    if (g.dim == 2) {
        const double ihy2 = 1.0 / (g.h[1] * g.h[1]);
        l.middleCols(1, ny - 2) +=
            (v.middleCols(0, ny - 2) - 2.0 * v.middleCols(1, ny - 2) + v.middleCols(2, ny - 2)) * ihy2;
        l.col(0) += (v.col(1) - v.col(0)) * ihy2;
        l.col(ny - 1) += (v.col(ny - 2) - v.col(ny - 1)) * ihy2;
    }
    return out;
}

double integrate(const Field& f) {
    double sum = 0.0;
    const double* p = f.values.data();
    const long n = f.values.size();
    for (long i = 0; i < n; ++i) sum += p[i];
    return sum * f.grid.cell_volume();
}

std::pair<double, double> extrema(const Field& f) {
    return {f.values.minCoeff(), f.values.maxCoeff()};
}

bool all_finite(const Field& f) { return f.values.allFinite(); }

long first_non_finite(const Field& f) {
    const double* p = f.values.data();
    for (long i = 0; i < f.values.size(); ++i)
        if (!std::isfinite(p[i])) return i;
    return -1;
}

}  // namespace epidiffuse

#ifndef POTENTIA_GRID_CALCULUS_HPP
#define POTENTIA_GRID_CALCULUS_HPP

#include "potentia/grid.hpp"
#include "potentia/kernels.hpp"

namespace potentia {

// Standard 5-point stencil (f_E + f_W + f_N + f_S - 4 f_C) / h^2. Nodes next
// to the mask boundary or to non-finite values are left unevaluated.
GridFunction discrete_laplacian(const GridFunction& f);

struct SubmeanReport {
    bool ok = true;
    double worst_defect = neg_inf();  // max over nodes of f(center) - mean(neighbors)
    Point worst_node{};
    long tested = 0;
    long skipped = 0;  // nodes with unmasked or non-finite neighbors
};

// f(center) <= mean of the 4 neighbors + tol at every interior node.
SubmeanReport discrete_submean_test(const GridFunction& f, double tol);

// Two-sided variant: |f(center) - mean(neighbors)| <= tol, the discrete
// harmonicity surrogate in function units.
SubmeanReport discrete_harmonic_test(const GridFunction& f, double tol);

// Sum of (f_outside - f_inside) over lattice edges crossing the boundary of
// the Chebyshev box of cell radius k around `center`'s nearest node. By the
// telescoping of the 5-point stencil this equals h^2 * sum of the discrete
// Laplacian over the enclosed nodes, i.e. the discrete flux of grad f.
// Requires all contour values masked and finite.
double flux_box(const GridFunction& f, Point center, int k);

struct RieszOptions {
    int m = 2;
    // Physical radius of the pole-fit contour; at least min_fit_cells cells.
    double fit_radius = 0.05;
    int min_fit_cells = 2;
};

struct RieszResult {
    AtomicMeasure measure;
    bool infinite = false;    // u identically -inf: nu(S) = +inf convention
    double clamped_mass = 0;  // negative Laplacian mass clamped to keep nu >= 0
    int fit_cells = 0;        // cell radius used for the pole charge fit
};

// Riesz measure nu_u = c_m * Lap(u): cell density from the clamped discrete
// Laplacian; each declared pole contributes a point charge fitted from the
// gradient flux through the box contour of radius fit_cells, with the density
// suppressed inside the box (the flux already accounts for it).
RieszResult riesz_measure(const GridFunction& u, const RieszOptions& opt = {});

// Extended-real integral of f against mu: atoms by bilinear interpolation,
// density cells by the midpoint rule. An atom outside f's masked cells is a
// domain mismatch.
double integrate(const GridFunction& f, const AtomicMeasure& mu);
double integrate(const std::function<double(Point)>& f, const AtomicMeasure& mu);

}  // namespace potentia

#endif

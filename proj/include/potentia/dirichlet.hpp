#ifndef POTENTIA_DIRICHLET_HPP
#define POTENTIA_DIRICHLET_HPP

#include "potentia/grid.hpp"

namespace potentia {

struct DirichletProblem {
    Domain domain;  // must be Dirichlet-regular
    std::function<double(Point)> boundary_data;
};

// Five-point Dirichlet solve on the lattice restricted to the domain.
// Lattice nodes inside the domain with an outside 4-neighbor become
// collocation nodes carrying boundary_data evaluated at the node position
// (first-order boundary treatment); the remaining inside nodes are unknowns
// of a sparse SPD system solved to ~1e-12 relative residual.
GridFunction solve_dirichlet(const Lattice& lat, const DirichletProblem& p);

// Green's function of `dom` with pole x0, normalized to a unit logarithmic
// singularity: g = H - h_2(. - x0) where H is the harmonic extension of the
// boundary trace of h_2(. - x0) (evaluated at projected boundary points when
// the shape supports projection). Extended by 0 outside the open domain.
struct GreenFunction {
    Domain domain;
    Point pole;
    GridFunction grid;  // g at in-domain nodes; the pole node, if any, is unset

    // 0 outside the open domain (and on its boundary); bilinear inside.
    double value(Point p) const;
};

GreenFunction green_function(const Lattice& lat, const Domain& dom, Point x0);

// Replace u strictly inside B(x0, r0) by the discrete-harmonic extension of
// its own rim-node values; u is kept unchanged from the rim outward. A
// discretely subharmonic input never decreases and keeps the submean
// property (discrete maximum principle). Requires the closed ball to be
// compactly contained in u's masked region.
GridFunction harmonic_extension_in_ball(const GridFunction& u, Point x0, double r0);

}  // namespace potentia

#endif

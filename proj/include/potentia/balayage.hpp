#ifndef POTENTIA_BALAYAGE_HPP
#define POTENTIA_BALAYAGE_HPP

#include "potentia/dirichlet.hpp"
#include "potentia/jensen.hpp"

namespace potentia {

struct SweepResult {
    GridFunction u0;        // harmonic inside the ball, u outside
    AtomicMeasure nu_u0;    // nu_u off the closed ball + the swept sphere layer
    double swept_mass = 0;  // total mass deposited on the sphere
    double interior_mass_flux = 0;  // flux-extracted nu_u(ball interior)
    double shell_mass = 0;  // input mass between the flux contour and the sphere
};

struct SweepOptions {
    int sphere_atoms = 360;   // discretization of the swept layer
    int contour_margin = 2;   // cells between the flux contour and the sphere
};

// Balayage out of B(x0, r0): replaces u inside the ball by its harmonic
// extension and redistributes the Riesz mass of the ball onto the sphere.
// The swept mass is extracted as c_2 times the jump of the discrete gradient
// flux between u and u0 through a lattice contour inside the sphere (u0 is
// discrete-harmonic there, so its flux vanishes to solver precision), plus
// the input mass in the thin shell the contour cannot see. The layer's
// angular distribution comes from the radial-derivative jump of u0 across
// the sphere, normalized to the extracted total.
SweepResult sweep_out_ball(const GridFunction& u, const AtomicMeasure& nu_u, Point x0,
                           double r0, const SweepOptions& opt = {});

struct ComparisonBound {
    double lhs = 0;  // int_{D minus closed ball} V d nu_u
    double rhs = 0;  // int_{D minus closed ball} V d nu_M + C
    double C = 0;
    double C0 = 0;  // measured sup (u - M)
    double C1 = 0;  // C0 - u0(x0) + M0(x0)
    bool holds = false;
    std::vector<std::string> hypothesis_violations;
};

struct ComparisonOptions {
    double tol = 1e-6;
    double harmonic_tol = -1;       // default 10 h^2
    int pole_collar_cells = 6;      // for the punctured-ball harmonicity check
    double normalization_tol = 0.05;
};

// Corollary-type comparison: under u <= M + const, the V-weighted Riesz mass
// of u off the closed ball is dominated by that of M plus an explicit
// constant C = b * nu_M(closed ball) + C1 from the sweep. Hypothesis
// violations (V not harmonic on the punctured ball, normalization != 1,
// sphere bound b exceeded, u - M unbounded) are reported individually.
ComparisonBound comparison_integral_bound(const GridFunction& u, const GridFunction& M,
                                          const AtomicMeasure& nu_u,
                                          const AtomicMeasure& nu_M,
                                          const JensenPotential& V, Point x0, double r0,
                                          double b, const ComparisonOptions& opt = {});

}  // namespace potentia

#endif

#ifndef POTENTIA_TESTFN_HPP
#define POTENTIA_TESTFN_HPP

#include "potentia/dirichlet.hpp"
#include "potentia/gluing.hpp"
#include "potentia/jensen.hpp"

namespace potentia {

// Nonnegative bounded subharmonic function on D \ K with boundary limit 0 on
// the outer boundary of D.
struct TestFunction {
    GridFunction values;  // masked to D \ K
    Domain domain;        // D
    Domain hole;          // K (closed)
    double sup_bound = 0;

    // Zero-extension evaluation: 0 outside D, interpolated inside.
    double value(Point p) const;
};

struct TestFnCheck {
    std::string name;
    bool ok = true;
    double worst = 0;
    Point worst_node{};
};

struct TestFnValidation {
    bool pass = false;
    TestFnCheck positivity;
    TestFnCheck boundary_limit;
    TestFnCheck boundedness;
    TestFnCheck subharmonicity;
};

struct TestFnTols {
    double positivity = 1e-9;
    // Boundary-collar values must be below collar_factor * h * gradient scale;
    // resolved against sup_bound.
    double boundary_factor = 25.0;
    double submean_factor = 10.0;  // tol = factor * h^2 * scale
    double submean_scale = 1.0;
};

// Checks the four Definition-1 invariants on the lattice; throws
// GeometryError if K is not compactly contained in D or has empty interior.
TestFnValidation validate_test_function(const GridFunction& v, const Domain& D,
                                        const Domain& K, const TestFnTols& tols = {});

// Canonical construction: the Green function of D with pole x0 in Int K,
// restricted to D \ K. The sup bound sits on the collar of the hole boundary
// by the maximum principle.
TestFunction green_test_function(const Lattice& lat, const Domain& D, const Domain& K,
                                 Point x0);

struct Continuation {
    GridFunction v_tilde;  // on D minus the pole node
    Domain D0;
    Domain D1;
    double q = 0;  // sup of v on the collar of dD0
    double a = 0;  // inf of g_{D1}(., x0) on the collar of dD0
    double pole_coefficient = 0;          // extrapolated limit of v~ / |log r|
    NormalizationEstimate coefficient_estimate;
    int pole_collar_cells = 0;  // collar used by the harmonicity/submean checks
};

struct ContinuationOptions {
    double margin_cells = 5.0;   // D0 to D1 and D1 to D margins
    double dilate_cells = 1.5;   // K to D0 dilation
    double glue_tol = -1;        // default 10 h
};

// Continuation across the hole: picks D0 (K dilated by one cell) and a
// regular D1 with D0 c D1 c D, scales the Green function of D1 to dominate v
// on the collar of dD0, and glues. The result is subharmonic on D minus the
// pole, harmonic on the punctured ball inside K, equals v outside D1, and
// carries a positive finite logarithmic pole coefficient.
Continuation continue_test_function(const TestFunction& v, Point x0, double r0,
                                    const ContinuationOptions& opt = {});

// Cell radius such that h^4 / (4 r^4) * amplitude stays below tol outside the
// collar: the truncation floor of lattice tests near a logarithmic pole.
int pole_collar_cells(double amplitude, double tol);

}  // namespace potentia

#endif

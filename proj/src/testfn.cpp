#include "potentia/testfn.hpp"

#include <algorithm>
#include <cmath>

namespace potentia {

double TestFunction::value(Point p) const {
    if (!domain.contains(p)) return 0.0;
    const double h = values.lattice().h;
    const double depth = -domain.signed_distance(p);
    const double band = 2.5 * h;
    if (depth < band && domain.has_projection()) {
        // The lattice cannot resolve the boundary decay closer than one cell;
        // use the linear distance profile anchored at a resolved depth, which
        // is the correct first-order asymptotic for functions with boundary
        // limit 0.
        const Point b = domain.project_to_boundary(p);
        const double d = dist(p, b);
        Point inward{0, 0};
        if (d > 0) {
            inward = (1.0 / d) * (p - b);
        } else {
            return 0.0;
        }
        const Point q = b + band * inward;
        const double vq = values.interpolate_filled(q, 0.0);
        return std::max(0.0, vq * depth / band);
    }
    return values.interpolate_filled(p, 0.0);
}

TestFnValidation validate_test_function(const GridFunction& v, const Domain& D,
                                        const Domain& K, const TestFnTols& tols) {
    if (!is_compactly_contained(K, D)) {
        throw GeometryError("the hole K must be compactly contained in D");
    }
    if (K.kind() != ShapeKind::Mask) {
        // Analytic shapes have nonempty interior by construction.
    } else {
        bool interior = false;
        const MaskShape& m = K.mask_shape();
        for (int j = 1; j + 1 < m.ny && !interior; ++j) {
            for (int i = 1; i + 1 < m.nx; ++i) {
                if (m.at(i, j) && m.at(i - 1, j) && m.at(i + 1, j) && m.at(i, j - 1) &&
                    m.at(i, j + 1)) {
                    interior = true;
                    break;
                }
            }
        }
        if (!interior) throw GeometryError("the hole K must have nonempty interior");
    }

    const Lattice& lat = v.lattice();
    TestFnValidation out;
    out.positivity.name = "positivity";
    out.boundary_limit.name = "boundary-limit-zero";
    out.boundedness.name = "boundedness";
    out.subharmonicity.name = "subharmonicity";

    double sup = neg_inf();
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!v.in_mask(i, j)) continue;
            const double val = v.at(i, j);
            const Point p = lat.node(i, j);
            if (val < -tols.positivity && -val > out.positivity.worst) {
                out.positivity.ok = false;
                out.positivity.worst = -val;
                out.positivity.worst_node = p;
            }
            if (is_pos_inf(val)) {
                out.boundedness.ok = false;
                out.boundedness.worst = pos_inf();
                out.boundedness.worst_node = p;
            }
            sup = std::max(sup, val);
            // One-cell collar of the outer boundary of D.
            if (D.signed_distance(p) > -2.0 * lat.h) {
                const double limit_tol =
                    tols.boundary_factor * lat.h * std::max(1.0, std::abs(sup));
                if (std::abs(val) > limit_tol && std::abs(val) > out.boundary_limit.worst) {
                    out.boundary_limit.ok = false;
                    out.boundary_limit.worst = std::abs(val);
                    out.boundary_limit.worst_node = p;
                }
            }
        }
    }
    out.boundedness.worst = std::max(out.boundedness.worst, sup);

    const double submean_tol = tols.submean_factor * lat.h * lat.h * tols.submean_scale;
    const SubmeanReport rep = discrete_submean_test(v, submean_tol);
    out.subharmonicity.ok = rep.ok;
    out.subharmonicity.worst = rep.worst_defect;
    out.subharmonicity.worst_node = rep.worst_node;

    out.pass = out.positivity.ok && out.boundary_limit.ok && out.boundedness.ok &&
               out.subharmonicity.ok;
    return out;
}

TestFunction green_test_function(const Lattice& lat, const Domain& D, const Domain& K,
                                 Point x0) {
    if (!K.closure().contains(x0)) {
        throw GeometryError("the Green pole must lie in the interior of K");
    }
    const GreenFunction g = green_function(lat, D, x0);

    GridFunction v(lat);
    const Domain K_closed = K.closure();
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!g.grid.in_mask(i, j)) continue;
            const Point p = lat.node(i, j);
            if (K_closed.contains(p)) continue;
            v.set(i, j, g.grid.at(i, j));
        }
    }

    // Maximum principle: the sup sits on the collar of the hole boundary.
    double sup = 0;
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!v.in_mask(i, j)) continue;
            const Point p = lat.node(i, j);
            if (std::abs(K.signed_distance(p)) <= 2.0 * lat.h) {
                sup = std::max(sup, v.at(i, j));
            }
        }
    }
    TestFunction tf{std::move(v), D, K_closed, sup};
    const TestFnValidation val = validate_test_function(tf.values, D, K_closed);
    if (!val.pass) {
        throw Error("green_test_function output failed Definition-1 validation");
    }
    return tf;
}

int pole_collar_cells(double amplitude, double tol) {
    const double k = std::pow(std::max(amplitude, 1.0) / (2.0 * tol), 0.25);
    return std::clamp(static_cast<int>(std::ceil(k)) + 1, 4, 64);
}

Continuation continue_test_function(const TestFunction& v, Point x0, double r0,
                                    const ContinuationOptions& opt) {
    const Lattice& lat = v.values.lattice();
    const double h = lat.h;
    const Domain& D = v.domain;
    const Domain& K = v.hole;

    if (!is_compactly_contained(Domain::disk(x0, 2.0 * r0), K)) {
        throw GeometryError("continuation requires B(x0, 2 r0) inside K");
    }

    // D0: K dilated by one lattice cell. D1: concentric regular shape with
    // five-cell margins on both sides.
    const Domain D0 = K.dilated(opt.dilate_cells * h);
    const Domain D1 = D0.dilated(opt.margin_cells * h);
    if (!is_compactly_contained(D0, D1) || !is_compactly_contained(D1, D)) {
        throw GeometryError("no room for D0 and D1 between K and D at this resolution");
    }

    const GreenFunction g1 = green_function(lat, D1, x0);

    // Collar extrema of v and g1 on the lattice collar of dD0.
    double q = neg_inf(), a = pos_inf();
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const Point p = lat.node(i, j);
            if (std::abs(D0.signed_distance(p)) > 1.5 * h) continue;
            if (v.values.in_mask(i, j)) q = std::max(q, v.values.at(i, j));
            if (g1.grid.in_mask(i, j)) a = std::min(a, g1.grid.at(i, j));
        }
    }
    if (!std::isfinite(q) || !std::isfinite(a) || a <= 0) {
        throw GeometryError("degenerate continuation geometry: collar extrema q=" +
                            std::to_string(q) + " a=" + std::to_string(a));
    }

    // v0 = (q/a) g_{D1}(., x0) on D minus the pole node, extended by 0 off D1.
    const double amp = q / a;
    GridFunction v0(lat);
    int ip, jp;
    lat.nearest(x0, ip, jp);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const Point p = lat.node(i, j);
            if (!D.contains(p)) continue;
            if (g1.grid.in_mask(i, j)) {
                v0.set(i, j, amp * g1.grid.at(i, j));
            } else if (!D1.contains(p)) {
                v0.set(i, j, 0.0);
            }
            // The pole node itself stays unset.
        }
    }
    v0.add_pole(x0);

    // v restricted to O = D minus the closure of D0.
    const Domain D0_closed = D0.closure();
    GridFunction v_outer(lat);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!v.values.in_mask(i, j)) continue;
            const Point p = lat.node(i, j);
            if (D0_closed.contains(p)) continue;
            v_outer.set(i, j, v.values.at(i, j));
        }
    }

    Continuation out{glue(v_outer, v0, opt.glue_tol), D0, D1, q, a, 0,
                     NormalizationEstimate{}, 0};

    // Pole coefficient by dyadic circle means of the glued grid; radii are
    // grid-limited, so use levels 16h, 8h, 4h.
    NormalizationOptions nopt;
    nopt.r_start = 16.0 * h;
    nopt.levels = 3;
    const GridFunction& vt = out.v_tilde;
    out.coefficient_estimate = estimate_normalization(
        [&vt](Point p) { return vt.interpolate_filled(p, 0.0); }, x0, nopt);
    out.pole_coefficient = out.coefficient_estimate.value;
    out.pole_collar_cells = pole_collar_cells(amp, 10.0 * h * h);
    return out;
}

}  // namespace potentia

#include "potentia/balayage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "potentia/grid_calculus.hpp"

namespace potentia {

SweepResult sweep_out_ball(const GridFunction& u, const AtomicMeasure& nu_u, Point x0,
                           double r0, const SweepOptions& opt) {
    const Lattice& lat = u.lattice();
    const double h = lat.h;

    GridFunction u0 = harmonic_extension_in_ball(u, x0, r0);

    // Contour strictly inside the sphere: box corners at (k+1)*sqrt(2)*h must
    // stay below r0 minus a safety cell.
    const int k_in = static_cast<int>(
                         std::floor((r0 - (opt.contour_margin - 1) * h) /
                                    (h * std::numbers::sqrt2))) - 1;
    if (k_in < 1) {
        throw GeometryError("ball too small for the flux contour at this resolution");
    }
    const double c2 = riesz_constant(2);
    const double flux_u = flux_box(u, x0, k_in);
    const double flux_u0 = flux_box(u0, x0, k_in);

    SweepResult res{std::move(u0), AtomicMeasure{}, 0, 0, 0};
    res.interior_mass_flux = c2 * (flux_u - flux_u0);

    // Input mass between the contour box and the sphere, invisible to the flux.
    int ic, jc;
    lat.nearest(x0, ic, jc);
    const Point box_center = lat.node(ic, jc);
    auto inside_box = [&](Point p) {
        return std::max(std::abs(p.x - box_center.x), std::abs(p.y - box_center.y)) <=
               (k_in + 0.5) * h;
    };
    res.shell_mass = nu_u.mass_where(
        [&](Point p) { return !inside_box(p) && dist(p, x0) <= r0; });
    res.swept_mass = std::max(0.0, res.interior_mass_flux + res.shell_mass);

    // Angular distribution from the radial-derivative jump of u0 across the
    // sphere, normalized to the extracted total.
    std::vector<double> jump(opt.sphere_atoms, 0.0);
    double jump_sum = 0;
    for (int t = 0; t < opt.sphere_atoms; ++t) {
        const double th = 2.0 * std::numbers::pi * (t + 0.5) / opt.sphere_atoms;
        const Point dir{std::cos(th), std::sin(th)};
        auto radial = [&](double r) {
            return res.u0.interpolate({x0.x + r * dir.x, x0.y + r * dir.y});
        };
        const double outer = (radial(r0 + 2.5 * h) - radial(r0 + 1.5 * h)) / h;
        const double inner = (radial(r0 - 1.5 * h) - radial(r0 - 2.5 * h)) / h;
        jump[t] = std::max(0.0, outer - inner);
        jump_sum += jump[t];
    }
    res.nu_u0 = nu_u.restricted([&](Point p) { return dist(p, x0) > r0; });
    if (res.swept_mass > 0) {
        for (int t = 0; t < opt.sphere_atoms; ++t) {
            const double th = 2.0 * std::numbers::pi * (t + 0.5) / opt.sphere_atoms;
            const double w = jump_sum > 0 ? res.swept_mass * jump[t] / jump_sum
                                          : res.swept_mass / opt.sphere_atoms;
            if (w > 0) {
                res.nu_u0.atoms.push_back(
                    {{x0.x + r0 * std::cos(th), x0.y + r0 * std::sin(th)}, w});
            }
        }
    }
    return res;
}

ComparisonBound comparison_integral_bound(const GridFunction& u, const GridFunction& M,
                                          const AtomicMeasure& nu_u,
                                          const AtomicMeasure& nu_M,
                                          const JensenPotential& V, Point x0, double r0,
                                          double b, const ComparisonOptions& opt) {
    ComparisonBound out;
    const Lattice& lat = u.lattice();
    const double h = lat.h;
    const double harmonic_tol = opt.harmonic_tol > 0 ? opt.harmonic_tol : 10 * h * h;

    // Hypothesis: u <= M + const on the shared mask.
    double c0 = neg_inf();
    bool overlap = false;
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!u.in_mask(i, j) || !M.in_mask(i, j)) continue;
            overlap = true;
            const double du = u.at(i, j), dm = M.at(i, j);
            if (is_neg_inf(du)) continue;
            if (is_neg_inf(dm)) {
                c0 = pos_inf();
            } else {
                c0 = std::max(c0, du - dm);
            }
        }
    }
    if (!overlap || !std::isfinite(c0)) {
        out.hypothesis_violations.push_back("u <= M + const fails: no finite bound");
    }
    out.C0 = c0;

    // Hypothesis: V harmonic on the punctured ball (off a pole collar).
    {
        GridFunction vs(lat);
        const Domain ball = Domain::disk(x0, r0);
        int ic, jc;
        lat.nearest(x0, ic, jc);
        for (int j = 0; j < lat.ny; ++j) {
            for (int i = 0; i < lat.nx; ++i) {
                const Point p = lat.node(i, j);
                if (!ball.contains(p)) continue;
                if (std::max(std::abs(i - ic), std::abs(j - jc)) <= opt.pole_collar_cells)
                    continue;
                vs.set(i, j, V(p));
            }
        }
        if (vs.masked_count() > 8) {
            const SubmeanReport rep = discrete_harmonic_test(vs, harmonic_tol);
            if (!rep.ok) {
                out.hypothesis_violations.push_back(
                    "V is not harmonic on the punctured ball (defect " +
                    std::to_string(rep.worst_defect) + ")");
            }
        }
    }

    // Hypothesis: normalization at the pole equals 1.
    {
        NormalizationOptions nopt;
        nopt.r_start = 0.5 * r0;
        const NormalizationEstimate est = estimate_normalization(V.eval(), x0, nopt);
        if (std::abs(est.value - 1.0) > opt.normalization_tol) {
            out.hypothesis_violations.push_back(
                "V normalization at the pole is " + std::to_string(est.value) +
                ", expected 1");
        }
    }

    // Hypothesis: sup over the sphere <= b.
    {
        double sup = neg_inf();
        for (int t = 0; t < 256; ++t) {
            const double th = 2.0 * std::numbers::pi * t / 256;
            sup = std::max(sup, V({x0.x + r0 * std::cos(th), x0.y + r0 * std::sin(th)}));
        }
        if (sup > b + opt.tol) {
            out.hypothesis_violations.push_back("sup of V on the sphere exceeds b");
        }
    }

    const SweepResult su = sweep_out_ball(u, nu_u, x0, r0);
    const SweepResult sM = sweep_out_ball(M, nu_M, x0, r0);
    const double u0_x0 = su.u0.interpolate(x0);
    const double M0_x0 = sM.u0.interpolate(x0);
    out.C1 = out.C0 - u0_x0 + M0_x0;
    const double nuM_ball = nu_M.mass_where([&](Point p) { return dist(p, x0) <= r0; });
    out.C = b * nuM_ball + out.C1;

    auto off_ball = [&](Point p) { return dist(p, x0) > r0; };
    out.lhs = integrate(V.eval(), nu_u.restricted(off_ball));
    out.rhs = integrate(V.eval(), nu_M.restricted(off_ball)) + out.C;
    out.holds = out.lhs <= out.rhs + opt.tol;
    return out;
}

}  // namespace potentia

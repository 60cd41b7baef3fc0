#include "potentia/jensen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace potentia {

JensenMeasure dirac_measure(Point x0, const Domain& domain) {
    if (!domain.contains(x0)) throw GeometryError("Dirac center must lie in the domain");
    JensenMeasure mu{AtomicMeasure::from_atoms({{x0, 1.0}}), x0, domain};
    return mu;
}

JensenMeasure uniform_circle_measure(Point x0, double radius, int nodes,
                                     const Domain& domain) {
    if (nodes < 3) throw Error("circle measure needs at least 3 nodes");
    if (!is_compactly_contained(Domain::disk(x0, radius), domain)) {
        throw GeometryError("circle support must be compactly contained in the domain");
    }
    std::vector<AtomicMeasure::Atom> atoms;
    atoms.reserve(nodes);
    const double w = 1.0 / nodes;
    for (int k = 0; k < nodes; ++k) {
        const double th = 2.0 * std::numbers::pi * k / nodes;
        atoms.push_back({{x0.x + radius * std::cos(th), x0.y + radius * std::sin(th)}, w});
    }
    return JensenMeasure{AtomicMeasure::from_atoms(std::move(atoms)), x0, domain};
}

JensenMeasure mix_measures(const JensenMeasure& a, const JensenMeasure& b, double t) {
    if (t < 0 || t > 1) throw Error("mixture parameter must lie in [0, 1]");
    JensenMeasure out{AtomicMeasure{}, a.center, a.domain};
    for (const auto& atom : a.base.atoms) out.base.atoms.push_back({atom.p, t * atom.w});
    for (const auto& atom : b.base.atoms) {
        out.base.atoms.push_back({atom.p, (1 - t) * atom.w});
    }
    if (a.base.density || b.base.density) {
        throw Error("mixing density-carrying measures is not supported");
    }
    return out;
}

namespace {

// Subharmonic probe library used to falsify the submean property. The log
// probes are truncated below (still subharmonic) so that a quadrature atom
// colliding with a probe pole cannot blow the integral up to -inf; the pole
// radii are deliberately non-round to dodge common support circles.
std::vector<std::function<double(Point)>> submean_probes(const Domain& domain) {
    const BBox b = domain.bbox();
    const Point c{0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)};
    const double s = 0.25 * std::max(b.width(), b.height());
    std::vector<std::function<double(Point)>> probes;
    probes.emplace_back([](Point p) { return p.x; });
    probes.emplace_back([](Point p) { return -p.x; });
    probes.emplace_back([](Point p) { return p.y; });
    probes.emplace_back([](Point p) { return -p.y; });
    probes.emplace_back([c](Point p) { return dist(p, c) * dist(p, c); });
    const double radii[4] = {0.2347, 0.5411, 0.8293, 1.3117};
    const double angles[4] = {0.7, 2.3, 4.1, 5.6};
    for (int k = 0; k < 4; ++k) {
        const Point a = c + Point{s * radii[k] * std::cos(angles[k]),
                                  s * radii[k] * std::sin(angles[k])};
        probes.emplace_back(
            [a](Point p) { return std::max(kernel_h(2, p - a), -8.0); });
    }
    return probes;
}

}  // namespace

JensenValidation validate_jensen_measure(const JensenMeasure& mu, double tol) {
    JensenValidation v;
    v.mass = mu.base.total_mass();
    v.mass_ok = std::abs(v.mass - 1.0) <= 1e-9 + tol;

    v.support_ok = true;
    for (const auto& atom : mu.base.atoms) {
        if (mu.domain.signed_distance(atom.p) >= 0) {
            v.support_ok = false;
            v.detail = "atom outside the domain";
            break;
        }
    }
    if (mu.base.density && v.support_ok) {
        const Lattice& lat = mu.base.density->lat;
        for (int j = 0; j < lat.ny && v.support_ok; ++j) {
            for (int i = 0; i < lat.nx; ++i) {
                const int k = lat.index(i, j);
                if (mu.base.density->mask[k] && mu.base.density->cell[k] > 0 &&
                    mu.domain.signed_distance(lat.node(i, j)) >= 0) {
                    v.support_ok = false;
                    v.detail = "density support outside the domain";
                    break;
                }
            }
        }
    }

    v.submean_ok = true;
    for (const auto& probe : submean_probes(mu.domain)) {
        const double at_center = probe(mu.center);
        const double mean = integrate(probe, mu.base);
        const double gap = at_center - mean;
        v.worst_submean_gap = std::max(v.worst_submean_gap, gap);
        if (gap > tol + 1e-9) v.submean_ok = false;
    }

    v.ok = v.mass_ok && v.support_ok && v.submean_ok;
    return v;
}

JensenPotential JensenPotential::scaled(double s) const {
    if (s < 0) throw Error("potential scaling must be nonnegative");
    auto base = eval_;
    return JensenPotential([base, s](Point p) { return s * base(p); }, pole_, hull_,
                           s * normalization_);
}

JensenPotential potential_of_measure(const JensenMeasure& mu) {
    const Point pole = mu.center;
    double pole_weight = 0;
    // Flatten atoms and density cells (midpoint rule) into one quadrature list.
    std::vector<AtomicMeasure::Atom> quad;
    for (const auto& a : mu.base.atoms) {
        if (dist(a.p, pole) == 0.0) {
            pole_weight += a.w;
        } else {
            quad.push_back(a);
        }
    }
    if (mu.base.density) {
        const Lattice& lat = mu.base.density->lat;
        const double cell_area = lat.h * lat.h;
        for (int j = 0; j < lat.ny; ++j) {
            for (int i = 0; i < lat.nx; ++i) {
                const int k = lat.index(i, j);
                if (!mu.base.density->mask[k] || mu.base.density->cell[k] == 0.0) continue;
                quad.push_back({lat.node(i, j), mu.base.density->cell[k] * cell_area});
            }
        }
    }

    double supp_radius = 0;
    for (const auto& a : quad) supp_radius = std::max(supp_radius, dist(a.p, pole));

    const double kappa = pole_weight - 1.0;  // coefficient of h_2(. - pole)
    auto eval = [quad, pole, kappa](Point p) {
        double v = 0;
        bool ninf = false;
        for (const auto& a : quad) {
            const double k = kernel_h(2, p - a.p);
            if (is_neg_inf(k)) {
                ninf = true;
            } else {
                v += a.w * k;
            }
        }
        if (ninf) return neg_inf();
        if (kappa != 0.0) {
            const double k = kernel_h(2, p - pole);
            if (is_neg_inf(k)) return kappa < 0 ? pos_inf() : neg_inf();
            v += kappa * k;
        }
        return v;
    };

    const double hull_radius = std::max(supp_radius, 1e-12);
    return JensenPotential(eval, pole, Domain::disk(pole, hull_radius).closure(),
                           1.0 - pole_weight);
}

NormalizationEstimate estimate_normalization(const std::function<double(Point)>& V,
                                             Point pole,
                                             const NormalizationOptions& opt) {
    NormalizationEstimate est;
    std::vector<double> ts, ratios;
    for (int j = 0; j < opt.levels; ++j) {
        const double r = opt.r_start * std::pow(2.0, -j);
        double mean = 0;
        for (int k = 0; k < opt.angles; ++k) {
            const double th = 2.0 * std::numbers::pi * (k + 0.5) / opt.angles;
            mean += V({pole.x + r * std::cos(th), pole.y + r * std::sin(th)});
        }
        mean /= opt.angles;
        const double denom = std::abs(std::log(r));
        const double ratio = mean / denom;
        est.trace.emplace_back(r, ratio);
        ts.push_back(1.0 / denom);
        ratios.push_back(ratio);
    }
    // Least-squares fit ratio = a + b * t; the limit is a.
    const int n = static_cast<int>(ts.size());
    double st = 0, sr = 0, stt = 0, str = 0;
    for (int i = 0; i < n; ++i) {
        st += ts[i];
        sr += ratios[i];
        stt += ts[i] * ts[i];
        str += ts[i] * ratios[i];
    }
    const double det = n * stt - st * st;
    double a, b;
    if (std::abs(det) < 1e-30) {
        a = sr / n;
        b = 0;
    } else {
        b = (n * str - st * sr) / det;
        a = (sr - b * st) / n;
    }
    est.value = a;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(ratios[i] - (a + b * ts[i])));
    }
    est.spread = worst / std::max(std::abs(a), 0.1);
    est.stable = est.spread <= opt.instability_tol;
    return est;
}

NormalizationEstimate estimate_normalization(const JensenPotential& V,
                                             const NormalizationOptions& opt) {
    NormalizationOptions o = opt;
    if (V.hull().radius() > 0) {
        o.r_start = std::min(o.r_start, 0.25 * V.hull().radius());
    }
    return estimate_normalization(V.eval(), V.pole(), o);
}

MeasureRecovery measure_of_potential(const JensenPotential& V, const Domain& domain,
                                     const Lattice& lat, double atom_tol) {
    const NormalizationEstimate norm = estimate_normalization(V);
    const double atom_weight = 1.0 - norm.value;
    if (atom_weight < -atom_tol) {
        throw Error("measure_of_potential: computed pole atom weight " +
                    std::to_string(atom_weight) + " is negative");
    }

    GridFunction samples = GridFunction::sample(lat, domain, V.eval());
    GridFunction lap = discrete_laplacian(samples);
    const double c2 = riesz_constant(2);
    const double h2 = lat.h * lat.h;

    double clamped = 0;
    int ip, jp;
    lat.nearest(V.pole(), ip, jp);
    // Resolution-scaled pole exclusion: V is harmonic near its pole, and the
    // clamped truncation noise of the log singularity would otherwise
    // integrate to an O(1) constant in any fixed window.
    const int pole_box = std::max(2, static_cast<int>(std::lround(0.05 / lat.h)));
    AtomicMeasure::Density dens;
    dens.lat = lat;
    dens.cell.assign(static_cast<size_t>(lat.nx) * lat.ny, 0.0);
    dens.mask.assign(static_cast<size_t>(lat.nx) * lat.ny, 0);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!lap.in_mask(i, j)) continue;
            if (std::max(std::abs(i - ip), std::abs(j - jp)) <= pole_box) continue;
            const double d = c2 * lap.at(i, j);
            if (d >= 0) {
                dens.cell[lat.index(i, j)] = d;
            } else {
                clamped += -d * h2;
            }
            dens.mask[lat.index(i, j)] = 1;
        }
    }

    JensenMeasure mu{AtomicMeasure{}, V.pole(), domain};
    if (atom_weight > 0) mu.base.atoms.push_back({V.pole(), atom_weight});
    mu.base.density = std::move(dens);
    const double total = mu.base.total_mass();
    return MeasureRecovery{std::move(mu), norm, atom_weight, clamped, total};
}

double poisson_jensen_residual(const std::function<double(Point)>& u, double u_x0,
                               const AtomicMeasure& nu_u, const JensenMeasure& mu) {
    if (is_neg_inf(u_x0)) {
        throw HypothesisError("Poisson-Jensen requires u(x0) != -inf");
    }
    const JensenPotential V = potential_of_measure(mu);
    const Point pole = mu.center;
    const AtomicMeasure nu_off_pole =
        nu_u.restricted([pole](Point p) { return dist(p, pole) > 0; });
    const double lhs = u_x0 + integrate(V.eval(), nu_off_pole);
    const double rhs = integrate(u, mu.base);
    return std::abs(lhs - rhs);
}

double poisson_jensen_residual(const GridFunction& u, const AtomicMeasure& nu_u,
                               const JensenMeasure& mu) {
    const double u_x0 = u.interpolate(mu.center);
    return poisson_jensen_residual([&u](Point p) { return u.interpolate(p); }, u_x0,
                                   nu_u, mu);
}

}  // namespace potentia

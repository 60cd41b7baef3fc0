#include "potentia/grid_calculus.hpp"

#include <algorithm>
#include <cmath>

namespace potentia {

GridFunction discrete_laplacian(const GridFunction& f) {
    const Lattice& lat = f.lattice();
    GridFunction out(lat);
    const double h2 = lat.h * lat.h;
    for (int j = 1; j + 1 < lat.ny; ++j) {
        for (int i = 1; i + 1 < lat.nx; ++i) {
            if (!f.in_mask(i, j) || !f.in_mask(i - 1, j) || !f.in_mask(i + 1, j) ||
                !f.in_mask(i, j - 1) || !f.in_mask(i, j + 1)) {
                continue;
            }
            const double c = f.at(i, j);
            const double e = f.at(i + 1, j), w = f.at(i - 1, j);
            const double n = f.at(i, j + 1), s = f.at(i, j - 1);
            if (!std::isfinite(c) || !std::isfinite(e) || !std::isfinite(w) ||
                !std::isfinite(n) || !std::isfinite(s)) {
                continue;
            }
            out.set(i, j, (e + w + n + s - 4.0 * c) / h2);
        }
    }
    return out;
}

namespace {

SubmeanReport submean_impl(const GridFunction& f, double tol, bool two_sided) {
    const Lattice& lat = f.lattice();
    SubmeanReport rep;

    // Lattice tests are uninformative inside the truncation collar of a
    // logarithmic pole: sampling exact values there shows h^4/r^4 defects of
    // either sign. Skip a collar wide enough for pole amplitudes up to ~8.
    int collar = 2;
    if (!f.poles().empty() && tol > 0) {
        collar = std::clamp(static_cast<int>(std::ceil(std::pow(2.0 / tol, 0.25))), 2,
                            std::max(lat.nx, lat.ny) / 4);
    }
    std::vector<std::pair<int, int>> pole_nodes;
    for (const Point& p : f.poles()) {
        int ip, jp;
        lat.nearest(p, ip, jp);
        pole_nodes.emplace_back(ip, jp);
    }
    auto in_pole_collar = [&](int i, int j) {
        for (const auto& [ip, jp] : pole_nodes) {
            if (std::max(std::abs(i - ip), std::abs(j - jp)) <= collar) return true;
        }
        return false;
    };

    for (int j = 1; j + 1 < lat.ny; ++j) {
        for (int i = 1; i + 1 < lat.nx; ++i) {
            if (!f.in_mask(i, j)) continue;
            if (!pole_nodes.empty() && in_pole_collar(i, j)) {
                ++rep.skipped;
                continue;
            }
            if (!f.in_mask(i - 1, j) || !f.in_mask(i + 1, j) || !f.in_mask(i, j - 1) ||
                !f.in_mask(i, j + 1)) {
                ++rep.skipped;
                continue;
            }
            const double c = f.at(i, j);
            const double e = f.at(i + 1, j), w = f.at(i - 1, j);
            const double n = f.at(i, j + 1), s = f.at(i, j - 1);
            if (!std::isfinite(e) || !std::isfinite(w) || !std::isfinite(n) ||
                !std::isfinite(s) || is_pos_inf(c)) {
                ++rep.skipped;
                continue;
            }
            ++rep.tested;
            if (is_neg_inf(c)) continue;  // -inf <= anything
            double defect = c - 0.25 * (e + w + n + s);
            if (two_sided) defect = std::abs(defect);
            if (defect > rep.worst_defect) {
                rep.worst_defect = defect;
                rep.worst_node = lat.node(i, j);
            }
            if (defect > tol) rep.ok = false;
        }
    }
    return rep;
}

}  // namespace

SubmeanReport discrete_submean_test(const GridFunction& f, double tol) {
    return submean_impl(f, tol, false);
}

SubmeanReport discrete_harmonic_test(const GridFunction& f, double tol) {
    return submean_impl(f, tol, true);
}

double flux_box(const GridFunction& f, Point center, int k) {
    const Lattice& lat = f.lattice();
    int ic, jc;
    lat.nearest(center, ic, jc);
    if (ic - k - 1 < 0 || ic + k + 1 >= lat.nx || jc - k - 1 < 0 ||
        jc + k + 1 >= lat.ny) {
        throw DomainMismatchError("flux box exceeds the lattice");
    }
    auto term = [&](int i_in, int j_in, int i_out, int j_out) {
        if (!f.in_mask(i_in, j_in) || !f.in_mask(i_out, j_out)) {
            throw DomainMismatchError("flux box contour leaves the mask");
        }
        const double a = f.at(i_out, j_out), b = f.at(i_in, j_in);
        if (!std::isfinite(a) || !std::isfinite(b)) {
            throw DomainMismatchError("flux box contour hits non-finite values");
        }
        return a - b;
    };
    double flux = 0;
    for (int t = -k; t <= k; ++t) {
        flux += term(ic + k, jc + t, ic + k + 1, jc + t);  // east face
        flux += term(ic - k, jc + t, ic - k - 1, jc + t);  // west face
        flux += term(ic + t, jc + k, ic + t, jc + k + 1);  // north face
        flux += term(ic + t, jc - k, ic + t, jc - k - 1);  // south face
    }
    return flux;
}

RieszResult riesz_measure(const GridFunction& u, const RieszOptions& opt) {
    if (opt.m != 2) {
        throw InvalidDimensionError(
            "riesz_measure works on planar grids; only m = 2 is supported here");
    }
    const Lattice& lat = u.lattice();
    const double c_m = riesz_constant(opt.m);
    const double h2 = lat.h * lat.h;

    RieszResult res;
    if (u.masked_count() > 0) {
        bool all_ninf = true;
        for (int j = 0; j < lat.ny && all_ninf; ++j) {
            for (int i = 0; i < lat.nx; ++i) {
                if (u.in_mask(i, j) && !is_neg_inf(u.at(i, j))) {
                    all_ninf = false;
                    break;
                }
            }
        }
        if (all_ninf) {
            res.infinite = true;
            return res;
        }
    }

    const int fit_cells =
        std::max(opt.min_fit_cells, static_cast<int>(std::lround(opt.fit_radius / lat.h)));
    res.fit_cells = fit_cells;

    // Point charges at declared poles from the discrete gradient flux.
    for (const Point& pole : u.poles()) {
        const double flux = flux_box(u, pole, fit_cells);
        res.measure.atoms.push_back({pole, std::max(0.0, c_m * flux)});
    }

    // Cell density away from the pole boxes.
    GridFunction lap = discrete_laplacian(u);
    AtomicMeasure::Density dens;
    dens.lat = lat;
    dens.cell.assign(static_cast<size_t>(lat.nx) * lat.ny, 0.0);
    dens.mask.assign(static_cast<size_t>(lat.nx) * lat.ny, 0);
    auto in_pole_box = [&](int i, int j) {
        for (const Point& pole : u.poles()) {
            int ip, jp;
            lat.nearest(pole, ip, jp);
            if (std::max(std::abs(i - ip), std::abs(j - jp)) <= fit_cells) return true;
        }
        return false;
    };
    bool any_density = false;
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!lap.in_mask(i, j) || in_pole_box(i, j)) continue;
            const double d = c_m * lap.at(i, j);
            if (d >= 0) {
                dens.cell[lat.index(i, j)] = d;
            } else {
                res.clamped_mass += -d * h2;
            }
            dens.mask[lat.index(i, j)] = 1;
            any_density = true;
        }
    }
    if (any_density) res.measure.density = std::move(dens);
    return res;
}

namespace {

// Extended-real accumulator: a -inf contribution with positive weight makes
// the integral -inf (and symmetrically for +inf).
struct ExtAccumulator {
    double finite = 0;
    bool has_ninf = false;
    bool has_pinf = false;

    void add(double fval, double weight) {
        if (weight == 0) return;
        if (is_neg_inf(fval)) {
            has_ninf = true;
        } else if (is_pos_inf(fval)) {
            has_pinf = true;
        } else {
            finite += fval * weight;
        }
    }
    double result() const {
        if (has_ninf && !has_pinf) return neg_inf();
        if (has_pinf && !has_ninf) return pos_inf();
        if (has_ninf && has_pinf) {
            throw Error("integral is indeterminate: both +inf and -inf contributions");
        }
        return finite;
    }
};

template <typename Eval>
double integrate_impl(Eval&& eval, const AtomicMeasure& mu) {
    ExtAccumulator acc;
    for (const AtomicMeasure::Atom& a : mu.atoms) acc.add(eval(a.p), a.w);
    if (mu.density) {
        const Lattice& lat = mu.density->lat;
        const double cell_area = lat.h * lat.h;
        for (int j = 0; j < lat.ny; ++j) {
            for (int i = 0; i < lat.nx; ++i) {
                const int k = lat.index(i, j);
                if (!mu.density->mask[k] || mu.density->cell[k] == 0.0) continue;
                acc.add(eval(lat.node(i, j)), mu.density->cell[k] * cell_area);
            }
        }
    }
    return acc.result();
}

}  // namespace

double integrate(const GridFunction& f, const AtomicMeasure& mu) {
    return integrate_impl([&](Point p) { return f.interpolate(p); }, mu);
}

double integrate(const std::function<double(Point)>& f, const AtomicMeasure& mu) {
    return integrate_impl([&](Point p) { return f(p); }, mu);
}

}  // namespace potentia

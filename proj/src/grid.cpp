#include "potentia/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace potentia {

void Lattice::nearest(Point p, int& i, int& j) const {
    i = std::clamp(static_cast<int>(std::lround((p.x - box.xmin) / h)), 0, nx - 1);
    j = std::clamp(static_cast<int>(std::lround((p.y - box.ymin) / h)), 0, ny - 1);
}

bool Lattice::locate(Point p, int& i, int& j, double& fx, double& fy) const {
    const double gx = (p.x - box.xmin) / h;
    const double gy = (p.y - box.ymin) / h;
    if (gx < 0 || gy < 0 || gx > nx - 1 || gy > ny - 1) return false;
    i = std::min(static_cast<int>(gx), nx - 2);
    j = std::min(static_cast<int>(gy), ny - 2);
    fx = gx - i;
    fy = gy - j;
    return true;
}

Lattice make_lattice(BBox box, int n) {
    if (n < 2) throw Error("lattice needs at least 2 nodes per side");
    Lattice lat;
    const double side = std::max(box.width(), box.height());
    lat.h = side / (n - 1);
    lat.nx = static_cast<int>(std::ceil(box.width() / lat.h)) + 1;
    lat.ny = static_cast<int>(std::ceil(box.height() / lat.h)) + 1;
    lat.box = {box.xmin, box.xmin + (lat.nx - 1) * lat.h, box.ymin,
               box.ymin + (lat.ny - 1) * lat.h};
    return lat;
}

Lattice make_lattice(const Domain& dom, int n) {
    BBox b = dom.bbox();
    const double pad = std::max(b.width(), b.height()) / (n - 1);
    return make_lattice({b.xmin - pad, b.xmax + pad, b.ymin - pad, b.ymax + pad}, n);
}

GridFunction::GridFunction(Lattice lat)
    : lat_(lat),
      values_(static_cast<size_t>(lat.nx) * lat.ny, 0.0),
      mask_(static_cast<size_t>(lat.nx) * lat.ny, 0) {}

GridFunction GridFunction::sample(const Lattice& lat, const Domain& dom,
                                  const std::function<double(Point)>& f,
                                  std::vector<Point> poles) {
    GridFunction g(lat);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const Point p = lat.node(i, j);
            if (dom.contains(p)) g.set(i, j, f(p));
        }
    }
    g.poles_ = std::move(poles);
    return g;
}

double GridFunction::interpolate(Point p) const {
    int i, j;
    double fx, fy;
    if (!lat_.locate(p, i, j, fx, fy)) {
        throw DomainMismatchError("interpolation point outside the lattice box");
    }
    const int ks[4][2] = {{i, j}, {i + 1, j}, {i, j + 1}, {i + 1, j + 1}};
    const double ws[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
    double v = 0;
    for (int t = 0; t < 4; ++t) {
        if (ws[t] == 0.0) continue;  // corners with zero weight need not be masked
        if (!in_mask(ks[t][0], ks[t][1])) {
            throw DomainMismatchError("interpolation cell has unmasked corners");
        }
        const double c = at(ks[t][0], ks[t][1]);
        if (is_neg_inf(c)) return neg_inf();
        if (is_pos_inf(c)) return pos_inf();
        v += ws[t] * c;
    }
    return v;
}

double GridFunction::interpolate_filled(Point p, double fill) const {
    int i, j;
    double fx, fy;
    if (!lat_.locate(p, i, j, fx, fy)) return fill;
    auto corner = [&](int ii, int jj) {
        return in_mask(ii, jj) ? at(ii, jj) : fill;
    };
    const double v00 = corner(i, j), v10 = corner(i + 1, j);
    const double v01 = corner(i, j + 1), v11 = corner(i + 1, j + 1);
    return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 +
           fx * fy * v11;
}

bool GridFunction::cell_in_mask(Point p) const {
    int i, j;
    double fx, fy;
    if (!lat_.locate(p, i, j, fx, fy)) return false;
    return in_mask(i, j) && in_mask(i + 1, j) && in_mask(i, j + 1) &&
           in_mask(i + 1, j + 1);
}

size_t GridFunction::masked_count() const {
    return static_cast<size_t>(std::count(mask_.begin(), mask_.end(), uint8_t{1}));
}

double GridFunction::max_over_mask() const {
    double m = neg_inf();
    for (size_t k = 0; k < values_.size(); ++k) {
        if (mask_[k]) m = std::max(m, values_[k]);
    }
    return m;
}

double GridFunction::min_over_mask() const {
    double m = pos_inf();
    for (size_t k = 0; k < values_.size(); ++k) {
        if (mask_[k]) m = std::min(m, values_[k]);
    }
    return m;
}

void GridFunction::dump_csv(std::ostream& os) const {
    os << "x,y,value\n";
    os << std::setprecision(17);
    for (int j = 0; j < lat_.ny; ++j) {
        for (int i = 0; i < lat_.nx; ++i) {
            if (!in_mask(i, j)) continue;
            const Point p = lat_.node(i, j);
            os << p.x << ',' << p.y << ',' << at(i, j) << '\n';
        }
    }
}

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms) {
    for (const Atom& a : atoms) {
        if (a.w < 0) throw Error("atomic measure weights must be nonnegative");
    }
    AtomicMeasure mu;
    mu.atoms = std::move(atoms);
    return mu;
}

double AtomicMeasure::total_mass() const {
    double m = 0;
    for (const Atom& a : atoms) m += a.w;
    if (density) {
        const double cell_area = density->lat.h * density->lat.h;
        for (size_t k = 0; k < density->cell.size(); ++k) {
            if (density->mask[k]) m += density->cell[k] * cell_area;
        }
    }
    return m;
}

double AtomicMeasure::mass_where(const std::function<bool(Point)>& pred) const {
    double m = 0;
    for (const Atom& a : atoms) {
        if (pred(a.p)) m += a.w;
    }
    if (density) {
        const Lattice& lat = density->lat;
        const double cell_area = lat.h * lat.h;
        for (int j = 0; j < lat.ny; ++j) {
            for (int i = 0; i < lat.nx; ++i) {
                const int k = lat.index(i, j);
                if (density->mask[k] && pred(lat.node(i, j))) {
                    m += density->cell[k] * cell_area;
                }
            }
        }
    }
    return m;
}

AtomicMeasure AtomicMeasure::restricted(const std::function<bool(Point)>& pred) const {
    AtomicMeasure out;
    for (const Atom& a : atoms) {
        if (pred(a.p)) out.atoms.push_back(a);
    }
    if (density) {
        Density d = *density;
        const Lattice& lat = d.lat;
        for (int j = 0; j < lat.ny; ++j) {
            for (int i = 0; i < lat.nx; ++i) {
                const int k = lat.index(i, j);
                if (d.mask[k] && !pred(lat.node(i, j))) {
                    d.mask[k] = 0;
                    d.cell[k] = 0;
                }
            }
        }
        out.density = std::move(d);
    }
    return out;
}

void AtomicMeasure::dump_csv(std::ostream& os) const {
    os << "x,y,weight\n";
    os << std::setprecision(17);
    for (const Atom& a : atoms) os << a.p.x << ',' << a.p.y << ',' << a.w << '\n';
    if (density) {
        const Lattice& lat = density->lat;
        const double cell_area = lat.h * lat.h;
        for (int j = 0; j < lat.ny; ++j) {
            for (int i = 0; i < lat.nx; ++i) {
                const int k = lat.index(i, j);
                if (!density->mask[k] || density->cell[k] == 0.0) continue;
                const Point p = lat.node(i, j);
                os << p.x << ',' << p.y << ',' << density->cell[k] * cell_area << '\n';
            }
        }
    }
}

}  // namespace potentia

#ifndef POTENTIA_GRID_HPP
#define POTENTIA_GRID_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "potentia/geometry.hpp"

namespace potentia {

// Uniform square-spaced lattice over a bounding box.
struct Lattice {
    BBox box;
    int nx = 0, ny = 0;
    double h = 0.0;

    int index(int i, int j) const { return j * nx + i; }
    Point node(int i, int j) const { return {box.xmin + i * h, box.ymin + j * h}; }
    bool valid(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }

    // Node nearest to p (clamped to the lattice).
    void nearest(Point p, int& i, int& j) const;
    // Lower-left corner of the cell containing p plus in-cell fractions;
    // false if p is outside the box.
    bool locate(Point p, int& i, int& j, double& fx, double& fy) const;
};

// n nodes along the longer side of the box; square spacing, so the shorter
// side gets proportionally fewer nodes.
Lattice make_lattice(BBox box, int n);

// Lattice over the domain's bounding box padded by one cell.
Lattice make_lattice(const Domain& dom, int n);

// Extended-real-valued function sampled on a lattice with a node mask.
// Values at unmasked nodes are unset and ignored. Declared poles mark
// logarithmic -inf singularities for the Riesz extraction.
class GridFunction {
public:
    explicit GridFunction(Lattice lat);

    static GridFunction sample(const Lattice& lat, const Domain& dom,
                               const std::function<double(Point)>& f,
                               std::vector<Point> poles = {});

    const Lattice& lattice() const { return lat_; }
    bool in_mask(int i, int j) const { return mask_[lat_.index(i, j)] != 0; }
    double at(int i, int j) const { return values_[lat_.index(i, j)]; }
    void set(int i, int j, double v) {
        values_[lat_.index(i, j)] = v;
        mask_[lat_.index(i, j)] = 1;
    }
    void unset(int i, int j) { mask_[lat_.index(i, j)] = 0; }

    const std::vector<Point>& poles() const { return poles_; }
    void add_pole(Point p) { poles_.push_back(p); }
    void set_poles(std::vector<Point> p) { poles_ = std::move(p); }

    // Bilinear interpolation; requires all four cell corners masked and
    // finite. Throws DomainMismatchError otherwise.
    double interpolate(Point p) const;
    // Bilinear with unmasked corners replaced by `fill` (zero-extension
    // semantics for test functions); returns fill outside the box.
    double interpolate_filled(Point p, double fill) const;
    bool cell_in_mask(Point p) const;

    size_t masked_count() const;
    double max_over_mask() const;
    double min_over_mask() const;

    // CSV rows "x,y,value" for masked nodes.
    void dump_csv(std::ostream& os) const;

private:
    Lattice lat_;
    std::vector<double> values_;
    std::vector<uint8_t> mask_;
    std::vector<Point> poles_;
};

// Finite positive measure: weighted atoms plus an optional nonnegative
// node-centered cell density (cell area h^2).
struct AtomicMeasure {
    struct Atom {
        Point p;
        double w;
    };
    struct Density {
        Lattice lat;
        std::vector<double> cell;   // per node, >= 0
        std::vector<uint8_t> mask;  // nodes carrying density
    };

    std::vector<Atom> atoms;
    std::optional<Density> density;

    static AtomicMeasure from_atoms(std::vector<Atom> atoms);

    double total_mass() const;
    double mass_where(const std::function<bool(Point)>& pred) const;
    AtomicMeasure restricted(const std::function<bool(Point)>& pred) const;

    // CSV rows "x,y,weight": atoms first, then density cells as w = cell*h^2.
    void dump_csv(std::ostream& os) const;
};

}  // namespace potentia

#endif

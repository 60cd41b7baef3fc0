#ifndef POTENTIA_GEOMETRY_HPP
#define POTENTIA_GEOMETRY_HPP

#include <memory>
#include <optional>
#include <vector>

#include "potentia/common.hpp"

namespace potentia {

enum class ShapeKind { Disk, Annulus, Rectangle, Mask };

// Lattice-resolution mask shape: a bit per node of a uniform grid.
struct MaskShape {
    BBox box;
    int nx = 0, ny = 0;          // node counts
    std::vector<uint8_t> inside;  // nx*ny, row-major (j*nx + i)

    double hx() const { return box.width() / (nx - 1); }
    double hy() const { return box.height() / (ny - 1); }
    Point node(int i, int j) const {
        return {box.xmin + i * hx(), box.ymin + j * hy()};
    }
    bool at(int i, int j) const { return inside[static_cast<size_t>(j) * nx + i] != 0; }
};

// Geometric region descriptor. A Domain is open by default; closure() yields
// the closed variant used for compact sets (K, closed balls). Analytic shapes
// always carry regular = true; mask shapes declare their regularity flag.
class Domain {
public:
    static Domain disk(Point center, double radius);
    static Domain annulus(Point center, double r_in, double r_out);
    static Domain rectangle(BBox box);
    static Domain mask(MaskShape shape, bool regular);

    ShapeKind kind() const { return kind_; }
    bool is_closed() const { return closed_; }
    bool is_regular() const { return regular_; }
    Domain closure() const;

    Point center() const { return center_; }
    double radius() const { return r_out_; }
    double inner_radius() const { return r_in_; }
    const BBox& rect() const { return rect_; }
    const MaskShape& mask_shape() const { return *mask_; }

    BBox bbox() const;

    // Negative inside, positive outside, zero on the boundary. Exact for
    // analytic shapes, lattice-resolution for masks.
    double signed_distance(Point p) const;

    // Open containment for domains, closed for compact sets.
    bool contains(Point p) const;

    bool has_projection() const { return kind_ != ShapeKind::Mask; }
    Point project_to_boundary(Point p) const;

    // Grow/shrink an analytic shape by delta (disk/annulus radius, rectangle
    // sides). Throws for mask shapes.
    Domain dilated(double delta) const;

private:
    Domain() = default;

    ShapeKind kind_ = ShapeKind::Disk;
    bool closed_ = false;
    bool regular_ = true;
    Point center_{};
    double r_in_ = 0.0;
    double r_out_ = 0.0;
    BBox rect_{};
    std::shared_ptr<const MaskShape> mask_;
};

using CompactSet = Domain;

// True iff closure(inner) lies inside outer with positive distance.
bool is_compactly_contained(const Domain& inner, const Domain& outer);

struct BoundaryNode {
    Point p;
    double weight;  // arc-length weight
    int component;  // boundary component index
};

// Discretize the boundary with nodes spaced at ~resolution; weights sum to
// the boundary measure. Throws GeometryError for degenerate domains.
std::vector<BoundaryNode> boundary_nodes(const Domain& dom, double resolution);

// Connectivity of a mask shape's inside set (4-neighbor flood fill).
bool mask_is_connected(const MaskShape& shape);

}  // namespace potentia

#endif

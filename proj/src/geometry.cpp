#include "potentia/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace potentia {

Domain Domain::disk(Point center, double radius) {
    if (!(radius > 0)) throw GeometryError("disk radius must be positive");
    Domain d;
    d.kind_ = ShapeKind::Disk;
    d.center_ = center;
    d.r_out_ = radius;
    return d;
}

Domain Domain::annulus(Point center, double r_in, double r_out) {
    if (!(0 < r_in && r_in < r_out)) {
        throw GeometryError("annulus radii must satisfy 0 < r_in < r_out");
    }
    Domain d;
    d.kind_ = ShapeKind::Annulus;
    d.center_ = center;
    d.r_in_ = r_in;
    d.r_out_ = r_out;
    return d;
}

Domain Domain::rectangle(BBox box) {
    if (!(box.width() > 0 && box.height() > 0)) {
        throw GeometryError("rectangle must have positive width and height");
    }
    Domain d;
    d.kind_ = ShapeKind::Rectangle;
    d.rect_ = box;
    d.center_ = {0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax)};
    return d;
}

Domain Domain::mask(MaskShape shape, bool regular) {
    if (shape.nx < 2 || shape.ny < 2 ||
        shape.inside.size() != static_cast<size_t>(shape.nx) * shape.ny) {
        throw GeometryError("mask shape dimensions are inconsistent");
    }
    const size_t count = static_cast<size_t>(
        std::count(shape.inside.begin(), shape.inside.end(), uint8_t{1}));
    if (count == 0) throw GeometryError("mask shape is empty");
    if (count == shape.inside.size()) {
        throw GeometryError("mask shape must be a proper subset of its lattice");
    }
    if (!mask_is_connected(shape)) throw GeometryError("mask shape is disconnected");
    Domain d;
    d.kind_ = ShapeKind::Mask;
    d.regular_ = regular;
    d.mask_ = std::make_shared<MaskShape>(std::move(shape));
    return d;
}

Domain Domain::closure() const {
    Domain d = *this;
    d.closed_ = true;
    return d;
}

BBox Domain::bbox() const {
    switch (kind_) {
        case ShapeKind::Disk:
        case ShapeKind::Annulus:
            return {center_.x - r_out_, center_.x + r_out_, center_.y - r_out_,
                    center_.y + r_out_};
        case ShapeKind::Rectangle:
            return rect_;
        case ShapeKind::Mask:
            return mask_->box;
    }
    return {};
}

double Domain::signed_distance(Point p) const {
    switch (kind_) {
        case ShapeKind::Disk:
            return dist(p, center_) - r_out_;
        case ShapeKind::Annulus: {
            const double r = dist(p, center_);
            return std::max(r_in_ - r, r - r_out_);
        }
        case ShapeKind::Rectangle: {
            const double dx = std::max(rect_.xmin - p.x, p.x - rect_.xmax);
            const double dy = std::max(rect_.ymin - p.y, p.y - rect_.ymax);
            if (dx <= 0 && dy <= 0) return std::max(dx, dy);
            return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
        }
        case ShapeKind::Mask: {
            // Lattice resolution: distance to the nearest node of opposite state.
            const MaskShape& m = *mask_;
            const double hx = m.hx(), hy = m.hy();
            int i = static_cast<int>(std::lround((p.x - m.box.xmin) / hx));
            int j = static_cast<int>(std::lround((p.y - m.box.ymin) / hy));
            i = std::clamp(i, 0, m.nx - 1);
            j = std::clamp(j, 0, m.ny - 1);
            const bool inside = m.at(i, j) && m.box.contains(p);
            double best = pos_inf();
            for (int jj = 0; jj < m.ny; ++jj) {
                for (int ii = 0; ii < m.nx; ++ii) {
                    if (m.at(ii, jj) == inside) continue;
                    best = std::min(best, dist(p, m.node(ii, jj)));
                }
            }
            if (std::isinf(best)) best = std::max(hx, hy);
            return inside ? -best : best;
        }
    }
    return pos_inf();
}

bool Domain::contains(Point p) const {
    const double sd = signed_distance(p);
    return closed_ ? sd <= 0 : sd < 0;
}

Point Domain::project_to_boundary(Point p) const {
    switch (kind_) {
        case ShapeKind::Disk: {
            const double r = dist(p, center_);
            if (r == 0.0) return {center_.x + r_out_, center_.y};
            return center_ + (r_out_ / r) * (p - center_);
        }
        case ShapeKind::Annulus: {
            const double r = dist(p, center_);
            if (r == 0.0) return {center_.x + r_in_, center_.y};
            const double target = (r - r_in_ < r_out_ - r) ? r_in_ : r_out_;
            return center_ + (target / r) * (p - center_);
        }
        case ShapeKind::Rectangle: {
            // Clamp to the closed box, then push interior points to the
            // nearest side.
            Point q{std::clamp(p.x, rect_.xmin, rect_.xmax),
                    std::clamp(p.y, rect_.ymin, rect_.ymax)};
            const double dl = q.x - rect_.xmin, dr = rect_.xmax - q.x;
            const double db = q.y - rect_.ymin, dt = rect_.ymax - q.y;
            const double m = std::min({dl, dr, db, dt});
            if (m > 0) {
                if (m == dl) q.x = rect_.xmin;
                else if (m == dr) q.x = rect_.xmax;
                else if (m == db) q.y = rect_.ymin;
                else q.y = rect_.ymax;
            }
            return q;
        }
        case ShapeKind::Mask:
            throw GeometryError("mask domains do not support boundary projection");
    }
    return p;
}

Domain Domain::dilated(double delta) const {
    switch (kind_) {
        case ShapeKind::Disk: {
            Domain d = Domain::disk(center_, r_out_ + delta);
            d.closed_ = closed_;
            return d;
        }
        case ShapeKind::Annulus: {
            Domain d = Domain::annulus(center_, r_in_ - delta, r_out_ + delta);
            d.closed_ = closed_;
            return d;
        }
        case ShapeKind::Rectangle: {
            Domain d = Domain::rectangle({rect_.xmin - delta, rect_.xmax + delta,
                                          rect_.ymin - delta, rect_.ymax + delta});
            d.closed_ = closed_;
            return d;
        }
        case ShapeKind::Mask:
            throw GeometryError("mask domains do not support analytic dilation");
    }
    return *this;
}

bool mask_is_connected(const MaskShape& shape) {
    const int nx = shape.nx, ny = shape.ny;
    std::vector<uint8_t> seen(shape.inside.size(), 0);
    int start = -1;
    for (size_t k = 0; k < shape.inside.size(); ++k) {
        if (shape.inside[k]) {
            start = static_cast<int>(k);
            break;
        }
    }
    if (start < 0) return false;
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    size_t visited = 0;
    while (!q.empty()) {
        const int k = q.front();
        q.pop();
        ++visited;
        const int i = k % nx, j = k / nx;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int t = 0; t < 4; ++t) {
            const int ii = i + di[t], jj = j + dj[t];
            if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
            const int kk = jj * nx + ii;
            if (shape.inside[kk] && !seen[kk]) {
                seen[kk] = 1;
                q.push(kk);
            }
        }
    }
    const size_t total = static_cast<size_t>(
        std::count(shape.inside.begin(), shape.inside.end(), uint8_t{1}));
    return visited == total;
}

namespace {

// Max of outer's signed distance over a dense sample of inner's boundary.
double sampled_max_signed_distance(const Domain& inner, const Domain& outer) {
    double worst = neg_inf();
    const BBox b = inner.bbox();
    const double res = std::max(b.width(), b.height()) / 512.0;
    for (const BoundaryNode& n : boundary_nodes(inner, res)) {
        worst = std::max(worst, outer.signed_distance(n.p));
    }
    return worst;
}

}  // namespace

bool is_compactly_contained(const Domain& inner, const Domain& outer) {
    // Exact closed forms for the analytic pairs; sampled fallback otherwise.
    const ShapeKind ik = inner.kind(), ok = outer.kind();
    if (ik == ShapeKind::Disk && ok == ShapeKind::Disk) {
        return dist(inner.center(), outer.center()) + inner.radius() < outer.radius();
    }
    if (ik == ShapeKind::Annulus && ok == ShapeKind::Disk) {
        return dist(inner.center(), outer.center()) + inner.radius() < outer.radius();
    }
    if (ik == ShapeKind::Rectangle && ok == ShapeKind::Disk) {
        const BBox& r = inner.rect();
        const Point corners[4] = {{r.xmin, r.ymin}, {r.xmax, r.ymin},
                                  {r.xmin, r.ymax}, {r.xmax, r.ymax}};
        for (const Point& c : corners) {
            if (dist(c, outer.center()) >= outer.radius()) return false;
        }
        return true;
    }
    if (ik == ShapeKind::Disk && ok == ShapeKind::Rectangle) {
        const BBox& r = outer.rect();
        const Point c = inner.center();
        const double rad = inner.radius();
        return c.x - rad > r.xmin && c.x + rad < r.xmax && c.y - rad > r.ymin &&
               c.y + rad < r.ymax;
    }
    if (ik == ShapeKind::Rectangle && ok == ShapeKind::Rectangle) {
        const BBox& a = inner.rect();
        const BBox& b = outer.rect();
        return a.xmin > b.xmin && a.xmax < b.xmax && a.ymin > b.ymin && a.ymax < b.ymax;
    }
    if (ik == ShapeKind::Mask) {
        // Lattice surrogate: every inside node strictly interior to outer by
        // more than one cell.
        const MaskShape& m = inner.mask_shape();
        const double margin = std::max(m.hx(), m.hy());
        for (int j = 0; j < m.ny; ++j) {
            for (int i = 0; i < m.nx; ++i) {
                if (m.at(i, j) && outer.signed_distance(m.node(i, j)) > -margin) {
                    return false;
                }
            }
        }
        return true;
    }
    return sampled_max_signed_distance(inner, outer) < 0;
}

namespace {

void append_circle(std::vector<BoundaryNode>& out, Point c, double r,
                   double resolution, int component) {
    const double circumference = 2.0 * std::numbers::pi * r;
    const int n = std::max(16, static_cast<int>(std::ceil(circumference / resolution)));
    const double w = circumference / n;
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n;
        out.push_back({{c.x + r * std::cos(th), c.y + r * std::sin(th)}, w, component});
    }
}

void append_segment(std::vector<BoundaryNode>& out, Point a, Point b,
                    double resolution, int component) {
    const double len = dist(a, b);
    const int n = std::max(2, static_cast<int>(std::ceil(len / resolution)));
    const double w = len / n;
    for (int k = 0; k < n; ++k) {
        const double t = (k + 0.5) / n;
        out.push_back({{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, w, component});
    }
}

}  // namespace

std::vector<BoundaryNode> boundary_nodes(const Domain& dom, double resolution) {
    if (!(resolution > 0)) throw GeometryError("boundary resolution must be positive");
    std::vector<BoundaryNode> out;
    switch (dom.kind()) {
        case ShapeKind::Disk:
            append_circle(out, dom.center(), dom.radius(), resolution, 0);
            break;
        case ShapeKind::Annulus:
            append_circle(out, dom.center(), dom.radius(), resolution, 0);
            append_circle(out, dom.center(), dom.inner_radius(), resolution, 1);
            break;
        case ShapeKind::Rectangle: {
            const BBox& r = dom.rect();
            append_segment(out, {r.xmin, r.ymin}, {r.xmax, r.ymin}, resolution, 0);
            append_segment(out, {r.xmax, r.ymin}, {r.xmax, r.ymax}, resolution, 0);
            append_segment(out, {r.xmax, r.ymax}, {r.xmin, r.ymax}, resolution, 0);
            append_segment(out, {r.xmin, r.ymax}, {r.xmin, r.ymin}, resolution, 0);
            break;
        }
        case ShapeKind::Mask: {
            const MaskShape& m = dom.mask_shape();
            const double h = std::max(m.hx(), m.hy());
            bool any = false;
            for (int j = 0; j < m.ny; ++j) {
                for (int i = 0; i < m.nx; ++i) {
                    if (!m.at(i, j)) continue;
                    any = true;
                    const bool edge = i == 0 || i == m.nx - 1 || j == 0 || j == m.ny - 1 ||
                                      !m.at(i - 1, j) || !m.at(i + 1, j) ||
                                      !m.at(i, j - 1) || !m.at(i, j + 1);
                    if (edge) out.push_back({m.node(i, j), h, 0});
                }
            }
            if (!any) throw GeometryError("mask domain has empty interior");
            break;
        }
    }
    if (out.empty()) throw GeometryError("domain has a degenerate boundary");
    return out;
}

}  // namespace potentia

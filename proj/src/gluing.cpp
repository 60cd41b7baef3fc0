#include "potentia/gluing.hpp"

#include <algorithm>
#include <cmath>

namespace potentia {

GridFunction glue(const GridFunction& v, const GridFunction& v0, double tol) {
    const Lattice& lat = v.lattice();
    if (lat.nx != v0.lattice().nx || lat.ny != v0.lattice().ny ||
        lat.h != v0.lattice().h) {
        throw DomainMismatchError("glue requires both functions on the same lattice");
    }
    if (tol < 0) tol = 10.0 * lat.h;

    // O subset O0.
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (v.in_mask(i, j) && !v0.in_mask(i, j)) {
                throw DomainMismatchError("glue requires v's set inside v0's set");
            }
        }
    }

    // Collar check of the boundary-compatibility hypothesis.
    double worst_gap = neg_inf();
    Point worst_node{};
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!v.in_mask(i, j)) continue;
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            bool collar = false;
            for (int t = 0; t < 4; ++t) {
                const int ii = i + di[t], jj = j + dj[t];
                if (!lat.valid(ii, jj)) continue;
                if (v0.in_mask(ii, jj) && !v.in_mask(ii, jj)) {
                    collar = true;
                    break;
                }
            }
            if (!collar) continue;
            const double gap = v.at(i, j) - v0.at(i, j);
            if (gap > worst_gap) {
                worst_gap = gap;
                worst_node = lat.node(i, j);
            }
        }
    }
    if (worst_gap > tol) {
        throw GluingHypothesisError(
            "gluing hypothesis violated: v exceeds v0 by " + std::to_string(worst_gap) +
                " at the collar of the inner set",
            worst_node, worst_gap);
    }

    GridFunction out(lat);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!v0.in_mask(i, j)) continue;
            if (v.in_mask(i, j)) {
                out.set(i, j, std::max(v.at(i, j), v0.at(i, j)));
            } else {
                out.set(i, j, v0.at(i, j));
            }
        }
    }
    std::vector<Point> poles = v0.poles();
    poles.insert(poles.end(), v.poles().begin(), v.poles().end());
    out.set_poles(std::move(poles));
    return out;
}

}  // namespace potentia

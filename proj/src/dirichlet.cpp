#include "potentia/dirichlet.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <queue>

#include "potentia/kernels.hpp"

namespace potentia {

namespace {

enum NodeState : uint8_t { kOutside = 0, kCollocation = 1, kUnknown = 2 };

struct NodeClassification {
    std::vector<uint8_t> state;
    std::vector<int> unknown_index;  // -1 unless kUnknown
    int n_unknown = 0;
};

NodeClassification classify_nodes(const Lattice& lat, const Domain& dom) {
    NodeClassification cls;
    const size_t total = static_cast<size_t>(lat.nx) * lat.ny;
    cls.state.assign(total, kOutside);
    cls.unknown_index.assign(total, -1);
    std::vector<uint8_t> inside(total, 0);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (dom.contains(lat.node(i, j))) inside[lat.index(i, j)] = 1;
        }
    }
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const int k = lat.index(i, j);
            if (!inside[k]) continue;
            const bool edge = i == 0 || i == lat.nx - 1 || j == 0 || j == lat.ny - 1;
            const bool rim = edge || !inside[lat.index(i - 1, j)] ||
                             !inside[lat.index(i + 1, j)] || !inside[lat.index(i, j - 1)] ||
                             !inside[lat.index(i, j + 1)];
            if (rim) {
                cls.state[k] = kCollocation;
            } else {
                cls.state[k] = kUnknown;
                cls.unknown_index[k] = cls.n_unknown++;
            }
        }
    }
    return cls;
}

// The unknowns must form a single 4-connected component; a split mask makes
// the collocation data unable to pin every block meaningfully.
void check_connected(const Lattice& lat, const NodeClassification& cls) {
    if (cls.n_unknown == 0) return;
    int start = -1;
    for (size_t k = 0; k < cls.state.size(); ++k) {
        if (cls.state[k] == kUnknown) {
            start = static_cast<int>(k);
            break;
        }
    }
    std::vector<uint8_t> seen(cls.state.size(), 0);
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    int visited = 0;
    while (!q.empty()) {
        const int k = q.front();
        q.pop();
        ++visited;
        const int i = k % lat.nx, j = k / lat.nx;
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int t = 0; t < 4; ++t) {
            const int ii = i + di[t], jj = j + dj[t];
            if (!lat.valid(ii, jj)) continue;
            const int kk = lat.index(ii, jj);
            if (cls.state[kk] == kUnknown && !seen[kk]) {
                seen[kk] = 1;
                q.push(kk);
            }
        }
    }
    if (visited != cls.n_unknown) {
        throw SolverError("Dirichlet system is disconnected on the lattice");
    }
}

}  // namespace

GridFunction solve_dirichlet(const Lattice& lat, const DirichletProblem& p) {
    if (!p.domain.is_regular()) {
        throw SolverError("Dirichlet solve requires a regular-flagged domain");
    }
    const NodeClassification cls = classify_nodes(lat, p.domain);
    check_connected(lat, cls);

    GridFunction out(lat);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (cls.state[lat.index(i, j)] == kCollocation) {
                const double v = p.boundary_data(lat.node(i, j));
                if (!std::isfinite(v)) {
                    throw SolverError("Dirichlet boundary data must be finite");
                }
                out.set(i, j, v);
            }
        }
    }
    if (cls.n_unknown == 0) return out;

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(static_cast<size_t>(cls.n_unknown) * 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(cls.n_unknown);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const int k = lat.index(i, j);
            if (cls.state[k] != kUnknown) continue;
            const int row = cls.unknown_index[k];
            trips.emplace_back(row, row, 4.0);
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int t = 0; t < 4; ++t) {
                const int kk = lat.index(i + di[t], j + dj[t]);
                if (cls.state[kk] == kUnknown) {
                    trips.emplace_back(row, cls.unknown_index[kk], -1.0);
                } else {
                    rhs[row] += out.at(i + di[t], j + dj[t]);
                }
            }
        }
    }
    Eigen::SparseMatrix<double> A(cls.n_unknown, cls.n_unknown);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) {
        throw SolverError("Dirichlet system factorization failed");
    }
    Eigen::VectorXd x = solver.solve(rhs);
    const double rhs_norm = rhs.norm();
    if (rhs_norm > 0) {
        const double rel = (A * x - rhs).norm() / rhs_norm;
        if (rel > 1e-10) {
            throw SolverError("Dirichlet solve residual above 1e-10: " + std::to_string(rel));
        }
    }
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            const int k = lat.index(i, j);
            if (cls.state[k] == kUnknown) out.set(i, j, x[cls.unknown_index[k]]);
        }
    }
    return out;
}

double GreenFunction::value(Point p) const {
    if (!domain.contains(p)) return 0.0;
    return grid.interpolate_filled(p, 0.0);
}

GreenFunction green_function(const Lattice& lat, const Domain& dom, Point x0) {
    if (dom.signed_distance(x0) >= -lat.h) {
        throw GeometryError("Green pole must lie strictly inside the domain");
    }
    const bool project = dom.has_projection();
    DirichletProblem prob{
        dom, [&dom, x0, project](Point p) {
            const Point q = project ? dom.project_to_boundary(p) : p;
            return kernel_h(2, q - x0);
        }};
    GridFunction H = solve_dirichlet(lat, prob);

    GridFunction g(lat);
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!H.in_mask(i, j)) continue;
            const double s = kernel_h(2, lat.node(i, j) - x0);
            if (is_neg_inf(s)) continue;  // pole sits on a node: leave it unset
            g.set(i, j, H.at(i, j) - s);
        }
    }
    g.add_pole(x0);
    return GreenFunction{dom, x0, std::move(g)};
}

GridFunction harmonic_extension_in_ball(const GridFunction& u, Point x0, double r0) {
    const Lattice& lat = u.lattice();
    const Domain ball = Domain::disk(x0, r0);
    // The closed ball plus one stencil cell must be inside u's masked region.
    int ic, jc;
    lat.nearest(x0, ic, jc);
    const int reach = static_cast<int>(std::ceil(r0 / lat.h)) + 2;
    if (ic - reach < 0 || ic + reach >= lat.nx || jc - reach < 0 || jc + reach >= lat.ny) {
        throw GeometryError("ball is not compactly contained in the lattice");
    }
    for (int j = jc - reach; j <= jc + reach; ++j) {
        for (int i = ic - reach; i <= ic + reach; ++i) {
            if (dist(lat.node(i, j), x0) <= r0 + 2 * lat.h && !u.in_mask(i, j)) {
                throw GeometryError("ball is not compactly contained in u's domain");
            }
        }
    }
    // Rim nodes keep u's own values: the discrete sweep then never decreases
    // a discretely subharmonic u and preserves the submean property exactly
    // (discrete maximum principle).
    DirichletProblem prob{ball, [&u](Point p) { return u.interpolate(p); }};
    GridFunction inside = solve_dirichlet(lat, prob);

    GridFunction out = u;
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (inside.in_mask(i, j)) out.set(i, j, inside.at(i, j));
        }
    }
    // Declared poles inside the ball are harmonically filled away.
    std::vector<Point> poles;
    for (const Point& p : u.poles()) {
        if (dist(p, x0) >= r0) poles.push_back(p);
    }
    out.set_poles(std::move(poles));
    return out;
}

}  // namespace potentia

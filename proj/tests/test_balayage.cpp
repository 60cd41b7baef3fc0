#include <doctest.h>

#include <cmath>
#include <numbers>
#include <complex>
#include <random>

#include "potentia/balayage.hpp"
#include "potentia/testfn.hpp"

using namespace potentia;

namespace {
const Domain kUnitDisk = Domain::disk({0, 0}, 1.0);

GridFunction log_poly(const Lattice& lat, const std::vector<Point>& zeros) {
    return GridFunction::sample(
        lat, kUnitDisk,
        [&zeros](Point p) {
            double s = 0;
            for (const Point& z : zeros) s += kernel_h(2, p - z);
            return s;
        },
        zeros);
}
}  // namespace

TEST_CASE("sweeping with no mass in the ball changes nothing") {
    const Lattice lat = make_lattice(kUnitDisk, 128);
    const std::vector<Point> zeros = {{0.7, 0.1}};
    const GridFunction u = log_poly(lat, zeros);
    const AtomicMeasure nu = AtomicMeasure::from_atoms({{{0.7, 0.1}, 1.0}});
    const SweepResult sw = sweep_out_ball(u, nu, {0, 0}, 0.25);
    CHECK(sw.swept_mass == doctest::Approx(0.0).epsilon(1e-3));
    REQUIRE(sw.nu_u0.atoms.size() >= 1);
    CHECK(sw.nu_u0.atoms[0].p.x == 0.7);
    CHECK(sw.nu_u0.atoms[0].w == 1.0);
    CHECK(sw.nu_u0.total_mass() == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("sweeping log|z| out of B(0,r) gives the uniform sphere measure") {
    const Lattice lat = make_lattice(kUnitDisk, 256);
    const GridFunction u = log_poly(lat, {{0, 0}});
    const AtomicMeasure nu = AtomicMeasure::from_atoms({{{0, 0}, 1.0}});
    const double r = 0.3;
    const SweepResult sw = sweep_out_ball(u, nu, {0, 0}, r);
    CHECK(sw.swept_mass == doctest::Approx(1.0).epsilon(2e-2));
    // Harmonic measure of the disk at its center is uniform: the sphere
    // atoms deviate little from the mean weight.
    REQUIRE(sw.nu_u0.atoms.size() > 100);
    double wmin = pos_inf(), wmax = 0;
    for (const auto& a : sw.nu_u0.atoms) {
        CHECK(std::abs(dist(a.p, {0, 0}) - r) < 1e-9);
        wmin = std::min(wmin, a.w);
        wmax = std::max(wmax, a.w);
    }
    CHECK(wmax / wmin < 1.25);
}

TEST_CASE("mass conservation for a polynomial with a zero inside the ball") {
    const Lattice lat = make_lattice(kUnitDisk, 256);
    const std::vector<Point> zeros = {{0.1, 0.05}, {0.6, -0.2}};
    const GridFunction u = log_poly(lat, zeros);
    const AtomicMeasure nu =
        AtomicMeasure::from_atoms({{zeros[0], 1.0}, {zeros[1], 1.0}});
    const SweepResult sw = sweep_out_ball(u, nu, {0, 0}, 0.3);
    CHECK(sw.swept_mass == doctest::Approx(1.0).epsilon(1e-2));

    // (15r) the off-ball atoms are carried over bitwise.
    int kept = 0;
    for (const auto& a : sw.nu_u0.atoms) {
        if (std::abs(dist(a.p, {0, 0}) - 0.3) < 1e-9) continue;  // sphere layer
        ++kept;
        CHECK(a.p.x == zeros[1].x);
        CHECK(a.p.y == zeros[1].y);
        CHECK(a.w == 1.0);
    }
    CHECK(kept == 1);

    // Window conservation for any window containing the closed ball.
    for (double R : {0.45, 0.7, 0.95}) {
        const double before = nu.mass_where([R](Point p) { return norm(p) <= R; });
        const double after =
            sw.nu_u0.mass_where([R](Point p) { return norm(p) <= R; });
        CHECK(after == doctest::Approx(before).epsilon(1e-2));
    }

    // (15u) u0 = u outside the ball, u0 >= u inside.
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!u.in_mask(i, j)) continue;
            const double rr = norm(lat.node(i, j));
            if (rr > 0.3 + 2 * lat.h) {
                CHECK(sw.u0.at(i, j) == u.at(i, j));
            } else if (rr < 0.3 - 2 * lat.h) {
                CHECK(sw.u0.at(i, j) >= u.at(i, j) - 1e-6);
            }
        }
    }
}

TEST_CASE("comparison bound: u = M is tight") {
    const Lattice lat = make_lattice(kUnitDisk, 128);
    const std::vector<Point> zeros = {{0.5, 0.3}};
    const GridFunction u = log_poly(lat, zeros);
    const AtomicMeasure nu = AtomicMeasure::from_atoms({{zeros[0], 1.0}});
    const JensenPotential V =
        potential_of_measure(uniform_circle_measure({0, 0}, 0.25, 512, kUnitDisk));
    const ComparisonBound cb =
        comparison_integral_bound(u, u, nu, nu, V, {0, 0}, 0.25, std::log(0.25 / 0.1), {});
    CHECK(cb.hypothesis_violations.empty());
    CHECK(cb.holds);
    CHECK(cb.lhs == doctest::Approx(integrate(V.eval(), nu)).epsilon(1e-9));
}

TEST_CASE("comparison bound: blaschke-type u against bounded growth") {
    const Lattice lat = make_lattice(kUnitDisk, 128);
    // u = log|b1 b2|: bounded by 0 on the disk.
    const Point z1{0.45, 0.1}, z2{-0.3, 0.4};
    auto blaschke = [z1, z2](Point p) {
        const std::complex<double> w(p.x, p.y), a(z1.x, z1.y), b(z2.x, z2.y);
        return std::log(std::abs((w - a) / (1.0 - std::conj(a) * w))) +
               std::log(std::abs((w - b) / (1.0 - std::conj(b) * w)));
    };
    const GridFunction u =
        GridFunction::sample(lat, kUnitDisk, blaschke, {z1, z2});
    const GridFunction M =
        GridFunction::sample(lat, kUnitDisk, [](Point) { return 0.0; });
    const AtomicMeasure nu_u = AtomicMeasure::from_atoms({{z1, 1.0}, {z2, 1.0}});
    const AtomicMeasure nu_M;

    const double r0 = 0.2;
    const JensenPotential V =
        potential_of_measure(uniform_circle_measure({0, 0}, r0, 1024, kUnitDisk));
    // V = log(r0/|z|)+ : harmonic on the punctured ball, normalization 1,
    // sup over the sphere = 0.
    const ComparisonBound cb =
        comparison_integral_bound(u, M, nu_u, nu_M, V, {0, 0}, r0, 0.0, {});
    CHECK(cb.hypothesis_violations.empty());
    CHECK(cb.holds);
    CHECK(std::isfinite(cb.C));
    CHECK(cb.lhs >= -1e-9);
}

TEST_CASE("comparison bound holds on seeded polynomial cases") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Lattice lat = make_lattice(kUnitDisk, 128);
    const GridFunction M =
        GridFunction::sample(lat, kUnitDisk, [](Point) { return 0.0; });
    const AtomicMeasure nu_M;
    const double r0 = 0.2;
    const JensenPotential V =
        potential_of_measure(uniform_circle_measure({0, 0}, r0, 1024, kUnitDisk));
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<Point> zeros;
        std::vector<std::complex<double>> zc;
        for (int k = 0; k < 3; ++k) {
            const double rad = 0.35 + 0.55 * unif(rng);
            const double th = 2 * std::numbers::pi * unif(rng);
            zeros.push_back({rad * std::cos(th), rad * std::sin(th)});
            zc.emplace_back(zeros.back().x, zeros.back().y);
        }
        auto blaschke = [&zc](Point p) {
            const std::complex<double> w(p.x, p.y);
            double s = 0;
            for (const auto& a : zc) {
                s += std::log(std::abs((w - a) / (1.0 - std::conj(a) * w)));
            }
            return s;
        };
        const GridFunction u = GridFunction::sample(lat, kUnitDisk, blaschke, zeros);
        AtomicMeasure nu_u;
        for (const Point& z : zeros) nu_u.atoms.push_back({z, 1.0});
        const ComparisonBound cb =
            comparison_integral_bound(u, M, nu_u, nu_M, V, {0, 0}, r0, 0.0, {});
        CAPTURE(trial);
        CHECK(cb.hypothesis_violations.empty());
        CHECK(cb.holds);
    }
}

TEST_CASE("comparison bound reports hypothesis violations individually") {
    const Lattice lat = make_lattice(kUnitDisk, 96);
    const std::vector<Point> zeros = {{0.5, 0.3}};
    const GridFunction u = log_poly(lat, zeros);
    const AtomicMeasure nu = AtomicMeasure::from_atoms({{zeros[0], 1.0}});
    // Half-normalized potential violates the normalization hypothesis; its
    // sphere sup also exceeds the declared b = 0 bound.
    const JensenPotential V =
        potential_of_measure(uniform_circle_measure({0, 0}, 0.25, 512, kUnitDisk))
            .scaled(0.5);
    const ComparisonBound cb =
        comparison_integral_bound(u, u, nu, nu, V, {0, 0}, 0.15, 0.0, {});
    CHECK(cb.hypothesis_violations.size() >= 2);
}

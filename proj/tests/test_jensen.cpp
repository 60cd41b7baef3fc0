#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "potentia/jensen.hpp"

using namespace potentia;

namespace {
const Domain kUnitDisk = Domain::disk({0, 0}, 1.0);
}

TEST_CASE("potential of the Dirac measure vanishes") {
    const JensenMeasure mu = dirac_measure({0.1, -0.2}, kUnitDisk);
    const JensenPotential V = potential_of_measure(mu);
    for (double r : {0.05, 0.2, 0.6}) {
        for (int t = 0; t < 8; ++t) {
            const double th = 2 * std::numbers::pi * t / 8;
            const Point p{0.1 + r * std::cos(th), -0.2 + r * std::sin(th)};
            CHECK(V(p) == doctest::Approx(0.0).epsilon(1e-14));
        }
    }
    CHECK(V.normalization() == doctest::Approx(0.0));
}

TEST_CASE("potential of the uniform circle measure matches the closed form") {
    const Point x0{0, 0};
    const double r = 0.5;
    const JensenMeasure mu = uniform_circle_measure(x0, r, 4096, kUnitDisk);
    const JensenPotential V = potential_of_measure(mu);
    // log(r/|x|) inside, 0 outside.
    for (double rr : {0.05, 0.15, 0.3, 0.45}) {
        const Point p{rr * std::cos(1.0), rr * std::sin(1.0)};
        CHECK(V(p) == doctest::Approx(std::log(r / rr)).epsilon(1e-8));
    }
    for (double rr : {0.55, 0.8, 2.0}) {
        const Point p{rr * std::cos(0.3), rr * std::sin(0.3)};
        CHECK(V(p) == doctest::Approx(0.0).epsilon(1e-8));
    }
    // Nonnegative where sampled (off the atom ring itself).
    CHECK(V.normalization() == doctest::Approx(1.0));
    CHECK(V.hull().radius() == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("the duality map is affine in measure mixtures") {
    const Point x0{0, 0};
    const JensenMeasure mu1 = uniform_circle_measure(x0, 0.3, 512, kUnitDisk);
    const JensenMeasure mu2 = uniform_circle_measure(x0, 0.6, 512, kUnitDisk);
    const double t = 0.3;
    const JensenMeasure mixed = mix_measures(mu1, mu2, t);
    const JensenPotential V1 = potential_of_measure(mu1);
    const JensenPotential V2 = potential_of_measure(mu2);
    const JensenPotential Vm = potential_of_measure(mixed);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-0.9, 0.9);
    for (int k = 0; k < 50; ++k) {
        const Point p{unif(rng), unif(rng)};
        if (dist(p, x0) < 0.02) continue;
        CHECK(Vm(p) == doctest::Approx(t * V1(p) + (1 - t) * V2(p)).epsilon(1e-10));
    }
}

TEST_CASE("normalization estimates") {
    const Point x0{0.1, 0.0};
    const JensenMeasure mu = uniform_circle_measure(x0, 0.4, 2048, kUnitDisk);
    const JensenPotential V = potential_of_measure(mu);

    const NormalizationEstimate full = estimate_normalization(V);
    CHECK(full.value == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(full.stable);

    const NormalizationEstimate zero = estimate_normalization(
        [](Point) { return 0.0; }, x0, NormalizationOptions{});
    CHECK(zero.value == doctest::Approx(0.0).epsilon(1e-12));

    const NormalizationEstimate scaled = estimate_normalization(V.scaled(0.3));
    CHECK(scaled.value == doctest::Approx(0.3).epsilon(1e-2));
}

TEST_CASE("measure of potential: round trips and scaling") {
    const Point x0{0, 0};
    const double r = 0.5;
    const Lattice lat = make_lattice(kUnitDisk, 128);
    const JensenMeasure mu = uniform_circle_measure(x0, r, 1024, kUnitDisk);
    const JensenPotential V = potential_of_measure(mu);

    const MeasureRecovery rec = measure_of_potential(V, kUnitDisk, lat);
    CHECK(rec.total_mass == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(std::abs(rec.atom_weight) < 1e-2);

    // Weak discrepancy over smooth probes.
    auto probe1 = [](Point p) { return p.x * p.x - p.y * p.y + 0.5 * p.x; };
    auto probe2 = [](Point p) { return std::exp(p.x) * std::cos(p.y); };
    for (auto& probe : {std::function<double(Point)>(probe1),
                        std::function<double(Point)>(probe2)}) {
        CHECK(integrate(probe, rec.measure.base) ==
              doctest::Approx(integrate(probe, mu.base)).epsilon(1e-2));
    }

    // Dirac round trip: zero potential with a point hull.
    const JensenPotential V0(
        [](Point) { return 0.0; }, x0, Domain::disk(x0, 1e-9).closure(), 0.0);
    const MeasureRecovery rec0 = measure_of_potential(V0, kUnitDisk, lat);
    CHECK(rec0.atom_weight == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rec0.total_mass == doctest::Approx(1.0).epsilon(1e-6));

    // Half-scaled potential: half the circle mass plus half a Dirac atom.
    const MeasureRecovery rech = measure_of_potential(V.scaled(0.5), kUnitDisk, lat);
    CHECK(rech.atom_weight == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(rech.total_mass == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("an invalid potential is rejected by the inverse map") {
    // Normalization 2 makes the pole atom weight -1.
    const Point x0{0, 0};
    const JensenMeasure mu = uniform_circle_measure(x0, 0.5, 512, kUnitDisk);
    const JensenPotential bad = potential_of_measure(mu).scaled(2.0);
    const Lattice lat = make_lattice(kUnitDisk, 64);
    CHECK_THROWS_AS(measure_of_potential(bad, kUnitDisk, lat), Error);
}

TEST_CASE("jensen measure validation") {
    const JensenMeasure circ = uniform_circle_measure({0, 0}, 0.5, 512, kUnitDisk);
    CHECK(validate_jensen_measure(circ).ok);
    const JensenMeasure dir = dirac_measure({0.2, 0.1}, kUnitDisk);
    CHECK(validate_jensen_measure(dir).ok);

    // An off-center Dirac is not a Jensen measure for the center.
    JensenMeasure bad = dirac_measure({0.5, 0.0}, kUnitDisk);
    bad.center = {0, 0};
    const JensenValidation v = validate_jensen_measure(bad);
    CHECK_FALSE(v.ok);
    CHECK_FALSE(v.submean_ok);

    // Mass must be 1.
    JensenMeasure half = circ;
    for (auto& a : half.base.atoms) a.w *= 0.5;
    CHECK_FALSE(validate_jensen_measure(half).mass_ok);

    // Support must stay inside the domain.
    JensenMeasure out = circ;
    out.base.atoms.push_back({{2.0, 0.0}, 0.0});
    out.base.atoms.back().w = 1e-9;
    CHECK_FALSE(validate_jensen_measure(out).support_ok);
}

TEST_CASE("poisson-jensen residual: harmonic mean value") {
    // nu_u = 0, so the identity reduces to u(x0) = int u dmu.
    const JensenMeasure mu = uniform_circle_measure({0, 0}, 0.7, 4096, kUnitDisk);
    const AtomicMeasure no_mass;
    auto u = [](Point p) { return p.x * p.x - p.y * p.y + 2.0 * p.x; };
    CHECK(poisson_jensen_residual(u, u({0, 0}), no_mass, mu) ==
          doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("poisson-jensen residual: the log 0.9 identity") {
    const Point a{0.5, 0.0};
    const JensenMeasure mu = uniform_circle_measure({0, 0}, 0.9, 10000, kUnitDisk);
    const AtomicMeasure nu_u = AtomicMeasure::from_atoms({{a, 1.0}});
    auto u = [a](Point p) { return kernel_h(2, p - a); };
    const double residual = poisson_jensen_residual(u, u({0, 0}), nu_u, mu);
    CHECK(residual < 1e-3);

    // Both sides equal log 0.9 (circular means of log|z - a|).
    const double rhs = integrate(u, mu.base);
    CHECK(rhs == doctest::Approx(std::log(0.9)).epsilon(1e-6));
}

TEST_CASE("poisson-jensen residual: cubic polynomial vs the quadrature oracle") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Point> zeros;
    for (int k = 0; k < 3; ++k) {
        const double r = 0.7 * std::sqrt(unif(rng));
        const double th = 2 * std::numbers::pi * unif(rng);
        zeros.push_back({r * std::cos(th), r * std::sin(th)});
    }
    auto u = [&zeros](Point p) {
        double s = 0;
        for (const Point& z : zeros) s += kernel_h(2, p - z);
        return s;
    };
    AtomicMeasure nu_u;
    for (const Point& z : zeros) nu_u.atoms.push_back({z, 1.0});
    const JensenMeasure mu = uniform_circle_measure({0, 0}, 0.9, 10000, kUnitDisk);
    const double residual = poisson_jensen_residual(u, u({0, 0}), nu_u, mu);
    CHECK(residual < 1e-2);

    // Classical Jensen formula as the independent oracle:
    // mean_{|z|=r} log|p| = log|p(0)| + sum log(r/|z_k|).
    double lhs_oracle = u({0, 0});
    for (const Point& z : zeros) lhs_oracle += std::log(0.9 / norm(z));
    CHECK(integrate(u, mu.base) == doctest::Approx(lhs_oracle).epsilon(1e-6));
}

TEST_CASE("poisson-jensen rejects u(x0) = -inf") {
    const JensenMeasure mu = uniform_circle_measure({0, 0}, 0.5, 256, kUnitDisk);
    const AtomicMeasure nu_u = AtomicMeasure::from_atoms({{{0, 0}, 1.0}});
    CHECK_THROWS_AS(poisson_jensen_residual([](Point p) { return kernel_h(2, p); },
                                            neg_inf(), nu_u, mu),
                    HypothesisError);
}

TEST_CASE("constructed potentials satisfy the class invariants") {
    const Point x0{0, 0};
    const JensenMeasure mu = uniform_circle_measure(x0, 0.4, 1024, kUnitDisk);
    const JensenPotential V = potential_of_measure(mu);
    CHECK(V.normalization() <= 1.0 + 1e-12);
    // Positive inside the hull (sampled off the quadrature ring), zero outside.
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int checked = 0;
    while (checked < 200) {
        const Point p{unif(rng), unif(rng)};
        const double d = dist(p, x0);
        if (std::abs(d - 0.4) < 0.01 || d < 1e-3) continue;
        ++checked;
        if (d < 0.4) {
            CHECK(V(p) > -1e-9);
        } else {
            CHECK(std::abs(V(p)) < 1e-6);
        }
    }
}

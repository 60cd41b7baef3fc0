#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "potentia/uniqueness.hpp"

using namespace potentia;

namespace {
const Domain kUnitDisk = Domain::disk({0, 0}, 1.0);
const Domain kHole = Domain::disk({0, 0}, 0.5).closure();

TestFunction canonical_testfn(int n) {
    const Lattice lat = make_lattice(kUnitDisk, n);
    return green_test_function(lat, kUnitDisk, kHole, {0, 0});
}

GrowthModel bounded_growth(const Lattice& lat) {
    return GrowthModel{
        GridFunction::sample(lat, kUnitDisk, [](Point) { return 0.0; }),
        AtomicMeasure{}, 0.0};
}

double blaschke_log_abs(Point p, const std::vector<ZeroSet::Entry>& zeros) {
    const std::complex<double> w(p.x, p.y);
    double s = 0;
    for (const auto& e : zeros) {
        const std::complex<double> a(e.p.x, e.p.y);
        s += e.multiplicity *
             std::log(std::abs((w - a) / (1.0 - std::conj(a) * w)));
    }
    return s;
}
}  // namespace

TEST_CASE("growth integral: zero measure, finite atoms, blaschke atoms") {
    const TestFunction v = canonical_testfn(128);
    const Lattice& lat = v.values.lattice();

    GrowthModel g0 = bounded_growth(lat);
    const GrowthIntegral zero = growth_integral(v, g0, kHole);
    CHECK(zero.value == 0.0);
    CHECK(zero.finite);

    // Finite atoms: weighted sum of v values, against a direct loop.
    GrowthModel g1 = g0;
    g1.nu_M = AtomicMeasure::from_atoms({{{0.7, 0.0}, 2.0}, {{-0.6, 0.2}, 1.0}});
    const GrowthIntegral fin = growth_integral(v, g1, kHole);
    const double direct = 2.0 * v.value({0.7, 0.0}) + 1.0 * v.value({-0.6, 0.2});
    CHECK(fin.value == doctest::Approx(direct).epsilon(1e-12));
    CHECK(fin.finite);

    // Atoms inside K or outside D are excluded from the region integral.
    GrowthModel g2 = g0;
    g2.nu_M = AtomicMeasure::from_atoms(
        {{{0.2, 0.0}, 5.0}, {{0.7, 0.0}, 1.0}, {{3.0, 0.0}, 7.0}});
    CHECK(growth_integral(v, g2, kHole).value ==
          doctest::Approx(v.value({0.7, 0.0})).epsilon(1e-12));
}

TEST_CASE("divergence classification against series oracles") {
    const TestFunction v = canonical_testfn(256);

    // z_k = 1 - 1/k: harmonic-series comparison, divergent.
    ZeroGenerator gk;
    gk.kind = ZeroGenerator::Kind::OneOverK;
    gk.k_start = 2;
    const DivergenceReport dk = divergence_sum(v, gk);
    CHECK(dk.classification == DivergenceClass::Divergent);
    CHECK(is_pos_inf(dk.value));
    CHECK(dk.method.find("log-slope") != std::string::npos);

    // Partial sums track the series oracle while the lattice resolves it.
    double oracle = 0;
    long upto = 64;
    for (long k = 2; k < 2 + upto; ++k) oracle += -std::log(1.0 - 1.0 / k);
    for (const auto& [n, s] : dk.partial_sums) {
        if (n == upto) CHECK(s == doctest::Approx(oracle).epsilon(0.02));
    }

    // z_k = 1 - 1/k^2: summable, extrapolated limit near the telescoping
    // value sum_{k>=2} -log(1 - 1/k^2) = log 2.
    ZeroGenerator gk2;
    gk2.kind = ZeroGenerator::Kind::OneOverKSq;
    gk2.k_start = 2;
    const DivergenceReport dk2 = divergence_sum(v, gk2);
    CHECK(dk2.classification == DivergenceClass::Convergent);
    CHECK(dk2.value == doctest::Approx(std::log(2.0)).epsilon(0.05));

    // Finite explicit set: plain sum.
    ZeroGenerator fin;
    fin.kind = ZeroGenerator::Kind::Explicit;
    fin.entries = {{{0.7, 0.0}, 2}, {{0.6, 0.1}, 1}};
    const DivergenceReport df = divergence_sum(v, fin);
    CHECK(df.classification == DivergenceClass::Convergent);
    CHECK(df.value ==
          doctest::Approx(2 * v.value({0.7, 0.0}) + v.value({0.6, 0.1})).epsilon(1e-12));
    CHECK(df.method == "finite-sum");
}

TEST_CASE("zero-set hypothesis violations are reported") {
    const TestFunction v = canonical_testfn(96);
    ZeroGenerator bad;
    bad.kind = ZeroGenerator::Kind::Explicit;
    bad.entries = {{{0.2, 0.0}, 1}};  // strictly inside K
    CHECK_THROWS_AS(divergence_sum(v, bad), HypothesisError);
    ZeroGenerator outside;
    outside.kind = ZeroGenerator::Kind::Explicit;
    outside.entries = {{{1.5, 0.0}, 1}};
    CHECK_THROWS_AS(divergence_sum(v, outside), HypothesisError);
    // A point exactly on the hole boundary passes (closed-boundary cases).
    ZeroGenerator on_k;
    on_k.kind = ZeroGenerator::Kind::Explicit;
    on_k.entries = {{{0.5, 0.0}, 1}};
    CHECK_NOTHROW(divergence_sum(v, on_k));
}

TEST_CASE("majorization check") {
    const Lattice lat = make_lattice(kUnitDisk, 96);
    GrowthModel g = bounded_growth(lat);

    // u = M.
    CHECK(check_majorization(g.M, g).ok);

    // Blaschke product against bounded growth: log|B| <= 0.
    const std::vector<ZeroSet::Entry> zeros = {{{0.5, 0.0}, 1}, {{-0.2, 0.3}, 2}};
    const GridFunction u = GridFunction::sample(
        lat, kUnitDisk, [&](Point p) { return blaschke_log_abs(p, zeros); },
        {{0.5, 0.0}, {-0.2, 0.3}});
    CHECK(check_majorization(u, g).ok);

    // u = M + |z| needs const_shift 1 on the unit disk.
    const GridFunction u2 = GridFunction::sample(
        lat, kUnitDisk, [](Point p) { return norm(p); });
    CHECK_FALSE(check_majorization(u2, g).ok);
    GrowthModel shifted = g;
    shifted.const_shift = 1.0;
    CHECK(check_majorization(u2, shifted).ok);
}

TEST_CASE("verdict gate truth table") {
    int forced = 0;
    for (int b = 0; b < 8; ++b) {
        const bool finite6 = b & 1, divergent = b & 2, major = b & 4;
        const Verdict verdict = verdict_from(finite6, divergent, major);
        if (verdict == Verdict::ForcedTrivial) {
            ++forced;
            CHECK(finite6);
            CHECK(divergent);
            CHECK(major);
        }
        if (!finite6 || !major) CHECK(verdict == Verdict::HypothesisFailed);
        if (finite6 && major && !divergent) CHECK(verdict == Verdict::Inconclusive);
    }
    CHECK(forced == 1);

    // Gate ordering: a failed condition 6 wins over a failed divergence.
    CHECK(verdict_from(false, false, true) == Verdict::HypothesisFailed);
}

TEST_CASE("uniqueness verdicts on the blaschke scenarios") {
    const TestFunction v = canonical_testfn(256);
    const Lattice& lat = v.values.lattice();
    const GrowthModel g = bounded_growth(lat);

    ZeroGenerator divergent;
    divergent.kind = ZeroGenerator::Kind::OneOverK;
    divergent.k_start = 2;
    const UniquenessReport r1 = uniqueness_verdict(v, g, kHole, divergent);
    CHECK(r1.verdict == Verdict::ForcedTrivial);
    CHECK(r1.majorization_assumed);

    ZeroGenerator convergent;
    convergent.kind = ZeroGenerator::Kind::OneOverKSq;
    convergent.k_start = 2;
    const UniquenessReport r2 = uniqueness_verdict(v, g, kHole, convergent);
    CHECK(r2.verdict == Verdict::Inconclusive);

    // The finite Blaschke witness with the same zeros is majorized and
    // nonzero at the origin: |B(0)| = prod (1 - 1/k^2) -> (K+1)/(2K).
    std::vector<ZeroSet::Entry> wz;
    for (long k = 2; k <= 201; ++k) {
        wz.push_back({{1.0 - 1.0 / (static_cast<double>(k) * k), 0.0}, 1});
    }
    const GridFunction witness = GridFunction::sample(
        lat, kUnitDisk, [&](Point p) { return blaschke_log_abs(p, wz); });
    CHECK(check_majorization(witness, g).ok);
    double log_b0 = blaschke_log_abs({0, 0}, wz);
    CHECK(std::exp(log_b0) == doctest::Approx(202.0 / 402.0).epsilon(1e-9));
    CHECK(std::exp(log_b0) >= 0.1);

    // Infinite growth integral forces HYPOTHESIS_FAILED regardless of the rest.
    GrowthModel heavy = g;
    AtomicMeasure::Density dens;
    dens.lat = lat;
    dens.cell.assign(static_cast<size_t>(lat.nx) * lat.ny, 0.0);
    dens.mask.assign(static_cast<size_t>(lat.nx) * lat.ny, 0);
    heavy.nu_M.density = dens;
    heavy.nu_M.atoms.push_back({{0.7, 0.0}, pos_inf()});
    const UniquenessReport r3 = uniqueness_verdict(v, heavy, kHole, divergent);
    CHECK(r3.verdict == Verdict::HypothesisFailed);
    CHECK(r3.culprit == "condition6");
}

TEST_CASE("verdict scaling consistency") {
    // Scaling v by lambda scales both integrals and never changes the verdict.
    const TestFunction v = canonical_testfn(128);
    const Lattice& lat = v.values.lattice();
    const double lambda = 3.5;
    TestFunction vs = v;
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (vs.values.in_mask(i, j)) {
                vs.values.set(i, j, lambda * v.values.at(i, j));
            }
        }
    }
    vs.sup_bound *= lambda;

    GrowthModel g = bounded_growth(lat);
    g.nu_M = AtomicMeasure::from_atoms({{{0.7, 0.0}, 1.0}});
    CHECK(growth_integral(vs, g, kHole).value ==
          doctest::Approx(lambda * growth_integral(v, g, kHole).value).epsilon(1e-12));

    ZeroGenerator fin;
    fin.kind = ZeroGenerator::Kind::Explicit;
    fin.entries = {{{0.6, 0.1}, 1}, {{-0.7, 0.2}, 1}};
    CHECK(divergence_sum(vs, fin).value ==
          doctest::Approx(lambda * divergence_sum(v, fin).value).epsilon(1e-12));

    ZeroGenerator divergent;
    divergent.kind = ZeroGenerator::Kind::OneOverK;
    divergent.k_start = 2;
    CHECK(uniqueness_verdict(vs, g, kHole, divergent).verdict ==
          uniqueness_verdict(v, g, kHole, divergent).verdict);
}

TEST_CASE("minorization check gates the verdict") {
    const TestFunction v = canonical_testfn(96);
    const Lattice& lat = v.values.lattice();
    const GrowthModel g = bounded_growth(lat);
    ZeroGenerator fin;
    fin.kind = ZeroGenerator::Kind::Explicit;
    fin.entries = {{{0.7, 0.0}, 1}};
    const GridFunction u = GridFunction::sample(
        lat, kUnitDisk, [](Point p) { return blaschke_log_abs(p, {{{0.7, 0.0}, 1}}); },
        {{0.7, 0.0}});
    // nu claims two units at the zero but nu_u only carries one.
    const AtomicMeasure nu = AtomicMeasure::from_atoms({{{0.7, 0.0}, 2.0}});
    const AtomicMeasure nu_u = AtomicMeasure::from_atoms({{{0.7, 0.0}, 1.0}});
    const UniquenessReport rep = uniqueness_verdict(v, g, kHole, fin, &u, &nu, &nu_u);
    CHECK(rep.verdict == Verdict::HypothesisFailed);
    CHECK(rep.culprit == "condition7a");

    const AtomicMeasure nu_ok = AtomicMeasure::from_atoms({{{0.7, 0.0}, 1.0}});
    const UniquenessReport ok = uniqueness_verdict(v, g, kHole, fin, &u, &nu_ok, &nu_u);
    CHECK(ok.minorization_ok);
}

TEST_CASE("poincare-lelong: riesz atoms match multiplicities") {
    // log|p| for p = (z-a)^2 (z-b): flux-fitted charges 2 and 1.
    const Lattice lat = make_lattice(kUnitDisk, 256);
    const Point a{0.3, 0.1}, b{-0.4, -0.2};
    const GridFunction u = GridFunction::sample(
        lat, kUnitDisk,
        [a, b](Point p) { return 2.0 * kernel_h(2, p - a) + kernel_h(2, p - b); },
        {a, b});
    const RieszResult r = riesz_measure(u);
    REQUIRE(r.measure.atoms.size() == 2);
    CHECK(r.measure.atoms[0].w == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(r.measure.atoms[1].w == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("contradiction bound trace on the finite-zero scenario") {
    const TestFunction v = canonical_testfn(256);
    const Lattice& lat = v.values.lattice();
    const GrowthModel g = bounded_growth(lat);

    const std::vector<ZeroSet::Entry> zeros = {
        {{0.6, 0.1}, 1}, {{-0.55, 0.3}, 1}, {{0.2, -0.75}, 1}};
    const GridFunction u = GridFunction::sample(
        lat, kUnitDisk, [&](Point p) { return blaschke_log_abs(p, zeros); },
        {{0.6, 0.1}, {-0.55, 0.3}, {0.2, -0.75}});
    AtomicMeasure nu_u;
    for (const auto& e : zeros) {
        nu_u.atoms.push_back({e.p, static_cast<double>(e.multiplicity)});
    }

    const ContradictionTrace tr =
        contradiction_bound_trace(v, g, kHole, {0, 0}, 0.2, u, nu_u);

    // Monotone nondecreasing rows, bounded by the proof-chain constant.
    for (size_t i = 1; i < tr.rows.size(); ++i) {
        CHECK(tr.rows[i].lhs >= tr.rows[i - 1].lhs - 1e-14);
    }
    CHECK(tr.sup_lhs <= tr.bound * 1.05);
    CHECK(tr.c > 0);

    // The saturated sum matches (1/c) sum v(z_k).
    ZeroGenerator fin;
    fin.kind = ZeroGenerator::Kind::Explicit;
    fin.entries = zeros;
    const double cross = divergence_sum(v, fin).value / tr.c;
    CHECK(tr.sup_lhs == doctest::Approx(cross).epsilon(0.05));

    // nu_u = 0 zeroes the whole trace.
    const AtomicMeasure empty;
    const GridFunction zero_u = GridFunction::sample(
        lat, kUnitDisk, [](Point) { return 0.0; });
    const ContradictionTrace tr0 =
        contradiction_bound_trace(v, g, kHole, {0, 0}, 0.2, zero_u, empty);
    for (const auto& row : tr0.rows) CHECK(row.lhs == 0.0);
}

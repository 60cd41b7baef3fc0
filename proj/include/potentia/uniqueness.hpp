#ifndef POTENTIA_UNIQUENESS_HPP
#define POTENTIA_UNIQUENESS_HPP

#include "potentia/balayage.hpp"
#include "potentia/testfn.hpp"

namespace potentia {

// Growth hypothesis: a subharmonic majorant M with its Riesz measure and the
// additive constant of the majorization u <= M + const.
struct GrowthModel {
    GridFunction M;
    AtomicMeasure nu_M;
    double const_shift = 0;
};

struct ZeroSet {
    struct Entry {
        Point p;
        int multiplicity = 1;
    };
    std::vector<Entry> points;
};

// Intensional zero sequences: explicit lists or named radial generators
// z_k = center + r_k * (cos angle, sin angle) approaching the boundary.
struct ZeroGenerator {
    enum class Kind {
        Explicit,   // the list in `entries`
        OneOverK,   // r_k = 1 - 1/k
        OneOverKSq, // r_k = 1 - 1/k^2
        Geometric,  // r_k = 1 - coeff * ratio^k
        Power,      // r_k = 1 - coeff * k^{-exponent}
    };
    Kind kind = Kind::Explicit;
    std::vector<ZeroSet::Entry> entries;
    Point center{0, 0};
    double angle = 0;
    double scale = 1.0;  // boundary radius the r_k scale against
    long k_start = 2;
    double coeff = 1.0;
    double ratio = 0.5;
    double exponent = 2.0;

    bool finite() const { return kind == Kind::Explicit; }
    Point at(long k) const;  // k >= k_start for generated kinds
};

enum class DivergenceClass { Divergent, Convergent };

struct DivergenceOptions {
    long max_terms = 1000000;
    double sum_threshold = 1000.0;
    double term_floor = 1e-15;
    double slope_cut = -0.05;  // dyadic block log-slope at/above this: divergent
    double geometry_tol = 1e-12;  // allowed penetration into K (closed-boundary points pass)
};

struct DivergenceReport {
    DivergenceClass classification = DivergenceClass::Convergent;
    double value = 0;  // +inf when divergent, extrapolated limit otherwise
    double last_partial_sum = 0;
    std::vector<std::pair<long, double>> partial_sums;  // dyadic checkpoints
    double block_slope = 0;
    std::string method;
    long terms = 0;
};

// Sum of multiplicity * v(z_k) with the divergence classification of the
// design: immediate threshold cut, otherwise dyadic-block log-slope
// regression; convergent sums are Richardson-extrapolated. Points strictly
// inside K (beyond geometry_tol) or outside D violate the zero-set
// hypothesis and throw HypothesisError.
DivergenceReport divergence_sum(const TestFunction& v, const ZeroGenerator& zeros,
                                const DivergenceOptions& opt = {});

struct GrowthIntegral {
    double value = 0;
    bool finite = true;
};

// int_{D \ K} v d nu_M.
GrowthIntegral growth_integral(const TestFunction& v, const GrowthModel& g,
                               const Domain& K);

struct MajorizationReport {
    bool ok = true;
    double worst_gap = neg_inf();  // max of u - (M + const_shift)
    Point worst_node{};
};

// Nodewise u <= M + const_shift + tol on the shared mask.
MajorizationReport check_majorization(const GridFunction& u, const GrowthModel& g,
                                      double tol = 1e-9);

enum class Verdict { ForcedTrivial, Inconclusive, HypothesisFailed };

std::string to_string(Verdict v);

// The Theorem-1 gate: FORCED_TRIVIAL iff the growth integral is finite, the
// test-weighted zero sum diverges, and the majorization holds.
Verdict verdict_from(bool integral_finite, bool sum_divergent, bool majorization_ok);

struct UniquenessReport {
    GrowthIntegral condition6;
    DivergenceReport condition7b;
    MajorizationReport condition7c;
    bool majorization_assumed = false;  // no u supplied: class-level hypothesis
    bool minorization_ok = true;        // condition 7a when nu and nu_u supplied
    Verdict verdict = Verdict::Inconclusive;
    std::string culprit;  // named failing condition for HYPOTHESIS_FAILED
};

// Assembles the three checks. u is optional: without it the majorization is
// part of the hypothesis class and assumed. When an independent minorant nu
// and nu_u are both supplied, the atomwise minorization nu <= nu_u is checked
// as condition 7a.
UniquenessReport uniqueness_verdict(const TestFunction& v, const GrowthModel& g,
                                    const Domain& K, const ZeroGenerator& zeros,
                                    const GridFunction* u = nullptr,
                                    const AtomicMeasure* nu = nullptr,
                                    const AtomicMeasure* nu_u = nullptr,
                                    const DivergenceOptions& opt = {});

struct TraceRow {
    long n;
    double lhs;  // int_{D minus closed ball} max(0, V - 1/n) d nu_u
};

struct ContradictionTrace {
    std::vector<TraceRow> rows;
    double bound = 0;  // (1/c) int_{D \ K} v d nu_M + C1 from the proof chain
    double c = 0;
    double b = 0;
    double sup_lhs = 0;
    double cross_check = 0;  // (1/c) * sum of mult * v(z_k) off the closed ball
    Continuation continuation;
};

// Reproduces the Theorem-1 proof chain numerically: continue v across K,
// normalize by the pole coefficient, truncate V_n = max(0, V - 1/n), and
// trace the monotone integrals against their uniform bound.
ContradictionTrace contradiction_bound_trace(const TestFunction& v,
                                             const GrowthModel& g, const Domain& K,
                                             Point x0, double r0, const GridFunction& u,
                                             const AtomicMeasure& nu_u,
                                             int n_levels = 12);

}  // namespace potentia

#endif

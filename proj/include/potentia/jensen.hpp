#ifndef POTENTIA_JENSEN_HPP
#define POTENTIA_JENSEN_HPP

#include "potentia/grid_calculus.hpp"

namespace potentia {

// Compactly supported probability measure with the submean property at its
// center. Validity is certified operationally against a probe library of
// sampled subharmonic functions (the universal quantifier is untestable).
struct JensenMeasure {
    AtomicMeasure base;
    Point center;
    Domain domain;
};

JensenMeasure dirac_measure(Point x0, const Domain& domain);
JensenMeasure uniform_circle_measure(Point x0, double radius, int nodes,
                                     const Domain& domain);
// t * a + (1 - t) * b, t in [0, 1].
JensenMeasure mix_measures(const JensenMeasure& a, const JensenMeasure& b, double t);

struct JensenValidation {
    bool ok = true;
    double mass = 0;
    bool mass_ok = false;
    bool support_ok = false;
    bool submean_ok = false;
    double worst_submean_gap = neg_inf();  // max over probes of u(x0) - int u dmu
    std::string detail;
};

JensenValidation validate_jensen_measure(const JensenMeasure& mu, double tol = 1e-3);

// Nonnegative subharmonic function off the pole, vanishing outside a compact
// hull, with logarithmic-pole normalization <= 1.
class JensenPotential {
public:
    JensenPotential(std::function<double(Point)> eval, Point pole, Domain hull,
                    double normalization)
        : eval_(std::move(eval)), pole_(pole), hull_(std::move(hull)),
          normalization_(normalization) {}

    double operator()(Point p) const { return eval_(p); }
    const std::function<double(Point)>& eval() const { return eval_; }
    Point pole() const { return pole_; }
    const Domain& hull() const { return hull_; }
    double normalization() const { return normalization_; }

    JensenPotential scaled(double s) const;

private:
    std::function<double(Point)> eval_;
    Point pole_;
    Domain hull_;    // closed disk around the pole
    double normalization_;
};

// The duality map P: quadrature of h_2 against the measure minus the pole
// kernel. Atom mass sitting exactly at the center is folded into the pole
// term analytically, so the Dirac measure gives the zero potential exactly.
JensenPotential potential_of_measure(const JensenMeasure& mu);

struct NormalizationEstimate {
    double value = 0;
    double spread = 0;  // max fit residual relative to max(|value|, 0.1)
    bool stable = true;
    std::vector<std::pair<double, double>> trace;  // (radius, ratio)
};

struct NormalizationOptions {
    double r_start = 0.125;  // largest probe circle radius
    int levels = 6;          // dyadic radii r_start * 2^{-j}, j = 0..levels-1
    int angles = 64;
    double instability_tol = 0.05;
};

// Pole normalization lim V(x)/|h_2(x - x0)| by circle means at dyadic radii,
// extrapolated linearly in 1/|log r|.
NormalizationEstimate estimate_normalization(const std::function<double(Point)>& V,
                                             Point pole,
                                             const NormalizationOptions& opt = {});
NormalizationEstimate estimate_normalization(const JensenPotential& V,
                                             const NormalizationOptions& opt = {});

struct MeasureRecovery {
    JensenMeasure measure;
    NormalizationEstimate normalization;
    double atom_weight;
    double clamped_mass;
    double total_mass;
};

// The inverse map: c_2 * Lap(V) off the pole (grid density) plus
// (1 - normalization) * delta_{x0}. A computed atom weight below -tol signals
// an invalid potential and throws.
MeasureRecovery measure_of_potential(const JensenPotential& V, const Domain& domain,
                                     const Lattice& lat, double atom_tol = 0.05);

// |u(x0) + int V_mu d nu_u - int u d mu| for the generalized Poisson-Jensen
// identity. Throws HypothesisError when u(x0) = -inf.
double poisson_jensen_residual(const std::function<double(Point)>& u, double u_x0,
                               const AtomicMeasure& nu_u, const JensenMeasure& mu);
double poisson_jensen_residual(const GridFunction& u, const AtomicMeasure& nu_u,
                               const JensenMeasure& mu);

}  // namespace potentia

#endif

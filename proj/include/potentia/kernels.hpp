#ifndef POTENTIA_KERNELS_HPP
#define POTENTIA_KERNELS_HPP

#include "potentia/common.hpp"

namespace potentia {

// Fundamental radial kernels h_m and the Riesz normalization constants c_m,
// indexed by the space dimension m >= 1:
//
//   h_1(t) = |t|,   h_2(t) = log|t|,   h_m(t) = -|t|^{-(m-2)}  (m >= 3),
//   c_m = Gamma(m/2) / (2 pi^{m/2} max{1, m-2}).
//
// All three kernels are radially symmetric and nondecreasing in |t|; the
// value at t = 0 is -inf for m >= 2 and 0 for m = 1.

// Gamma(k/2) for positive integer k, via Gamma(1/2) = sqrt(pi) and the
// recurrence Gamma(s+1) = s Gamma(s).
double half_integer_gamma(int twice_argument);

// Kernel value for radial distance r >= 0.
double kernel_h_radial(int m, double r);

// Kernel value for a planar displacement.
double kernel_h(int m, Point t);

// Riesz constant c_m.
double riesz_constant(int m);

struct Kernel {
    int m;
    double c;  // riesz_constant(m)

    double operator()(Point t) const { return kernel_h(m, t); }
    double radial(double r) const { return kernel_h_radial(m, r); }
};

Kernel make_kernel(int m);

}  // namespace potentia

#endif

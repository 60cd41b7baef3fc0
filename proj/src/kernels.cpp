#include "potentia/kernels.hpp"

#include <numbers>

namespace potentia {

namespace {

void check_dimension(int m) {
    if (m < 1) {
        throw InvalidDimensionError("kernel dimension must be a positive integer, got " +
                                    std::to_string(m));
    }
}

}  // namespace

double half_integer_gamma(int twice_argument) {
    if (twice_argument < 1) {
        throw InvalidDimensionError("gamma argument must be positive");
    }
    // Gamma(1/2) = sqrt(pi), Gamma(1) = 1, Gamma(s+1) = s Gamma(s).
    double value = (twice_argument % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
    for (int k = twice_argument % 2 == 0 ? 2 : 1; k + 2 <= twice_argument; k += 2) {
        value *= 0.5 * k;
    }
    return value;
}

double kernel_h_radial(int m, double r) {
    check_dimension(m);
    if (r < 0) r = -r;
    if (m == 1) return r;
    if (r == 0.0) return neg_inf();
    if (m == 2) return std::log(r);
    return -std::pow(r, -(m - 2));
}

double kernel_h(int m, Point t) { return kernel_h_radial(m, norm(t)); }

double riesz_constant(int m) {
    check_dimension(m);
    const double denom = 2.0 * std::pow(std::numbers::pi, 0.5 * m) * std::max(1, m - 2);
    return half_integer_gamma(m) / denom;
}

Kernel make_kernel(int m) {
    check_dimension(m);
    return Kernel{m, riesz_constant(m)};
}

}  // namespace potentia

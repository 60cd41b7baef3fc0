#ifndef POTENTIA_GLUING_HPP
#define POTENTIA_GLUING_HPP

#include "potentia/grid.hpp"

namespace potentia {

// Glue v (on the open set O = v's mask) over v0 (on O0 = v0's mask, O c O0):
// the result equals max{v, v0} on O and v0 on O0 \ O. The boundary
// compatibility hypothesis is enforced as a one-cell collar inequality
// v <= v0 + tol at O-nodes adjacent to O0 \ O; a violation throws
// GluingHypothesisError with the worst node. The default tolerance is
// 10 * h, the discrete surrogate for the limsup condition.
GridFunction glue(const GridFunction& v, const GridFunction& v0, double tol = -1.0);

}  // namespace potentia

#endif

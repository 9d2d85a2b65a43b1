#pragma once

#include <functional>

#include "chebdde/interp.hpp"

namespace chebdde {

/// Solves the Schroeder equation u(f(t)) = lambda u(t) on a Chebyshev grid,
/// normalised by u'(a) = 1 (the first collocation row is replaced by the
/// first row of the differentiation matrix). f must map [a, b] into itself
/// and fix a; u(a) = 0 then follows from the equations.
///
/// Throws std::invalid_argument for a trigonometric grid and
/// SingularMatrixError when the bordered system is singular.
[[nodiscard]] SampledFunction functional_equation(const std::function<double(double)>& f, double lambda,
                                                  const Grid& g);

}  // namespace chebdde

#include "chebdde/functional.hpp"

#include <stdexcept>
#include <vector>

#include "chebdde/linalg.hpp"

namespace chebdde {

SampledFunction functional_equation(const std::function<double(double)>& f, double lambda, const Grid& g) {
    if (g.kind() != GridKind::chebyshev_lobatto)
        throw std::invalid_argument("functional_equation: a Chebyshev grid is required");
    const std::size_t n = g.size();
    std::vector<double> ft(n);
    for (std::size_t i = 0; i < n; ++i) ft[i] = f(g.nodes()[i]);
    Matrix a = barymat(ft, g);
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= lambda;
    const Matrix d = diffmat(g);
    std::copy(d.row(0).begin(), d.row(0).end(), a.row(0).begin());
    std::vector<double> rhs(n, 0.0);
    rhs[0] = 1.0;
    return {g, lu_solve(a, rhs)};
}

}  // namespace chebdde

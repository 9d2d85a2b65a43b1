#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <type_traits>
#include <vector>

#include "chebdde/blocksys.hpp"
#include "chebdde/collocation.hpp"
#include "chebdde/matrix.hpp"
#include "chebdde/mesh.hpp"

namespace chebdde {

/// A delay map t -> tau(t; p). The parameter derivative is optional and only
/// consulted when the problem carries unknown parameters.
struct DelayMap {
    using Value = std::function<double(double t, std::span<const double> params)>;
    using ParamDerivative = std::function<double(double t, std::span<const double> params, std::size_t k)>;

    Value value;
    ParamDerivative param_derivative;

    DelayMap() = default;
    DelayMap(std::function<double(double)> f);  // NOLINT(google-explicit-constructor)
    /// Any callable double -> double, so plain lambdas convert implicitly.
    template <class F>
        requires std::is_invocable_r_v<double, F, double> &&
                 (!std::is_same_v<std::remove_cvref_t<F>, std::function<double(double)>>)
    DelayMap(F f)  // NOLINT(google-explicit-constructor)
        : DelayMap(std::function<double(double)>(std::move(f))) {}
    DelayMap(Value v, ParamDerivative dp);

    double operator()(double t, std::span<const double> params) const { return value(t, params); }
};

/// Argument map g(t, v) of a state-dependent delay y(g(t, a(t))), with dg/dv.
struct StateMap {
    std::function<double(double t, double v)> g;
    std::function<double(double t, double v)> dg;

    /// g(t, v) = v.
    [[nodiscard]] static StateMap identity();
};

/// Pointwise map with its derivative.
struct ScalarFunction {
    std::function<double(double)> f;
    std::function<double(double)> df;
};

using Kernel = std::function<double(double t, double s)>;

namespace detail {
struct Node;
}

/// Immutable operator expression. Each expression evaluates to one value per
/// collocation node; a problem is a set of expressions required to vanish.
class OpExpr {
public:
    enum class Kind {
        unknown,
        indep_var,
        constant,
        diff,
        delay_eval,
        state_delay_eval,
        neutral_eval,
        cumsum,
        volterra,
        sum,
        product,
        scale,
        elementwise,
        param,
    };

    explicit OpExpr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

    [[nodiscard]] Kind kind() const noexcept;
    [[nodiscard]] const detail::Node& node() const noexcept { return *node_; }

private:
    std::shared_ptr<const detail::Node> node_;
};

/// Component `component` of the unknown state.
[[nodiscard]] OpExpr unknown(std::size_t component = 0);
[[nodiscard]] OpExpr indep_var();
[[nodiscard]] OpExpr constant(std::function<double(double)> fn);
[[nodiscard]] OpExpr constant(double c);
[[nodiscard]] OpExpr diff(OpExpr child, unsigned order = 1);
/// child(tau(t)). Out-of-interval arguments consult `history`.
[[nodiscard]] OpExpr delay(OpExpr child, DelayMap tau, HistorySpec history = {});
/// child(g(t, argument(t))). Defaults to clamping arguments that leave the interval.
[[nodiscard]] OpExpr state_delay(OpExpr child, OpExpr argument, StateMap g = StateMap::identity(),
                                 HistorySpec history = HistorySpec::clamp());
/// child'(tau(t)). A function history here supplies the derivative of the solution.
[[nodiscard]] OpExpr neutral(OpExpr child, DelayMap tau, HistorySpec history = {});
[[nodiscard]] OpExpr cumsum(OpExpr child);
/// integral from the left end to t of K(t, s) child(s) ds.
[[nodiscard]] OpExpr volterra(Kernel kernel, OpExpr child);
[[nodiscard]] OpExpr sum(std::vector<OpExpr> terms);
[[nodiscard]] OpExpr product(std::vector<OpExpr> factors);
[[nodiscard]] OpExpr scale(double factor, OpExpr child);
[[nodiscard]] OpExpr elementwise(ScalarFunction fn, OpExpr child);
[[nodiscard]] OpExpr param(std::size_t index);

[[nodiscard]] OpExpr operator+(OpExpr a, OpExpr b);
[[nodiscard]] OpExpr operator-(OpExpr a, OpExpr b);
[[nodiscard]] OpExpr operator-(OpExpr a);
[[nodiscard]] OpExpr operator*(OpExpr a, OpExpr b);
[[nodiscard]] OpExpr operator*(double s, OpExpr a);

[[nodiscard]] OpExpr exp(OpExpr a);
[[nodiscard]] OpExpr log(OpExpr a);
[[nodiscard]] OpExpr sin(OpExpr a);
[[nodiscard]] OpExpr cos(OpExpr a);
[[nodiscard]] OpExpr pow(OpExpr a, double exponent);
[[nodiscard]] OpExpr reciprocal(OpExpr a);

/// Shape of the unknown vector: component blocks of equal length followed by parameters.
struct StateLayout {
    std::size_t n_components = 1;
    std::size_t n_params = 0;
};

struct Linearization {
    Matrix jac;                     // N x (n_components * N + n_params)
    std::vector<double> residual;   // length N
    std::size_t clamped = 0;        // state-dependent arguments clamped into the interval
};

/// Residual values of `e` at the collocation nodes.
[[nodiscard]] std::vector<double> discretize(const OpExpr& e, const Collocation& colloc, std::span<const double> state,
                                             std::span<const double> params, StateLayout layout = {});

/// Residual and Frechet derivative of `e` with respect to state and parameters.
[[nodiscard]] Linearization linearize(const OpExpr& e, const Collocation& colloc, std::span<const double> state,
                                      std::span<const double> params, StateLayout layout = {});

// Scalar convenience forms on a piecewise Chebyshev grid.
[[nodiscard]] std::vector<double> discretize(const OpExpr& e, const PiecewiseGrid& g, const PiecewiseFunction& y,
                                             std::span<const double> params = {});
[[nodiscard]] Linearization linearize(const OpExpr& e, const PiecewiseGrid& g, const PiecewiseFunction& y,
                                      std::span<const double> params = {});

}  // namespace chebdde

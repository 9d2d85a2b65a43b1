#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chebdde/blocksys.hpp"
#include "chebdde/collocation.hpp"
#include "chebdde/exprgraph.hpp"
#include "chebdde/matrix.hpp"

namespace chebdde {

/// A linear condition coeffs . x = rhs on the full unknown vector
/// (component blocks followed by parameters).
struct LinearConstraint {
    std::vector<double> coeffs;
    double rhs = 0.0;
    std::string description;
};

/// A nonlinear collocation problem: one residual expression per component,
/// with constraint rows that either overwrite collocation rows or are
/// appended to close the system when parameters are unknown.
struct CollocationProblem {
    Collocation colloc;
    std::vector<OpExpr> equations;
    std::size_t n_params = 0;
    /// (row index in the stacked residual, constraint)
    std::vector<std::pair<std::size_t, LinearConstraint>> replaced;
    /// Must contain exactly n_params rows.
    std::vector<LinearConstraint> appended;

    [[nodiscard]] std::size_t n_components() const noexcept { return equations.size(); }
    [[nodiscard]] std::size_t n_unknowns() const noexcept { return equations.size() * colloc.size() + n_params; }
    [[nodiscard]] StateLayout layout() const noexcept { return {equations.size(), n_params}; }
};

/// Bordered residual F(x).
[[nodiscard]] std::vector<double> residual(const CollocationProblem& p, std::span<const double> x);

/// Bordered Jacobian and residual at x. `clamped` receives the number of
/// state-dependent arguments that were clamped into the interval.
[[nodiscard]] BlockSystem linearized_system(const CollocationProblem& p, std::span<const double> x,
                                            std::size_t* clamped = nullptr);

struct NewtonOptions {
    /// Converged when the update or the post-step residual infinity norm is at most tol; the default is
    /// 1e-12 * (1 + ||x||_inf) evaluated at each iterate.
    std::optional<double> tol;
    std::size_t max_iter = 25;
    /// Called with every new iterate; may throw to abort the iteration.
    std::function<void(std::span<const double>)> on_iterate;
};

struct NewtonStep {
    double residual_norm = 0.0;  // ||F(x_k)||_inf before the update
    double update_norm = 0.0;    // ||x_{k+1} - x_k||_inf
    double update_norm_2 = 0.0;  // ||x_{k+1} - x_k||_2
};

struct NewtonReport {
    std::vector<NewtonStep> iterations;
    bool converged = false;
    double final_jacobian_cond = 0.0;
    double final_residual_norm = 0.0;
    std::size_t clamped = 0;
};

struct NewtonResult {
    std::vector<double> x;
    NewtonReport report;

    [[nodiscard]] std::span<const double> component(std::size_t c, std::size_t n) const {
        return std::span<const double>(x).subspan(c * n, n);
    }
};

/// Undamped Newton iteration x <- x - J^-1 F.
///
/// Stops when a step's update satisfies ||dx||_inf <= tol, or when the
/// residual after a step is already <= tol; `iterations` holds one entry per
/// step taken. Exceeding max_iter is reported, not thrown. A Jacobian whose
/// smallest LU pivot is below N eps relative to the largest throws
/// SingularMatrixError.
[[nodiscard]] NewtonResult newton(const CollocationProblem& p, std::vector<double> x0, const NewtonOptions& options = {});

/// One Newton step from zero: the exact solution of an affine problem.
[[nodiscard]] NewtonResult solve_linear(const CollocationProblem& p);

/// Places a row defined on one component's N values into the full unknown vector.
[[nodiscard]] std::vector<double> embed_row(std::span<const double> row, std::size_t component,
                                            const CollocationProblem& p);

/// Row evaluating component c at x (Chebyshev or trigonometric interpolant).
[[nodiscard]] std::vector<double> point_row(const CollocationProblem& p, std::size_t component, double x);

/// Row evaluating the `order`-th derivative of component c at node i.
[[nodiscard]] std::vector<double> derivative_row(const CollocationProblem& p, std::size_t component, std::size_t node,
                                                 unsigned order = 1);

/// Continuity constraints for every interior breakpoint of a piecewise
/// problem, placed at the standard layout rows of component c.
/// `n_left`/`n_right` reserve rows for boundary conditions.
[[nodiscard]] std::vector<std::pair<std::size_t, LinearConstraint>> continuity_constraints(
    const CollocationProblem& p, std::size_t component, unsigned order, std::size_t n_left = 1,
    std::size_t n_right = 0);

}  // namespace chebdde

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "chebdde/blocksys.hpp"
#include "chebdde/collocation.hpp"
#include "chebdde/exprgraph.hpp"
#include "chebdde/interp.hpp"
#include "chebdde/newton.hpp"

namespace chebdde {

/// Solves the linear periodic problem e(u) = 0 on a trigonometric grid, where
/// e is affine in the unknown (for example D2 u + sin(t) u'(t - a) + cos(t) u(t - b) - 1).
/// Throws SingularMatrixError when the discrete operator is singular to
/// working precision (reciprocal condition number below `min_rcond`).
[[nodiscard]] SampledFunction solve_periodic_linear(const OpExpr& e, const Grid& g, double min_rcond = 1e-13);

/// Sampled solution of an initial-value integration: times[i] and states[i].
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;

    [[nodiscard]] std::size_t dimension() const noexcept { return states.empty() ? 0 : states.front().size(); }
    /// Column c of the states.
    [[nodiscard]] std::vector<double> component(std::size_t c) const;
    /// Piecewise-linear interpolation of component c at t.
    [[nodiscard]] double value(std::size_t c, double t) const;
};

/// CSV with header `t,y1,...,yd` and shortest round-trip numbers.
void write_csv(std::ostream& os, const Trajectory& tr);
/// Reads the format written by write_csv. Throws std::runtime_error on malformed input.
[[nodiscard]] Trajectory read_csv(std::istream& is);

/// dy/dt given t, y(t) and y(t - lags[k]) for each lag.
using DelayedRhs = std::function<std::vector<double>(double t, std::span<const double> y,
                                                     const std::vector<std::vector<double>>& lagged)>;
/// State for t <= 0.
using VectorHistory = std::function<std::vector<double>(double t)>;

/// Classical fourth-order Runge-Kutta on [0, t_end] with the method of steps.
/// Delayed states inside the integration window come from cubic Hermite
/// interpolation of the stored steps. Every lag not exceeding t_end must be a
/// positive integer multiple of dt; otherwise std::invalid_argument is thrown.
[[nodiscard]] Trajectory rk4_method_of_steps(const DelayedRhs& rhs, const VectorHistory& history,
                                             std::span<const double> lags, double t_end, double dt);

/// Scalar form with a HistorySpec (function or constant mode).
[[nodiscard]] Trajectory rk4_method_of_steps(const std::function<double(double t, double y, std::span<const double>)>& rhs,
                                             const HistorySpec& history, std::span<const double> lags, double t_end,
                                             double dt);

/// Period estimate from the spacing of the prominent maxima of component c in
/// the second half of the trajectory. Throws std::runtime_error when fewer than
/// two such maxima exist.
[[nodiscard]] double estimate_period(const Trajectory& tr, std::size_t component = 0);

/// Closes the time-translation freedom of an autonomous periodic orbit.
struct PhaseCondition {
    enum class Kind {
        anchor_derivative_zero,  // u_c'(0) = 0
        fix_component_value,     // u_c(0) = value
    };
    Kind kind = Kind::anchor_derivative_zero;
    std::size_t component = 0;
    double value = 0.0;
};

/// Building blocks for the right-hand side of an autonomous delay system
/// y' = f(y(t), y(t - s_1), ...), expressed in the rescaled time theta = t / T.
class CycleTerms {
public:
    CycleTerms(bool chebyshev, std::optional<double> fixed_period) : chebyshev_(chebyshev), fixed_(fixed_period) {}

    /// y_c(t).
    [[nodiscard]] OpExpr state(std::size_t c) const;
    /// y_c(t - lag), wrapped around the period.
    [[nodiscard]] OpExpr lagged(std::size_t c, double lag) const;
    /// The period: a parameter when unknown, a constant otherwise.
    [[nodiscard]] OpExpr period() const;

private:
    bool chebyshev_;
    std::optional<double> fixed_;
};

struct PeriodicProblem {
    std::size_t n_components = 1;
    /// Right-hand sides f_c in physical time, one per component.
    std::function<std::vector<OpExpr>(const CycleTerms&)> rhs;
    bool period_unknown = true;
    PhaseCondition phase;
};

enum class CycleBasis { trigonometric, chebyshev };

struct LimitCycleOptions {
    CycleBasis basis = CycleBasis::trigonometric;
    NewtonOptions newton;
};

struct LimitCycle {
    Collocation colloc;                        // grid on theta in [0, 1]
    std::vector<std::vector<double>> states;   // per component, at colloc nodes
    double period = 0.0;
    NewtonReport report;

    /// Physical times theta_k * T of the nodes.
    [[nodiscard]] std::vector<double> times() const;
    /// Component c at theta (wraps modulo 1).
    [[nodiscard]] double value(std::size_t c, double theta) const;
};

/// Newton solve of the rescaled problem u' = T f(u, u(theta - s/T)) on [0, 1]
/// with unknowns (u, T). The initial guess is the trajectory over its final
/// full period of length `period_guess`, starting at a maximum of the phase
/// component. Throws std::runtime_error if an iterate has T <= 0.
[[nodiscard]] LimitCycle solve_limit_cycle(const PeriodicProblem& p, const Trajectory& initial, double period_guess,
                                           std::size_t n, const LimitCycleOptions& options = {});

/// Same, with the initial state given directly on the theta grid.
[[nodiscard]] LimitCycle solve_limit_cycle(const PeriodicProblem& p, std::vector<std::vector<double>> initial_states,
                                           double period_guess, std::size_t n, const LimitCycleOptions& options = {});

/// Infinity norm of u' - T f(u, u(theta - s/T)) for a computed cycle, evaluated
/// on a grid `refine` times finer by resampling the interpolant.
[[nodiscard]] double limit_cycle_residual(const PeriodicProblem& p, const LimitCycle& cycle, std::size_t refine = 4);

}  // namespace chebdde

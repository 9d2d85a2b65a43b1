#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <chebdde/newton.hpp>
#include <chebdde/periodic.hpp>

namespace chebdde::examples {

enum class Category { ode, dde, fde, evp, periodic, functional };

[[nodiscard]] std::string_view to_string(Category c) noexcept;

/// Knobs shared by every example; unset fields take the example's defaults.
struct ExampleSettings {
    std::optional<std::size_t> n;
    std::vector<std::size_t> sizes;  // per-panel sizes for multidomain examples
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<double> shift;         // eigenvalue problems
    std::optional<double> period_guess;  // limit cycles
    std::optional<Trajectory> trajectory;  // limit cycles: initial trajectory instead of integrating
};

/// Result of running one example.
struct ExampleOutcome {
    std::vector<double> t;                  // nodes in physical time
    std::vector<std::vector<double>> y;     // per component, at t
    std::vector<std::size_t> panel;         // panel index of each node
    std::vector<double> breakpoints;
    std::size_t dof = 0;
    std::optional<double> error;            // max node error against the exact solution
    std::optional<double> relative_error;
    double cond = 0.0;
    std::optional<NewtonReport> newton;
    std::vector<std::complex<double>> eigenvalues;
    std::optional<double> period;
    std::map<std::string, double> extras;
    /// Evaluates component 0 at arbitrary points (theta in [0,1] for limit cycles).
    std::function<std::vector<double>(std::span<const double>)> interpolant;
};

struct ExampleSpec {
    std::string name;
    std::string title;
    Category category;
    std::size_t default_n;
    std::size_t min_n;
    /// Present only when a closed form solution is known.
    std::function<double(double)> exact;
    std::function<ExampleOutcome(const ExampleSettings&)> run;
};

/// All registered examples, in catalogue order.
[[nodiscard]] const std::vector<ExampleSpec>& registry();

/// nullptr when the name is unknown.
[[nodiscard]] const ExampleSpec* find_example(std::string_view name);

struct ConvergenceRecord {
    std::size_t n = 0;  // total degrees of freedom
    double error = 0.0;
    double cond = 0.0;
};

/// Runs the example for n = n_min, n_min + step, ..., n_max. Errors use the
/// exact solution when known and the largest-n run as a proxy otherwise (the
/// proxy row itself is dropped). Eigenvalue problems compare the eigenvalue
/// lists, limit cycles compare the periodic profiles.
[[nodiscard]] std::vector<ConvergenceRecord> converge(const ExampleSpec& spec, std::size_t n_min, std::size_t n_max,
                                                      std::size_t step, const ExampleSettings& base = {});

/// Koenigs iterated composition lambda^-m f^m(t) for f(t) = lambda sin t.
[[nodiscard]] double koenigs_oracle(double t, double lambda, std::size_t compositions = 60);

/// Delayed Lotka-Volterra system with Holling type-II response.
struct LotkaVolterra {
    double K = 7.0 / 5.0;
    double gamma = 2.0 / 15.0;
    double delta = 1.0;
    double s = 1.0;
};

/// Delayed logistic equation y' = (lambda - y(t-1)) y.
struct Logistic {
    double lambda = 1.7;
    double lag = 1.0;
};

[[nodiscard]] PeriodicProblem lotka_volterra_problem(const LotkaVolterra& p);
[[nodiscard]] Trajectory lotka_volterra_trajectory(const LotkaVolterra& p, double t_end, double dt);
[[nodiscard]] PeriodicProblem logistic_problem(const Logistic& p);
[[nodiscard]] Trajectory logistic_trajectory(const Logistic& p, double t_end, double dt);

}  // namespace chebdde::examples

#include "chebdde/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "chebdde/errors.hpp"
#include "chebdde/linalg.hpp"

namespace chebdde {

namespace {

void validate(const CollocationProblem& p, std::span<const double> x) {
    if (p.equations.empty()) throw std::invalid_argument("collocation problem: no equations");
    const std::size_t nu = p.n_unknowns();
    if (x.size() != nu) throw std::invalid_argument("collocation problem: unknown vector has the wrong length");
    if (p.appended.size() != p.n_params)
        throw std::invalid_argument("collocation problem: appended rows must equal the number of parameters");
    std::set<std::size_t> seen;
    const std::size_t rows = p.n_components() * p.colloc.size();
    for (const auto& [pos, c] : p.replaced) {
        if (pos >= rows) throw std::invalid_argument("collocation problem: replaced row out of range");
        if (!seen.insert(pos).second) throw std::invalid_argument("collocation problem: row replaced twice");
        if (c.coeffs.size() != nu) throw std::invalid_argument("collocation problem: constraint has the wrong length");
    }
    for (const auto& c : p.appended)
        if (c.coeffs.size() != nu) throw std::invalid_argument("collocation problem: constraint has the wrong length");
}

double apply(const LinearConstraint& c, std::span<const double> x) {
    double s = -c.rhs;
    for (std::size_t j = 0; j < x.size(); ++j) s += c.coeffs[j] * x[j];
    return s;
}

std::span<const double> params_of(const CollocationProblem& p, std::span<const double> x) {
    return x.subspan(p.n_components() * p.colloc.size());
}

}  // namespace

std::vector<double> residual(const CollocationProblem& p, std::span<const double> x) {
    validate(p, x);
    const std::size_t n = p.colloc.size();
    const std::size_t d = p.n_components();
    std::vector<double> f;
    f.reserve(p.n_unknowns());
    const auto state = x.first(d * n);
    for (const auto& eq : p.equations) {
        const auto r = discretize(eq, p.colloc, state, params_of(p, x), p.layout());
        f.insert(f.end(), r.begin(), r.end());
    }
    for (const auto& [pos, c] : p.replaced) f[pos] = apply(c, x);
    for (const auto& c : p.appended) f.push_back(apply(c, x));
    return f;
}

BlockSystem linearized_system(const CollocationProblem& p, std::span<const double> x, std::size_t* clamped) {
    validate(p, x);
    const std::size_t n = p.colloc.size();
    const std::size_t d = p.n_components();
    const std::size_t nu = p.n_unknowns();
    BlockSystem sys;
    sys.matrix = Matrix(nu, nu);
    sys.rhs.assign(nu, 0.0);
    const auto state = x.first(d * n);
    std::size_t clamp_count = 0;
    for (std::size_t c = 0; c < d; ++c) {
        Linearization lin = linearize(p.equations[c], p.colloc, state, params_of(p, x), p.layout());
        clamp_count += lin.clamped;
        sys.matrix.set_block(c * n, 0, lin.jac);
        std::copy(lin.residual.begin(), lin.residual.end(), sys.rhs.begin() + static_cast<std::ptrdiff_t>(c * n));
    }
    for (const auto& [pos, c] : p.replaced) {
        std::copy(c.coeffs.begin(), c.coeffs.end(), sys.matrix.row(pos).begin());
        sys.rhs[pos] = apply(c, x);
        sys.constraint_rows.emplace_back(pos, c.description);
    }
    for (std::size_t k = 0; k < p.appended.size(); ++k) {
        const std::size_t pos = d * n + k;
        std::copy(p.appended[k].coeffs.begin(), p.appended[k].coeffs.end(), sys.matrix.row(pos).begin());
        sys.rhs[pos] = apply(p.appended[k], x);
        sys.constraint_rows.emplace_back(pos, p.appended[k].description);
    }
    if (clamped) *clamped = clamp_count;
    return sys;
}

NewtonResult newton(const CollocationProblem& p, std::vector<double> x0, const NewtonOptions& options) {
    NewtonResult result;
    result.x = std::move(x0);
    auto& report = result.report;
    const auto tolerance = [&] { return options.tol.value_or(1e-12 * (1.0 + norm_inf(result.x))); };
    while (true) {
        std::size_t clamped = 0;
        const BlockSystem sys = linearized_system(p, result.x, &clamped);
        const double residual_norm = norm_inf(sys.rhs);
        // A residual already at the tolerance after a step ends the iteration without another update.
        if (!report.iterations.empty() && residual_norm <= tolerance()) {
            report.converged = true;
            break;
        }
        if (report.iterations.size() >= options.max_iter) break;
        report.clamped += clamped;
        const LuFactorization lu(sys.matrix);
        if (lu.pivot_ratio() <= static_cast<double>(lu.size()) * std::numeric_limits<double>::epsilon())
            throw SingularMatrixError("newton: Jacobian is singular to working precision");
        const Vector delta = lu.solve(sys.rhs);
        NewtonStep step;
        step.residual_norm = residual_norm;
        step.update_norm = norm_inf(delta);
        double sq = 0.0;
        for (double d : delta) sq += d * d;
        step.update_norm_2 = std::sqrt(sq);
        for (std::size_t i = 0; i < delta.size(); ++i) result.x[i] -= delta[i];
        report.iterations.push_back(step);
        if (options.on_iterate) options.on_iterate(result.x);
        if (!std::isfinite(step.update_norm)) break;
        if (step.update_norm <= tolerance()) {
            report.converged = true;
            break;
        }
    }
    if (!report.iterations.empty()) {
        try {
            report.final_jacobian_cond = cond_inf(linearized_system(p, result.x).matrix);
        } catch (const SingularMatrixError&) {
            report.final_jacobian_cond = std::numeric_limits<double>::infinity();
        }
    }
    report.final_residual_norm = norm_inf(residual(p, result.x));
    return result;
}

NewtonResult solve_linear(const CollocationProblem& p) {
    NewtonOptions opts;
    opts.max_iter = 1;
    opts.tol = std::numeric_limits<double>::infinity();
    return newton(p, std::vector<double>(p.n_unknowns(), 0.0), opts);
}

std::vector<double> embed_row(std::span<const double> row, std::size_t component, const CollocationProblem& p) {
    const std::size_t n = p.colloc.size();
    if (row.size() != n) throw std::invalid_argument("embed_row: row length must equal the grid size");
    if (component >= p.n_components()) throw std::out_of_range("embed_row: component out of range");
    std::vector<double> full(p.n_unknowns(), 0.0);
    std::copy(row.begin(), row.end(), full.begin() + static_cast<std::ptrdiff_t>(component * n));
    return full;
}

std::vector<double> point_row(const CollocationProblem& p, std::size_t component, double x) {
    const Resampling r = p.colloc.resample(std::span<const double>(&x, 1), HistorySpec::none());
    return embed_row(r.matrix.row(0), component, p);
}

std::vector<double> derivative_row(const CollocationProblem& p, std::size_t component, std::size_t node,
                                   unsigned order) {
    if (node >= p.colloc.size()) throw std::out_of_range("derivative_row: node out of range");
    const Matrix d = p.colloc.diff(order);
    return embed_row(d.row(node), component, p);
}

std::vector<std::pair<std::size_t, LinearConstraint>> continuity_constraints(const CollocationProblem& p,
                                                                             std::size_t component, unsigned order,
                                                                             std::size_t n_left, std::size_t n_right) {
    const PiecewiseGrid& g = p.colloc.piecewise();
    const auto rows = continuity_rows(g, order);
    const ConstraintLayout layout = standard_layout(g, order, n_left, n_right);
    std::vector<std::pair<std::size_t, LinearConstraint>> out;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        LinearConstraint c;
        c.coeffs = embed_row(rows[k], component, p);
        c.description = "continuity at breakpoint " + std::to_string(k / order + 1) + ", derivative " +
                        std::to_string(k % order);
        out.emplace_back(component * g.size() + layout.interface[k], std::move(c));
    }
    return out;
}

}  // namespace chebdde

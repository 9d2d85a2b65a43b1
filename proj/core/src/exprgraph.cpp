#include "chebdde/exprgraph.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace chebdde {

namespace detail {

struct Node {
    OpExpr::Kind kind;
    std::size_t index = 0;  // component for unknown, parameter index for param
    unsigned order = 1;
    double factor = 1.0;
    std::function<double(double)> fn;
    DelayMap tau;
    StateMap state_map;
    HistorySpec history;
    Kernel kernel;
    ScalarFunction scalar;
    std::vector<OpExpr> children;
};

}  // namespace detail

using detail::Node;

DelayMap::DelayMap(std::function<double(double)> f) {
    if (!f) throw std::invalid_argument("DelayMap: empty map");
    value = [f = std::move(f)](double t, std::span<const double>) { return f(t); };
}

DelayMap::DelayMap(Value v, ParamDerivative dp) : value(std::move(v)), param_derivative(std::move(dp)) {
    if (!value) throw std::invalid_argument("DelayMap: empty map");
}

StateMap StateMap::identity() {
    return {[](double, double v) { return v; }, [](double, double) { return 1.0; }};
}

OpExpr::Kind OpExpr::kind() const noexcept { return node_->kind; }

namespace {

OpExpr make(Node n) { return OpExpr(std::make_shared<const Node>(std::move(n))); }

Node bare(OpExpr::Kind k) {
    Node n;
    n.kind = k;
    return n;
}

}  // namespace

OpExpr unknown(std::size_t component) {
    Node n = bare(OpExpr::Kind::unknown);
    n.index = component;
    return make(std::move(n));
}

OpExpr indep_var() { return make(bare(OpExpr::Kind::indep_var)); }

OpExpr constant(std::function<double(double)> fn) {
    if (!fn) throw std::invalid_argument("constant: empty function");
    Node n = bare(OpExpr::Kind::constant);
    n.fn = std::move(fn);
    return make(std::move(n));
}

OpExpr constant(double c) {
    return constant([c](double) { return c; });
}

OpExpr diff(OpExpr child, unsigned order) {
    if (order == 0) return child;
    Node n = bare(OpExpr::Kind::diff);
    n.order = order;
    n.children = {std::move(child)};
    return make(std::move(n));
}

OpExpr delay(OpExpr child, DelayMap tau, HistorySpec history) {
    if (!tau.value) throw std::invalid_argument("delay: empty delay map");
    Node n = bare(OpExpr::Kind::delay_eval);
    n.tau = std::move(tau);
    n.history = std::move(history);
    n.children = {std::move(child)};
    return make(std::move(n));
}

OpExpr state_delay(OpExpr child, OpExpr argument, StateMap g, HistorySpec history) {
    if (!g.g || !g.dg) throw std::invalid_argument("state_delay: map and derivative are both required");
    Node n = bare(OpExpr::Kind::state_delay_eval);
    n.state_map = std::move(g);
    n.history = std::move(history);
    n.children = {std::move(child), std::move(argument)};
    return make(std::move(n));
}

OpExpr neutral(OpExpr child, DelayMap tau, HistorySpec history) {
    if (!tau.value) throw std::invalid_argument("neutral: empty delay map");
    Node n = bare(OpExpr::Kind::neutral_eval);
    n.tau = std::move(tau);
    n.history = std::move(history);
    n.children = {std::move(child)};
    return make(std::move(n));
}

OpExpr cumsum(OpExpr child) {
    Node n = bare(OpExpr::Kind::cumsum);
    n.children = {std::move(child)};
    return make(std::move(n));
}

OpExpr volterra(Kernel kernel, OpExpr child) {
    if (!kernel) throw std::invalid_argument("volterra: empty kernel");
    Node n = bare(OpExpr::Kind::volterra);
    n.kernel = std::move(kernel);
    n.children = {std::move(child)};
    return make(std::move(n));
}

OpExpr sum(std::vector<OpExpr> terms) {
    if (terms.empty()) throw std::invalid_argument("sum: no terms");
    if (terms.size() == 1) return terms.front();
    Node n = bare(OpExpr::Kind::sum);
    n.children = std::move(terms);
    return make(std::move(n));
}

OpExpr product(std::vector<OpExpr> factors) {
    if (factors.empty()) throw std::invalid_argument("product: no factors");
    if (factors.size() == 1) return factors.front();
    Node n = bare(OpExpr::Kind::product);
    n.children = std::move(factors);
    return make(std::move(n));
}

OpExpr scale(double factor, OpExpr child) {
    Node n = bare(OpExpr::Kind::scale);
    n.factor = factor;
    n.children = {std::move(child)};
    return make(std::move(n));
}

OpExpr elementwise(ScalarFunction fn, OpExpr child) {
    if (!fn.f || !fn.df) throw std::invalid_argument("elementwise: function and derivative are both required");
    Node n = bare(OpExpr::Kind::elementwise);
    n.scalar = std::move(fn);
    n.children = {std::move(child)};
    return make(std::move(n));
}

OpExpr param(std::size_t index) {
    Node n = bare(OpExpr::Kind::param);
    n.index = index;
    return make(std::move(n));
}

OpExpr operator+(OpExpr a, OpExpr b) { return sum({std::move(a), std::move(b)}); }
OpExpr operator-(OpExpr a, OpExpr b) { return sum({std::move(a), scale(-1.0, std::move(b))}); }
OpExpr operator-(OpExpr a) { return scale(-1.0, std::move(a)); }
OpExpr operator*(OpExpr a, OpExpr b) { return product({std::move(a), std::move(b)}); }
OpExpr operator*(double s, OpExpr a) { return scale(s, std::move(a)); }

OpExpr exp(OpExpr a) {
    return elementwise({[](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }}, std::move(a));
}

OpExpr log(OpExpr a) {
    return elementwise({[](double x) { return std::log(x); }, [](double x) { return 1.0 / x; }}, std::move(a));
}

OpExpr sin(OpExpr a) {
    return elementwise({[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }}, std::move(a));
}

OpExpr cos(OpExpr a) {
    return elementwise({[](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }}, std::move(a));
}

OpExpr pow(OpExpr a, double exponent) {
    return elementwise({[exponent](double x) { return std::pow(x, exponent); },
                        [exponent](double x) { return exponent * std::pow(x, exponent - 1.0); }},
                       std::move(a));
}

OpExpr reciprocal(OpExpr a) {
    return elementwise({[](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); }}, std::move(a));
}

namespace {

/// Value of a node at the collocation points and, optionally, its Jacobian.
/// An absent Jacobian means the node does not depend on the unknowns.
struct Eval {
    std::vector<double> value;
    std::optional<Matrix> jac;
};

class Evaluator {
public:
    Evaluator(const Collocation& colloc, std::span<const double> state, std::span<const double> params,
              StateLayout layout, bool want_jac)
        : colloc_(colloc), state_(state), params_(params), layout_(layout), want_jac_(want_jac), n_(colloc.size()) {
        if (layout.n_components == 0) throw std::invalid_argument("expression evaluation: no components");
        if (state.size() != layout.n_components * n_)
            throw std::invalid_argument("expression evaluation: state length does not match the grid");
        if (layout.n_params > params.size())
            throw std::invalid_argument("expression evaluation: fewer parameter values than parameter unknowns");
        cols_ = layout.n_components * n_ + layout.n_params;
    }

    [[nodiscard]] std::size_t clamped() const noexcept { return clamped_; }

    Eval eval(const OpExpr& e) {
        const Node& node = e.node();
        switch (node.kind) {
            case OpExpr::Kind::unknown: return eval_unknown(node);
            case OpExpr::Kind::indep_var: return {{colloc_.nodes().begin(), colloc_.nodes().end()}, std::nullopt};
            case OpExpr::Kind::constant: {
                std::vector<double> v(n_);
                for (std::size_t i = 0; i < n_; ++i) v[i] = node.fn(colloc_.nodes()[i]);
                return {std::move(v), std::nullopt};
            }
            case OpExpr::Kind::diff: {
                Eval c = eval(node.children[0]);
                const Matrix d = colloc_.diff(node.order);
                return apply(d, std::move(c));
            }
            case OpExpr::Kind::delay_eval: return eval_delay(node, false);
            case OpExpr::Kind::neutral_eval: return eval_delay(node, true);
            case OpExpr::Kind::state_delay_eval: return eval_state_delay(node);
            case OpExpr::Kind::cumsum: return apply(colloc_.cumsum(), eval(node.children[0]));
            case OpExpr::Kind::volterra: {
                Matrix v = colloc_.cumsum();
                const auto t = colloc_.nodes();
                for (std::size_t i = 0; i < n_; ++i)
                    for (std::size_t j = 0; j < n_; ++j)
                        if (v(i, j) != 0.0) v(i, j) *= node.kernel(t[i], t[j]);
                return apply(v, eval(node.children[0]));
            }
            case OpExpr::Kind::sum: {
                Eval acc = eval(node.children[0]);
                for (std::size_t k = 1; k < node.children.size(); ++k) {
                    Eval term = eval(node.children[k]);
                    for (std::size_t i = 0; i < n_; ++i) acc.value[i] += term.value[i];
                    add_jac(acc.jac, term.jac);
                }
                return acc;
            }
            case OpExpr::Kind::scale: {
                Eval c = eval(node.children[0]);
                for (auto& v : c.value) v *= node.factor;
                if (c.jac) *c.jac *= node.factor;
                return c;
            }
            case OpExpr::Kind::product: return eval_product(node);
            case OpExpr::Kind::elementwise: {
                Eval c = eval(node.children[0]);
                std::vector<double> deriv(n_);
                for (std::size_t i = 0; i < n_; ++i) {
                    deriv[i] = node.scalar.df(c.value[i]);
                    c.value[i] = node.scalar.f(c.value[i]);
                }
                if (c.jac) c.jac->scale_rows(deriv);
                return c;
            }
            case OpExpr::Kind::param: {
                if (node.index >= params_.size()) throw std::out_of_range("param: index beyond the parameter vector");
                Eval out{std::vector<double>(n_, params_[node.index]), std::nullopt};
                if (want_jac_ && node.index < layout_.n_params) {
                    out.jac = Matrix(n_, cols_);
                    const std::size_t col = param_column(node.index);
                    for (std::size_t i = 0; i < n_; ++i) (*out.jac)(i, col) = 1.0;
                }
                return out;
            }
        }
        throw std::logic_error("expression evaluation: unknown node kind");
    }

private:
    [[nodiscard]] std::size_t param_column(std::size_t k) const { return layout_.n_components * n_ + k; }

    Eval eval_unknown(const Node& node) {
        if (node.index >= layout_.n_components) throw std::out_of_range("unknown: component index out of range");
        const std::size_t off = node.index * n_;
        Eval out{{state_.begin() + static_cast<std::ptrdiff_t>(off), state_.begin() + static_cast<std::ptrdiff_t>(off + n_)},
                 std::nullopt};
        if (want_jac_) {
            out.jac = Matrix(n_, cols_);
            for (std::size_t i = 0; i < n_; ++i) (*out.jac)(i, off + i) = 1.0;
        }
        return out;
    }

    Eval apply(const Matrix& m, Eval c) const {
        Eval out{m * c.value, std::nullopt};
        if (c.jac) out.jac = m * *c.jac;
        return out;
    }

    static void add_jac(std::optional<Matrix>& acc, const std::optional<Matrix>& term) {
        if (!term) return;
        if (acc) {
            *acc += *term;
        } else {
            acc = term;
        }
    }

    /// Adds diag(weights) * src to dst (allocating dst if needed).
    void add_scaled_rows(std::optional<Matrix>& dst, std::span<const double> weights, const Matrix& src) const {
        Matrix scaled = src;
        scaled.scale_rows(weights);
        if (dst) {
            *dst += scaled;
        } else {
            dst = std::move(scaled);
        }
    }

    /// child(tau(t)) or, for neutral nodes, child'(tau(t)).
    Eval eval_delay(const Node& node, bool derivative) {
        const auto t = colloc_.nodes();
        std::vector<double> points(n_);
        for (std::size_t i = 0; i < n_; ++i) points[i] = node.tau(t[i], params_);
        Resampling r = colloc_.resample(points, node.history);
        clamped_ += r.clamped;

        Eval c = eval(node.children[0]);
        Matrix op = derivative ? r.matrix * colloc_.diff() : std::move(r.matrix);
        Eval out{op * c.value, std::nullopt};
        for (std::size_t i = 0; i < n_; ++i) out.value[i] += r.offset[i];
        if (c.jac) out.jac = op * *c.jac;

        if (want_jac_ && layout_.n_params > 0 && node.tau.param_derivative) {
            // d/dp child(tau(t; p)) = child'(tau) * dtau/dp
            const std::vector<double> slope = (op * colloc_.diff()) * c.value;
            for (std::size_t k = 0; k < layout_.n_params; ++k) {
                const std::size_t col = param_column(k);
                for (std::size_t i = 0; i < n_; ++i) {
                    const double dtau = node.tau.param_derivative(t[i], params_, k);
                    if (dtau == 0.0) continue;
                    const double s = r.outside[i] ? r.offset_slope[i] : slope[i];
                    if (s == 0.0) continue;
                    if (!out.jac) out.jac = Matrix(n_, cols_);
                    (*out.jac)(i, col) += dtau * s;
                }
            }
        }
        return out;
    }

    /// child(g(t, a(t))): J = R J_c + diag(g'(a) * (R D c + slope)) J_a.
    Eval eval_state_delay(const Node& node) {
        const auto t = colloc_.nodes();
        Eval c = eval(node.children[0]);
        Eval a = eval(node.children[1]);
        std::vector<double> points(n_);
        for (std::size_t i = 0; i < n_; ++i) points[i] = node.state_map.g(t[i], a.value[i]);
        Resampling r = colloc_.resample(points, node.history);
        clamped_ += r.clamped;

        Eval out{r.matrix * c.value, std::nullopt};
        for (std::size_t i = 0; i < n_; ++i) out.value[i] += r.offset[i];
        if (!want_jac_) return out;
        if (c.jac) out.jac = r.matrix * *c.jac;
        if (a.jac) {
            const Matrix rd = r.matrix * colloc_.diff();
            std::vector<double> w = rd * c.value;
            for (std::size_t i = 0; i < n_; ++i) {
                if (r.outside[i]) w[i] = r.offset_slope[i];
                w[i] *= node.state_map.dg(t[i], a.value[i]);
            }
            add_scaled_rows(out.jac, w, *a.jac);
        }
        return out;
    }

    Eval eval_product(const Node& node) {
        std::vector<Eval> factors;
        factors.reserve(node.children.size());
        for (const auto& ch : node.children) factors.push_back(eval(ch));
        Eval out{std::vector<double>(n_, 1.0), std::nullopt};
        for (const auto& f : factors)
            for (std::size_t i = 0; i < n_; ++i) out.value[i] *= f.value[i];
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (!factors[k].jac) continue;
            std::vector<double> others(n_, 1.0);
            for (std::size_t j = 0; j < factors.size(); ++j) {
                if (j == k) continue;
                for (std::size_t i = 0; i < n_; ++i) others[i] *= factors[j].value[i];
            }
            add_scaled_rows(out.jac, others, *factors[k].jac);
        }
        return out;
    }

    const Collocation& colloc_;
    std::span<const double> state_;
    std::span<const double> params_;
    StateLayout layout_;
    bool want_jac_;
    std::size_t n_;
    std::size_t cols_ = 0;
    std::size_t clamped_ = 0;
};

}  // namespace

std::vector<double> discretize(const OpExpr& e, const Collocation& colloc, std::span<const double> state,
                               std::span<const double> params, StateLayout layout) {
    Evaluator ev(colloc, state, params, layout, false);
    return ev.eval(e).value;
}

Linearization linearize(const OpExpr& e, const Collocation& colloc, std::span<const double> state,
                        std::span<const double> params, StateLayout layout) {
    Evaluator ev(colloc, state, params, layout, true);
    Eval out = ev.eval(e);
    Linearization lin;
    lin.residual = std::move(out.value);
    lin.jac = out.jac ? std::move(*out.jac) : Matrix(colloc.size(), layout.n_components * colloc.size() + layout.n_params);
    lin.clamped = ev.clamped();
    return lin;
}

std::vector<double> discretize(const OpExpr& e, const PiecewiseGrid& g, const PiecewiseFunction& y,
                               std::span<const double> params) {
    return discretize(e, Collocation(g), y.values, params, {1, params.size()});
}

Linearization linearize(const OpExpr& e, const PiecewiseGrid& g, const PiecewiseFunction& y,
                        std::span<const double> params) {
    return linearize(e, Collocation(g), y.values, params, {1, params.size()});
}

}  // namespace chebdde

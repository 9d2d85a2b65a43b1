#include "chebdde/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "chebdde/errors.hpp"
#include "chebdde/interp.hpp"
#include "chebdde/linalg.hpp"

namespace chebdde {

namespace {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

CVector times(const Matrix& m, const CVector& v) {
    std::vector<double> re(v.size());
    std::vector<double> im(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        re[i] = v[i].real();
        im[i] = v[i].imag();
    }
    const Vector mr = m * re;
    const Vector mi = m * im;
    CVector out(mr.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {mr[i], mi[i]};
    return out;
}

double inf_norm(const CVector& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

void normalise(CVector& v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
    const cplx pivot = v[k];
    if (pivot == cplx{}) return;
    for (auto& z : v) z /= pivot;
}

/// Solves (A - lambda B) x = B v for complex lambda through the real 2N form.
class ShiftedSolver {
public:
    ShiftedSolver(const Matrix& a, const Matrix& b, cplx lambda) : n_(a.rows()), complex_(lambda.imag() != 0.0) {
        const double alpha = lambda.real();
        const double beta = lambda.imag();
        Matrix shifted = a;
        shifted -= alpha * b;
        if (!complex_) {
            lu_.emplace(std::move(shifted));
            return;
        }
        Matrix big(2 * n_, 2 * n_);
        big.set_block(0, 0, shifted);
        big.set_block(n_, n_, shifted);
        big.set_block(0, n_, beta * b);
        big.set_block(n_, 0, -beta * b);
        lu_.emplace(std::move(big));
    }

    CVector solve(const CVector& rhs) const {
        if (!complex_) {
            std::vector<double> re(n_);
            std::vector<double> im(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                re[i] = rhs[i].real();
                im[i] = rhs[i].imag();
            }
            const Vector xr = lu_->solve(re);
            const Vector xi = lu_->solve(im);
            CVector out(n_);
            for (std::size_t i = 0; i < n_; ++i) out[i] = {xr[i], xi[i]};
            return out;
        }
        std::vector<double> stacked(2 * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            stacked[i] = rhs[i].real();
            stacked[n_ + i] = rhs[i].imag();
        }
        const Vector x = lu_->solve(stacked);
        CVector out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = {x[i], x[n_ + i]};
        return out;
    }

private:
    std::size_t n_;
    bool complex_;
    std::optional<LuFactorization> lu_;
};

double tail_mass_complex(const PiecewiseGrid& g, const CVector& v, double fraction) {
    std::vector<double> re(v.size());
    std::vector<double> im(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        re[i] = v[i].real();
        im[i] = v[i].imag();
    }
    return std::max(chebyshev_tail_mass(g, re, fraction), chebyshev_tail_mass(g, im, fraction));
}

}  // namespace

double chebyshev_tail_mass(const PiecewiseGrid& g, std::span<const double> values, double tail_fraction) {
    if (values.size() != g.size()) throw std::invalid_argument("chebyshev_tail_mass: size mismatch");
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t k = 0; k < g.panel_count(); ++k) {
        const std::size_t n = g.panel(k).size();
        const auto coeffs = chebyshev_coefficients(values.subspan(g.offset(k), n));
        const auto n_tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
        for (std::size_t j = 0; j < n; ++j) {
            total += std::abs(coeffs[j]);
            if (j + n_tail >= n) tail += std::abs(coeffs[j]);
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

EigResult eig_generalized(const Matrix& a, const Matrix& b, std::size_t k, double shift, const EigOptions& options) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n || b.cols() != n)
        throw std::invalid_argument("eig_generalized: A and B must be square and of equal size");
    if (options.grid && options.grid->size() != n)
        throw std::invalid_argument("eig_generalized: grid size does not match the pencil");

    Matrix shifted = a;
    shifted -= shift * b;
    std::optional<LuFactorization> lu;
    try {
        lu.emplace(std::move(shifted));
    } catch (const SingularMatrixError&) {
        throw ShiftCollisionError("eig_generalized: A - shift*B is singular; perturb the shift");
    }
    if (lu->pivot_ratio() < 1e-14) throw ShiftCollisionError("eig_generalized: shift is (numerically) an eigenvalue");

    const Matrix m = lu->solve(b);
    const std::vector<cplx> mu = eigenvalues(m);
    double mu_max = 0.0;
    for (const auto& z : mu) mu_max = std::max(mu_max, std::abs(z));

    std::vector<cplx> candidates;
    for (const auto& z : mu) {
        if (std::abs(z) <= 1e-13 * mu_max || z == cplx{}) continue;  // infinite eigenvalue
        if (z.imag() < 0.0) continue;                                // take each conjugate pair once
        candidates.push_back(shift + 1.0 / z);
    }
    std::sort(candidates.begin(), candidates.end(), [shift](const cplx& x, const cplx& y) {
        const double dx = std::abs(x - shift);
        const double dy = std::abs(y - shift);
        if (dx != dy) return dx < dy;
        return x.imag() > y.imag();
    });

    EigResult result;
    result.n_used = n;
    const double scale_a = a.norm_inf();
    for (const cplx& lambda0 : candidates) {
        if (result.eigenvalues.size() >= k) break;
        const double mag = std::max(std::abs(lambda0), 1.0);
        CVector v(n, cplx{1.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) v[i] += 0.01 * static_cast<double>(i % 7);
        cplx used = lambda0;
        CVector best;
        double res = std::numeric_limits<double>::infinity();
        bool solved = false;
        // Inverse iteration with the shift moved to the least-squares
        // eigenvalue estimate after each step; the best pair is kept.
        cplx target = lambda0;
        for (std::size_t it = 0; it < options.inverse_iterations; ++it) {
            const cplx perturbed = target + cplx(options.inverse_iteration_shift * mag, 0.0);
            CVector w;
            try {
                const ShiftedSolver solver(a, b, perturbed);
                CVector rhs = times(b, v);
                if (inf_norm(rhs) == 0.0) rhs = v;
                w = solver.solve(rhs);
            } catch (const SingularMatrixError&) {
                break;
            }
            normalise(w);
            const CVector aw = times(a, w);
            const CVector bw = times(b, w);
            cplx num{};
            double den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                num += std::conj(bw[i]) * aw[i];
                den += std::norm(bw[i]);
            }
            if (!(den > 0.0)) break;
            const cplx estimate = num / den;
            if (!(std::abs(estimate - lambda0) <= options.refinement_window * mag)) break;
            double r = 0.0;
            for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(aw[i] - estimate * bw[i]));
            r /= inf_norm(w);
            v = w;
            target = estimate;
            if (r < res) {
                res = r;
                used = estimate;
                best = v;
                solved = true;
            }
        }
        if (!solved) {
            ++result.rejected;
            continue;
        }
        v = std::move(best);
        if (lambda0.imag() == 0.0) used = used.real();

        const bool duplicate = std::any_of(result.eigenvalues.begin(), result.eigenvalues.end(),
                                           [&](const cplx& z) { return std::abs(z - used) <= 1e-8 * mag; });
        if (duplicate) {
            ++result.rejected;
            continue;
        }
        if (options.grid && tail_mass_complex(*options.grid, v, options.tail_fraction) > options.tail_mass) {
            ++result.rejected;
            continue;
        }
        if (!(res <= 1e-8 * std::max(scale_a, 1.0))) {
            ++result.rejected;
            continue;
        }
        result.eigenvalues.push_back(used);
        result.eigenvectors.push_back(std::move(v));
        result.residuals.push_back(res);
        if (used.imag() != 0.0 && result.eigenvalues.size() < k) {
            CVector conj_v = result.eigenvectors.back();
            for (auto& z : conj_v) z = std::conj(z);
            result.eigenvalues.push_back(std::conj(used));
            result.eigenvectors.push_back(std::move(conj_v));
            result.residuals.push_back(res);
        }
    }
    return result;
}

std::vector<PiecewiseFunction> eigenfunctions(const EigResult& result, const PiecewiseGrid& g) {
    std::vector<PiecewiseFunction> out;
    out.reserve(result.eigenvectors.size());
    for (const auto& v : result.eigenvectors) {
        if (v.size() != g.size()) throw std::invalid_argument("eigenfunctions: grid size does not match");
        std::vector<double> re(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) re[i] = v[i].real();
        out.emplace_back(g, std::move(re));
    }
    return out;
}

}  // namespace chebdde

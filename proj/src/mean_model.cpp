#include "rankdyn/mean_model.hpp"

#include <cmath>

#include "rankdyn/errors.hpp"

namespace rankdyn {

void cholesky_factor(std::vector<double>& A, int p)
{
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = A[i * p + j];
            for (int k = 0; k < j; ++k)
                s -= A[i * p + k] * A[j * p + k];
            if (i == j) {
                if (s <= 0.0)
                    throw InternalError("cholesky_factor: matrix not positive definite");
                A[i * p + j] = std::sqrt(s);
            } else {
                A[i * p + j] = s / A[j * p + j];
            }
        }
        for (int j = i + 1; j < p; ++j)
            A[i * p + j] = 0.0;
    }
}

void cholesky_solve(const std::vector<double>& L, int p, std::vector<double>& b)
{
    for (int i = 0; i < p; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k)
            s -= L[i * p + k] * b[k];
        b[i] = s / L[i * p + i];
    }
    for (int i = p - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < p; ++k)
            s -= L[k * p + i] * b[k];
        b[i] = s / L[i * p + i];
    }
}

BartMeanModel::BartMeanModel(int n, int dim, const BartPrior& prior)
    : dim_(dim), sampler_(n, dim, prior)
{
}

void BartMeanModel::set_design(const double* X, int n)
{
    (void)n;
    sampler_.set_design(X);
}

void BartMeanModel::update(const std::vector<double>& targets, Rng& rng)
{
    sampler_.sweep(targets, rng);
}

LinearMeanModel::LinearMeanModel(int dim, double prior_variance)
    : dim_(dim), prior_variance_(prior_variance), coef_(dim + 1, 0.0)
{
}

void LinearMeanModel::set_design(const double* X, int n)
{
    X_ = X;
    n_ = n;
    fitted_.resize(n);
    refresh_fits();
}

double LinearMeanModel::mean_of(const double* x) const
{
    double m = coef_[0];
    for (int k = 0; k < dim_; ++k)
        m += coef_[k + 1] * x[k];
    return m;
}

void LinearMeanModel::refresh_fits()
{
    for (int i = 0; i < n_; ++i)
        fitted_[i] = mean_of(X_ + static_cast<size_t>(i) * dim_);
}

void LinearMeanModel::restore(const PosteriorDraw& draw)
{
    set_coefficients(draw.beta);
}

void LinearMeanModel::set_coefficients(std::vector<double> c)
{
    if (static_cast<int>(c.size()) != dim_ + 1)
        throw InternalError("LinearMeanModel: coefficient size mismatch");
    coef_ = std::move(c);
    if (X_)
        refresh_fits();
}

void LinearMeanModel::update(const std::vector<double>& targets, Rng& rng)
{
    const int p = dim_ + 1;
    // posterior precision P = I / prior_var + X'X, with X = [1, x]
    std::vector<double> P(static_cast<size_t>(p) * p, 0.0);
    std::vector<double> b(p, 0.0);
    for (int i = 0; i < n_; ++i) {
        const double* x = X_ + static_cast<size_t>(i) * dim_;
        double y = targets[i];
        P[0] += 1.0;
        b[0] += y;
        for (int k = 0; k < dim_; ++k) {
            P[(k + 1) * p] += x[k]; // first column; symmetrize below
            b[k + 1] += x[k] * y;
            for (int l = 0; l <= k; ++l)
                P[(k + 1) * p + (l + 1)] += x[k] * x[l];
        }
    }
    for (int r = 0; r < p; ++r) {
        P[r * p + r] += 1.0 / prior_variance_;
        for (int c = r + 1; c < p; ++c)
            P[r * p + c] = P[c * p + r];
    }

    cholesky_factor(P, p);
    std::vector<double> m = b;
    cholesky_solve(P, p, m);

    // draw = m + L^{-T} eps, Var = P^{-1}
    std::vector<double> eps(p);
    for (int k = 0; k < p; ++k)
        eps[k] = rng.normal();
    for (int i = p - 1; i >= 0; --i) {
        double s = eps[i];
        for (int k = i + 1; k < p; ++k)
            s -= P[k * p + i] * eps[k];
        eps[i] = s / P[i * p + i];
    }
    for (int k = 0; k < p; ++k)
        coef_[k] = m[k] + eps[k];
    refresh_fits();
}

} // namespace rankdyn

#pragma once

#include <memory>
#include <vector>

#include "rankdyn/archive.hpp"
#include "rankdyn/bart.hpp"
#include "rankdyn/rng.hpp"

namespace rankdyn {

/// Regression component of a Thurstone sampler: either a BART forest or a
/// conjugate linear model, updated once per Gibbs sweep against the current
/// latent targets under unit observation noise.
class MeanModel {
public:
    virtual ~MeanModel() = default;

    /// Row-major n x dim design; pointer retained. Must be called again
    /// after design columns change (lagged latent scores move every sweep).
    virtual void set_design(const double* X, int n) = 0;

    virtual void update(const std::vector<double>& targets, Rng& rng) = 0;

    /// Cached fitted mean for a design row.
    virtual double mean_row(int row) const = 0;
    /// Mean at an arbitrary covariate point.
    virtual double mean_of(const double* x) const = 0;

    virtual void store(PosteriorDraw& draw) const = 0;
    virtual void restore(const PosteriorDraw& draw) = 0;

    virtual int dim() const = 0;
    virtual double acceptance_rate() const { return 0.0; }
};

class BartMeanModel final : public MeanModel {
public:
    BartMeanModel(int n, int dim, const BartPrior& prior);

    void set_design(const double* X, int n) override;
    void update(const std::vector<double>& targets, Rng& rng) override;
    double mean_row(int row) const override { return sampler_.fitted(row); }
    double mean_of(const double* x) const override { return sampler_.forest().evaluate(x); }
    void store(PosteriorDraw& draw) const override { draw.forest = sampler_.forest(); }
    void restore(const PosteriorDraw& draw) override { sampler_.set_forest(draw.forest); }
    int dim() const override { return dim_; }
    double acceptance_rate() const override { return sampler_.acceptance_rate(); }

    const Forest& forest() const { return sampler_.forest(); }

private:
    int dim_;
    BartSampler sampler_;
};

/// Linear mean alpha + x' beta with conjugate prior N(0, prior_variance * I)
/// on the stacked (alpha, beta) under unit noise.
class LinearMeanModel final : public MeanModel {
public:
    LinearMeanModel(int dim, double prior_variance = 100.0);

    void set_design(const double* X, int n) override;
    void update(const std::vector<double>& targets, Rng& rng) override;
    double mean_row(int row) const override { return fitted_[row]; }
    double mean_of(const double* x) const override;
    void store(PosteriorDraw& draw) const override { draw.beta = coef_; }
    void restore(const PosteriorDraw& draw) override;
    int dim() const override { return dim_; }

    const std::vector<double>& coefficients() const { return coef_; }
    void set_coefficients(std::vector<double> c);

private:
    void refresh_fits();

    int dim_;
    double prior_variance_;
    const double* X_ = nullptr;
    int n_ = 0;
    std::vector<double> coef_;   // [intercept, beta...]
    std::vector<double> fitted_;
};

/// In-place Cholesky solve of the SPD system A x = b (A row-major p x p).
/// Used by the conjugate coefficient draws; p is small.
void cholesky_factor(std::vector<double>& A, int p);
void cholesky_solve(const std::vector<double>& L, int p, std::vector<double>& b);

} // namespace rankdyn

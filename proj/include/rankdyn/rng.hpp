#pragma once

#include <cstdint>
#include <limits>

namespace rankdyn {

// Standard normal CDF and its inverse, accurate into the far tails.
double normal_cdf(double x);
double normal_cdf_complement(double x);
double normal_quantile(double p);

/// Deterministic RNG stream. All variate code is self-contained so that a
/// given seed produces the same byte stream on every platform (the std
/// distribution classes are implementation-defined and are not used).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    /// Uniform integer in {0, ..., n-1}, n >= 1.
    int uniform_int(int n);
    /// Standard normal draw via inverse CDF (one uniform per draw).
    double normal();
    /// Exponential(1) draw.
    double exponential();

    /// Independent child stream. Derivation depends only on (parent seed,
    /// stream id), not on how much the parent has been consumed, so worker
    /// seeds are schedule-independent.
    Rng derive(std::uint64_t stream_id) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
};

/// Exact draw from N(mu, 1) restricted to the open interval (lower, upper).
/// Either bound may be infinite. Robust in far tails (complementary-CDF
/// inversion, with a rejection fallback where the CDF underflows).
double truncated_normal_draw(double mu, double lower, double upper, Rng& rng);

} // namespace rankdyn

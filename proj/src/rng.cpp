#include "rankdyn/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rankdyn {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x)
{
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

const double kSqrt2 = 1.4142135623730950488;

} // namespace

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_cdf_complement(double x)
{
    return 0.5 * std::erfc(x / kSqrt2);
}

// Acklam's rational approximation followed by one Halley step; relative
// error is near machine precision over (0, 1).
double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p outside (0,1)");

    static const double a[] = { -3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00 };
    static const double b[] = { -5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01 };
    static const double c[] = { -7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00, 2.938163982698783e+00 };
    static const double d[] = { 7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00 };

    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement against the erfc-based CDF.
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

Rng::Rng(std::uint64_t seed) : seed_(seed)
{
    std::uint64_t sm = seed;
    for (auto& s : state_)
        s = splitmix64(sm);
}

std::uint64_t Rng::next_u64()
{
    // xoshiro256++
    std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open()
{
    double u;
    do {
        u = uniform();
    } while (u == 0.0);
    return u;
}

int Rng::uniform_int(int n)
{
    if (n <= 0)
        throw std::invalid_argument("uniform_int: n must be positive");
    // rejection to avoid modulo bias
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % static_cast<std::uint64_t>(n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % static_cast<std::uint64_t>(n));
}

double Rng::normal()
{
    return normal_quantile(uniform_open());
}

double Rng::exponential()
{
    return -std::log(uniform_open());
}

Rng Rng::derive(std::uint64_t stream_id) const
{
    std::uint64_t mix = seed_ ^ 0x6a09e667f3bcc909ULL;
    std::uint64_t a = splitmix64(mix);
    mix ^= stream_id * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL;
    std::uint64_t b = splitmix64(mix);
    return Rng(a ^ rotl(b, 32) ^ stream_id);
}

namespace {

// One-sided draw from the standard normal restricted to [a, inf).
double rtnorm_lower(double a, Rng& rng)
{
    if (a < 0.45) {
        double z;
        do {
            z = rng.normal();
        } while (z < a);
        return z;
    }
    // shifted-exponential rejection (Robert 1995)
    double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
        double z = a + rng.exponential() / lambda;
        double d = z - lambda;
        if (std::log(rng.uniform_open()) <= -0.5 * d * d)
            return z;
    }
}

// Two-sided draw on [a, b] with 0 <= a < b, via uniform rejection with the
// exp(-(x^2 - a^2)/2) bound. Only used when the interval is deep in the tail.
double rtnorm_interval_tail(double a, double b, Rng& rng)
{
    for (;;) {
        double x = a + (b - a) * rng.uniform_open();
        if (std::log(rng.uniform_open()) <= 0.5 * (a * a - x * x))
            return x;
    }
}

} // namespace

double truncated_normal_draw(double mu, double lower, double upper, Rng& rng)
{
    if (!(lower < upper))
        throw std::invalid_argument("truncated_normal_draw: lower >= upper");

    double a = lower - mu;
    double b = upper - mu;
    bool a_inf = std::isinf(a) && a < 0.0;
    bool b_inf = std::isinf(b) && b > 0.0;

    double z;
    if (a_inf && b_inf) {
        z = rng.normal();
    } else if (b_inf) {
        z = rtnorm_lower(a, rng);
    } else if (a_inf) {
        z = -rtnorm_lower(-b, rng);
    } else {
        // flip so the interval sits at or above the mode side with a >= 0
        bool flip = std::abs(a) > std::abs(b);
        double lo = flip ? -b : a;
        double hi = flip ? -a : b;
        if (lo <= 0.0) {
            // interval straddles or touches the mode: direct CDF inversion
            double pa = normal_cdf(lo);
            double pb = normal_cdf(hi);
            z = normal_quantile(pa + (pb - pa) * rng.uniform_open());
        } else {
            double qa = normal_cdf_complement(lo);
            double qb = normal_cdf_complement(hi);
            if (qa > 1e-280 && qa - qb > 1e-10 * qa) {
                double q = qb + (qa - qb) * rng.uniform_open();
                z = -normal_quantile(q);
            } else {
                // CDF underflows; fall back to rejection in the tail
                z = rtnorm_interval_tail(lo, hi, rng);
            }
        }
        if (flip)
            z = -z;
    }

    double x = mu + z;
    // quadrature/rounding can land exactly on a bound; nudge inward
    if (x <= lower)
        x = std::nextafter(lower, upper);
    if (x >= upper)
        x = std::nextafter(upper, lower);
    return x;
}

} // namespace rankdyn

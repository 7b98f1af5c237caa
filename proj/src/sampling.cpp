#include "kdmc/sampling.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace kdmc
{
namespace
{
constexpr double roundoff_tolerance = 1e-14;

// Taylor coefficients from x^3 upward.
//   isotropic: (-1)^n (2 - n) / n!
//   rank one:  (-1)^n (2 n - 2^n) / n!
constexpr std::array<double, 8> isotropic_series{1.0 / 6,
                                                  -1.0 / 12,
                                                  1.0 / 40,
                                                  -1.0 / 180,
                                                  1.0 / 1008,
                                                  -1.0 / 6720,
                                                  1.0 / 51840,
                                                  -1.0 / 453600};
constexpr std::array<double, 8> rank_one_series{1.0 / 3,
                                                -1.0 / 3,
                                                11.0 / 60,
                                                -13.0 / 180,
                                                19.0 / 840,
                                                -1.0 / 168,
                                                247.0 / 181440,
                                                -251.0 / 907200};

template<std::size_t N>
double cubic_series(std::array<double, N> const& c, double x)
{
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
    {
        acc = acc * x + *it;
    }
    return acc * x * x * x;
}

// Clamp tiny negative roundoff; anything larger is a bug.
double clamp_roundoff(double value, double scale, char const* what)
{
    if (value >= 0)
    {
        return value;
    }
    if (-value <= roundoff_tolerance * scale)
    {
        return 0;
    }
    throw ConsistencyError(std::string("negative diffusive coefficient: ") + what);
}
}  // namespace

double exponential_from_uniform(double u, double rate)
{
    if (!(rate >= 0))
    {
        throw ParameterError("exponential rate must be non-negative");
    }
    if (rate == 0)
    {
        return std::numeric_limits<double>::infinity();
    }
    return -std::log(u) / rate;
}

double sample_exponential(RngStream& rng, double rate)
{
    if (!(rate >= 0))
    {
        throw ParameterError("exponential rate must be non-negative");
    }
    if (rate == 0)
    {
        return std::numeric_limits<double>::infinity();
    }
    return -std::log(rng.uniform()) / rate;
}

Vec2 sample_maxwellian(RngStream& rng, Maxwellian const& m)
{
    double const s = std::sqrt(m.temperature);
    double const xi1 = rng.normal();
    double const xi2 = rng.normal();
    return {m.drift.x + s * xi1, m.drift.y + s * xi2};
}

double temperature_from_mean_speed(double mean_speed)
{
    if (!(mean_speed >= 0))
    {
        throw ParameterError("mean speed must be non-negative");
    }
    return 2.0 / std::numbers::pi * mean_speed * mean_speed;
}

double mean_speed_from_temperature(double temperature)
{
    return std::sqrt(std::numbers::pi * temperature / 2);
}

Particle sample_source(RngStream& rng, SourceSpec const& src)
{
    Particle p;
    p.position = src.position;
    p.velocity = sample_maxwellian(rng, src.emission);
    return p;
}

namespace
{
struct Brackets
{
    double isotropic;
    double rank_one;
    double one_minus_e;  // 1 - e^{-x}
};

Brackets evaluate_brackets(double x)
{
    if (x < moments_series_threshold)
    {
        return {cubic_series(isotropic_series, x),
                cubic_series(rank_one_series, x),
                -std::expm1(-x)};
    }
    double const e = std::exp(-x);
    double const iso = 2 * e + x * (1 + e) - 2;
    double const r1 = 1 - 2 * x * e - e * e;
    return {clamp_roundoff(iso, 2 + x * (1 + e), "isotropic"),
            clamp_roundoff(r1, 1 + 2 * x * e, "rank-one"),
            1 - e};
}
}  // namespace

double isotropic_bracket(double x)
{
    return evaluate_brackets(x).isotropic;
}

double rank_one_bracket(double x)
{
    return evaluate_brackets(x).rank_one;
}

DiffusiveMoments
diffusive_moments(Vec2 v_next, Maxwellian const& m, double rate, double theta)
{
    if (!(rate > 0))
    {
        throw ParameterError("diffusive moments need a positive collision rate");
    }
    if (!(theta >= 0))
    {
        throw ParameterError("diffusive flight time must be non-negative");
    }
    DiffusiveMoments dm;
    dm.w = (v_next - m.drift) / rate;
    if (theta == 0)
    {
        return dm;
    }
    Brackets const br = evaluate_brackets(theta * rate);
    dm.mu = theta * m.drift + br.one_minus_e * dm.w;
    dm.a = 2 * m.temperature / (rate * rate) * br.isotropic;
    dm.b = br.rank_one;
    return dm;
}

Vec2 sample_diffusive_increment(RngStream& rng, DiffusiveMoments const& dm)
{
    double const xi1 = rng.normal();
    double const xi2 = rng.normal();
    double const minor = std::sqrt(dm.a);
    double const w2 = dm.w.x * dm.w.x + dm.w.y * dm.w.y;
    if (w2 == 0)
    {
        return {dm.mu.x + minor * xi1, dm.mu.y + minor * xi2};
    }
    // Principal axes of a I + b w w^T: w with variance a + b |w|^2, and its
    // normal with variance a
    double const inv_len = 1 / std::sqrt(w2);
    Vec2 const along = inv_len * dm.w;
    double const major = std::sqrt(dm.a + dm.b * w2);
    double const s1 = major * xi1;
    double const s2 = minor * xi2;
    return {dm.mu.x + s1 * along.x - s2 * along.y, dm.mu.y + s1 * along.y + s2 * along.x};
}

}  // namespace kdmc

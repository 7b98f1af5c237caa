#pragma once

#include "kdmc/core.hpp"
#include "kdmc/rng.hpp"

namespace kdmc
{
//---------------------------------------------------------------------------//
/*!
 * Factored normal law of a diffusive increment.
 *
 * The increment is N(mu, a I + b w w^T). Both coefficients are non-negative
 * so the covariance is positive semidefinite by construction and is never
 * formed as a matrix.
 */
struct DiffusiveMoments
{
    Vec2 mu{};    //!< Mean displacement [m]
    double a{0};  //!< Isotropic covariance coefficient [m^2]
    double b{0};  //!< Rank-one coefficient [-]
    Vec2 w{};     //!< (v_next - drift) / rate [m]
};

//---------------------------------------------------------------------------//
//! Point source emitting particles with Maxwellian velocities
struct SourceSpec
{
    Vec2 position{};
    Maxwellian emission{};
};

//---------------------------------------------------------------------------//
// Elementary kernels
//---------------------------------------------------------------------------//

// Inverse-CDF flight time for a given uniform deviate in (0, 1]
double exponential_from_uniform(double u, double rate);

// Flight time until the next collision; +inf when rate == 0
double sample_exponential(RngStream& rng, double rate);

Vec2 sample_maxwellian(RngStream& rng, Maxwellian const& m);

//! Temperature of a zero-drift 2D Maxwellian with the given mean speed
double temperature_from_mean_speed(double mean_speed);

//! Inverse of temperature_from_mean_speed: sqrt(pi T / 2)
double mean_speed_from_temperature(double temperature);

Particle sample_source(RngStream& rng, SourceSpec const& src);

//---------------------------------------------------------------------------//
// KDMC diffusive increment
//---------------------------------------------------------------------------//

//! Below this value of theta * rate the coefficient brackets use a series.
//! The closed forms still lose about 9 digits at the switch point.
inline constexpr double moments_series_threshold = 1e-2;

/*!
 * Bracket of the isotropic coefficient, 2 e^{-x} + x (1 + e^{-x}) - 2.
 *
 * Evaluated by its Taylor series below \c moments_series_threshold, where the
 * closed form cancels O(1) terms.
 */
double isotropic_bracket(double x);

//! Rank-one coefficient, 1 - 2 x e^{-x} - e^{-2x}
double rank_one_bracket(double x);

/*!
 * Mean and factored covariance of the position increment accumulated over a
 * diffusive flight of duration \c theta that starts with velocity \c v_next
 * in a BGK background with collision rate \c rate and Maxwellian \c m.
 *
 * With x = theta * rate and w = (v_next - u) / rate:
 *   mu = u theta + w (1 - e^{-x})
 *   a  = 2 T / rate^2 * (2 e^{-x} + x (1 + e^{-x}) - 2)
 *   b  = 1 - 2 x e^{-x} - e^{-2x}
 */
DiffusiveMoments
diffusive_moments(Vec2 v_next, Maxwellian const& m, double rate, double theta);

/*!
 * Draw from N(mu, a I + b w w^T) with two standard normals.
 *
 * The covariance is sampled along its principal axes: w / |w| with standard
 * deviation sqrt(a + b |w|^2) and the perpendicular direction with sqrt(a).
 */
Vec2 sample_diffusive_increment(RngStream& rng, DiffusiveMoments const& dm);

}  // namespace kdmc

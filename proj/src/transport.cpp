#include "kdmc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kdmc/sampling.hpp"

namespace kdmc
{
namespace
{
constexpr double inf = std::numeric_limits<double>::infinity();

// Relative slack (in units of dt) under which a diffusive step is considered
// to reach the end time exactly.
constexpr double end_time_snap = 1e-9;

// Diffusive increments draw from their own substream so that the sequence of
// flight times and post-collision velocities matches simulate_kinetic.
constexpr std::uint32_t diffusion_substream = 1;

double face_time(double coord, double vel, double upper)
{
    if (vel > 0)
    {
        return (upper - coord) / vel;
    }
    if (vel < 0)
    {
        return -coord / vel;
    }
    return inf;
}

Vec2 clamp_to_domain(Vec2 p, Domain const& domain)
{
    return {std::clamp(p.x, 0.0, domain.lx()), std::clamp(p.y, 0.0, domain.ly())};
}
}  // namespace

void StepConfig::validate() const
{
    if (!(dt > 0) || !std::isfinite(dt))
    {
        throw ParameterError("time step must be positive and finite");
    }
    if (!(t_end > 0) || !std::isfinite(t_end))
    {
        throw ParameterError("end time must be positive and finite");
    }
}

FlightResult kinetic_flight(Particle const& p, Vec2 v, double dtau, Domain const& domain)
{
    FlightResult result;
    result.endpoint = p.position + dtau * v;

    double const tx = face_time(p.position.x, v.x, domain.lx());
    double const ty = face_time(p.position.y, v.y, domain.ly());
    double const t_exit = std::min(tx, ty);

    if (t_exit <= dtau)
    {
        Vec2 hit;
        if (tx <= ty)
        {
            hit.x = v.x > 0 ? domain.lx() : 0.0;
            hit.y = p.position.y + tx * v.y;
        }
        else
        {
            hit.x = p.position.x + ty * v.x;
            hit.y = v.y > 0 ? domain.ly() : 0.0;
        }
        result.absorbed = true;
        result.absorption_point = clamp_to_domain(hit, domain);
    }
    else if (!domain.contains(result.endpoint))
    {
        // Roundoff put an interior-by-parameter endpoint on the boundary
        result.absorbed = true;
        result.absorption_point = clamp_to_domain(result.endpoint, domain);
    }
    return result;
}

double diffusive_time(double tau, double dt)
{
    // Remainder of tau / dt via fma; exact when the quotient is right, and
    // the quotient is corrected by one where division rounding misses it
    double const q = std::floor(tau / dt);
    double r = std::fma(-q, dt, tau);
    if (r < 0)
    {
        r += dt;
    }
    else if (r >= dt)
    {
        r -= dt;
    }
    return dt - r;
}

TrajectoryOutcome simulate_kinetic(Particle p,
                                   Background const& bg,
                                   Domain const& domain,
                                   StepConfig const& cfg,
                                   RngStream& rng)
{
    TrajectoryOutcome out;
    while (true)
    {
        BackgroundFields const here = bg.lookup(p.position);
        double const tau = sample_exponential(rng, here.rate);
        double const remaining = cfg.t_end - p.time;
        bool const last = tau >= remaining;

        FlightResult const flight
            = kinetic_flight(p, p.velocity, last ? remaining : tau, domain);
        ++out.step_count;
        if (flight.absorbed)
        {
            out.final_position = *flight.absorption_point;
            out.status = TrajectoryStatus::absorbed;
            return out;
        }
        p.position = flight.endpoint;
        if (last)
        {
            out.final_position = p.position;
            return out;
        }
        p.time += tau;
        p.velocity = sample_maxwellian(rng, bg.lookup(p.position).maxwellian);
        ++out.collision_count;
    }
}

TrajectoryOutcome simulate_kdmc(Particle p,
                                Background const& bg,
                                Domain const& domain,
                                StepConfig const& cfg,
                                RngStream& rng)
{
    TrajectoryOutcome out;
    RngStream diffusion_rng = rng.substream(diffusion_substream);
    while (true)
    {
        Vec2 const x_prev = p.position;
        BackgroundFields const here = bg.lookup(x_prev);
        double const tau = sample_exponential(rng, here.rate);
        double const remaining = cfg.t_end - p.time;

        // Kinetic part: truncated at the end time without a collision
        bool const last = tau >= remaining;
        FlightResult const flight
            = kinetic_flight(p, p.velocity, last ? remaining : tau, domain);
        ++out.step_count;
        if (flight.absorbed)
        {
            out.final_position = *flight.absorption_point;
            out.status = TrajectoryStatus::absorbed;
            return out;
        }
        p.position = flight.endpoint;
        if (last)
        {
            out.final_position = p.position;
            return out;
        }
        p.time += tau;

        // Collision, then diffusion until the next multiple of dt
        Vec2 const v_next = sample_maxwellian(rng, bg.lookup(p.position).maxwellian);
        ++out.collision_count;

        double const theta_max = cfg.t_end - p.time;
        double theta = diffusive_time(tau, cfg.dt);
        bool const reaches_end = theta >= theta_max - end_time_snap * cfg.dt;
        if (reaches_end)
        {
            theta = std::max(theta_max, 0.0);
        }

        BackgroundFields const mid = midpoint_fields(bg, x_prev, p.position, v_next, theta);
        if (mid.rate > 0)
        {
            DiffusiveMoments const dm
                = diffusive_moments(v_next, mid.maxwellian, mid.rate, theta);
            p.position += sample_diffusive_increment(diffusion_rng, dm);
            if (!domain.contains(p.position))
            {
                out.final_position = p.position;
                out.status = TrajectoryStatus::absorbed;
                return out;
            }
        }
        else
        {
            // Collisionless background: the increment is a straight flight
            FlightResult const ballistic = kinetic_flight(p, v_next, theta, domain);
            if (ballistic.absorbed)
            {
                out.final_position = *ballistic.absorption_point;
                out.status = TrajectoryStatus::absorbed;
                return out;
            }
            p.position = ballistic.endpoint;
        }
        p.velocity = v_next;

        if (reaches_end)
        {
            out.final_position = p.position;
            return out;
        }
        p.time += theta;
    }
}

BackgroundFields midpoint_fields(Background const& bg,
                                 Vec2 x_prev,
                                 Vec2 x_kin,
                                 Vec2 v_next,
                                 double theta)
{
    if (bg.is_homogeneous() || theta == 0)
    {
        return bg.lookup(x_kin);
    }
    BackgroundFields const start = bg.lookup(x_prev);
    Vec2 const mean_step
        = start.rate > 0
              ? diffusive_moments(v_next, start.maxwellian, start.rate, theta).mu
              : theta * v_next;
    Vec2 const estimated_end = x_kin + mean_step;
    return bg.lookup(0.5 * (x_kin + estimated_end));
}

}  // namespace kdmc

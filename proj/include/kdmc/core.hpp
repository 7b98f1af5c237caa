#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace kdmc
{
//---------------------------------------------------------------------------//
// Errors
//---------------------------------------------------------------------------//
//! An argument violates an operation's precondition.
class ParameterError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Internal numerical consistency check failed.
class ConsistencyError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

//---------------------------------------------------------------------------//
// Vec2
//---------------------------------------------------------------------------//
struct Vec2
{
    double x{0};
    double y{0};

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
    friend constexpr Vec2 operator/(Vec2 v, double s) { return {v.x / s, v.y / s}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;

    constexpr Vec2& operator+=(Vec2 o)
    {
        x += o.x;
        y += o.y;
        return *this;
    }
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

//---------------------------------------------------------------------------//
/*!
 * Isotropic velocity distribution with per-component variance \c temperature
 * (m^2/s^2) and mean \c drift.
 */
struct Maxwellian
{
    double temperature{0};
    Vec2 drift{};

    friend bool operator==(Maxwellian const&, Maxwellian const&) = default;
};

//---------------------------------------------------------------------------//
struct Particle
{
    Vec2 position{};
    Vec2 velocity{};
    double time{0};
    double weight{1};
    bool alive{true};
};

//---------------------------------------------------------------------------//
/*!
 * Rectangle [0,lx] x [0,ly] with absorbing (ionizing) edges.
 */
class Domain
{
  public:
    Domain() = default;
    Domain(double lx, double ly) : lx_(lx), ly_(ly)
    {
        if (!(lx > 0) || !(ly > 0) || !std::isfinite(lx) || !std::isfinite(ly))
        {
            throw ParameterError("domain extents must be positive and finite");
        }
    }

    double lx() const { return lx_; }
    double ly() const { return ly_; }

    //! Strictly inside the open rectangle
    bool contains(Vec2 p) const
    {
        return p.x > 0 && p.x < lx_ && p.y > 0 && p.y < ly_;
    }

    Vec2 center() const { return {0.5 * lx_, 0.5 * ly_}; }

  private:
    double lx_{1};
    double ly_{1};
};

}  // namespace kdmc

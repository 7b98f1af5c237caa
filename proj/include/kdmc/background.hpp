#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "kdmc/core.hpp"

namespace kdmc
{
//---------------------------------------------------------------------------//
//! Local collision fields: charge-exchange rate (1/s) and the Maxwellian
struct BackgroundFields
{
    double rate{0};
    Maxwellian maxwellian{};

    friend bool operator==(BackgroundFields const&, BackgroundFields const&) = default;
};

//---------------------------------------------------------------------------//
struct HomogeneousBackground
{
    BackgroundFields fields;
};

//---------------------------------------------------------------------------//
/*!
 * Piecewise-constant fields on a uniform nx x ny grid over a domain.
 *
 * Cells are stored row-major with x fastest: cell (i, j) is at i + nx * j.
 * Positions on a cell face resolve to the lower-index cell; positions outside
 * the grid clamp to the nearest cell.
 */
class GridBackground
{
  public:
    GridBackground(Domain const& domain,
                   std::size_t nx,
                   std::size_t ny,
                   std::vector<BackgroundFields> cells);

    BackgroundFields const& lookup(Vec2 position) const;

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }

  private:
    std::size_t nx_;
    std::size_t ny_;
    double inv_dx_;
    double inv_dy_;
    std::vector<BackgroundFields> cells_;
};

//---------------------------------------------------------------------------//
/*!
 * Spatial field of (rate, Maxwellian), homogeneous or grid based.
 */
class Background
{
  public:
    explicit Background(HomogeneousBackground homogeneous);
    explicit Background(GridBackground grid);

    //! Uniform fields everywhere
    static Background homogeneous(double rate, Maxwellian maxwellian);

    BackgroundFields lookup(Vec2 position) const
    {
        if (auto const* h = std::get_if<HomogeneousBackground>(&storage_))
        {
            return h->fields;
        }
        return std::get<GridBackground>(storage_).lookup(position);
    }

    bool is_homogeneous() const
    {
        return std::holds_alternative<HomogeneousBackground>(storage_);
    }

  private:
    std::variant<HomogeneousBackground, GridBackground> storage_;
};

}  // namespace kdmc

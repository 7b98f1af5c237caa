#include "kdmc/background.hpp"

#include <cmath>
#include <utility>

namespace kdmc
{
namespace
{
void validate(BackgroundFields const& f)
{
    if (!(f.rate >= 0) || !std::isfinite(f.rate))
    {
        throw ParameterError("collision rate must be finite and non-negative");
    }
    if (!(f.maxwellian.temperature >= 0) || !std::isfinite(f.maxwellian.temperature))
    {
        throw ParameterError("temperature must be finite and non-negative");
    }
    if (!is_finite(f.maxwellian.drift))
    {
        throw ParameterError("drift velocity must be finite");
    }
}

// Lower-index tie-breaking on faces: a coordinate exactly at k * h maps to
// cell k - 1 (for k >= 1).
std::size_t cell_index(double coord, double inv_h, std::size_t n)
{
    double const s = coord * inv_h;
    if (!(s > 0))
    {
        return 0;
    }
    double const c = std::ceil(s) - 1;
    if (c >= static_cast<double>(n - 1))
    {
        return n - 1;
    }
    return static_cast<std::size_t>(c);
}
}  // namespace

GridBackground::GridBackground(Domain const& domain,
                               std::size_t nx,
                               std::size_t ny,
                               std::vector<BackgroundFields> cells)
    : nx_(nx)
    , ny_(ny)
    , inv_dx_(static_cast<double>(nx) / domain.lx())
    , inv_dy_(static_cast<double>(ny) / domain.ly())
    , cells_(std::move(cells))
{
    if (nx == 0 || ny == 0)
    {
        throw ParameterError("background grid needs at least one cell");
    }
    if (cells_.size() != nx * ny)
    {
        throw ParameterError("background grid cell count does not match nx*ny");
    }
    for (auto const& c : cells_)
    {
        validate(c);
    }
}

BackgroundFields const& GridBackground::lookup(Vec2 position) const
{
    std::size_t const i = cell_index(position.x, inv_dx_, nx_);
    std::size_t const j = cell_index(position.y, inv_dy_, ny_);
    return cells_[i + nx_ * j];
}

Background::Background(HomogeneousBackground homogeneous)
    : storage_(std::move(homogeneous))
{
    validate(std::get<HomogeneousBackground>(storage_).fields);
}

Background::Background(GridBackground grid) : storage_(std::move(grid)) {}

Background Background::homogeneous(double rate, Maxwellian maxwellian)
{
    return Background(HomogeneousBackground{BackgroundFields{rate, maxwellian}});
}

}  // namespace kdmc

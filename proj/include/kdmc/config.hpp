#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "kdmc/harness.hpp"

namespace kdmc
{
//---------------------------------------------------------------------------//
//! Malformed configuration input, reported with its source location
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(std::string const& source, std::size_t line, std::string const& what);

    std::string const& source() const { return source_; }
    std::size_t line() const { return line_; }

  private:
    std::string source_;
    std::size_t line_;
};

//---------------------------------------------------------------------------//
/*!
 * Settings read from a sectioned key=value file.
 *
 * \code
 * [simulation]
 * mode = kdmc
 * particles = 10000000
 * dt = 0.0625
 * t_end = 1
 * [source]
 * position = 0.5, 0.5
 * mean_speed = 0.15625
 * [background]
 * rate = 0.78125
 * mean_speed = 0.013847
 * \endcode
 *
 * Sections are [simulation], [source], [background], [tally] and [domain].
 * Only keys that appear are set; everything else keeps the base
 * configuration's value.
 */
struct ConfigFile
{
    std::optional<TransportMode> mode;
    std::optional<std::uint64_t> particles;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> block_size;
    std::optional<double> dt;
    std::optional<double> t_end;

    std::optional<Vec2> source_position;
    std::optional<double> source_mean_speed;

    std::optional<double> background_rate;
    std::optional<double> background_mean_speed;
    std::optional<Vec2> background_drift;

    std::optional<std::size_t> tally_nx;
    std::optional<std::size_t> tally_ny;

    std::optional<double> domain_lx;
    std::optional<double> domain_ly;
};

ConfigFile parse_config(std::istream& is, std::string const& source_name);
ConfigFile parse_config_file(std::string const& path);

//! Overlay file settings onto a base configuration and validate the result
RunConfig apply_config(ConfigFile const& file, RunConfig base);

}  // namespace kdmc

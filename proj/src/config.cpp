#include "kdmc/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <string_view>

#include <fmt/format.h>

namespace kdmc
{
ConfigError::ConfigError(std::string const& source,
                         std::size_t line,
                         std::string const& what)
    : std::runtime_error(fmt::format("{}:{}: {}", source, line, what))
    , source_(source)
    , line_(line)
{
}

namespace
{
std::string_view trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Parsing failures throw std::invalid_argument with a message; the caller
// attaches the file location.
template<class T>
T parse_integer(std::string_view s)
{
    T value{};
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
    {
        throw std::invalid_argument(fmt::format("'{}' is not a non-negative integer", s));
    }
    return value;
}

double parse_real(std::string_view s)
{
    std::string const str(s);
    std::size_t used = 0;
    double value = 0;
    try
    {
        value = std::stod(str, &used);
    }
    catch (std::exception const&)
    {
        used = 0;
    }
    if (used == 0 || used != str.size())
    {
        throw std::invalid_argument(fmt::format("'{}' is not a number", s));
    }
    return value;
}

Vec2 parse_vec2(std::string_view s)
{
    std::string str(s);
    for (char& c : str)
    {
        if (c == ',')
        {
            c = ' ';
        }
    }
    std::string_view rest = trim(str);
    auto const split = rest.find_first_of(" \t");
    if (split == std::string_view::npos)
    {
        throw std::invalid_argument(fmt::format("'{}' is not a pair of numbers", s));
    }
    return {parse_real(trim(rest.substr(0, split))), parse_real(trim(rest.substr(split)))};
}

using Setter = std::function<void(ConfigFile&, std::string_view)>;

std::map<std::string, Setter, std::less<>> const& setters()
{
    static std::map<std::string, Setter, std::less<>> const table{
        {"simulation.mode",
         [](ConfigFile& c, std::string_view v) {
             c.mode = transport_mode_from_string(std::string(v));
         }},
        {"simulation.particles",
         [](ConfigFile& c, std::string_view v) {
             c.particles = parse_integer<std::uint64_t>(v);
         }},
        {"simulation.seed",
         [](ConfigFile& c, std::string_view v) { c.seed = parse_integer<std::uint64_t>(v); }},
        {"simulation.workers",
         [](ConfigFile& c, std::string_view v) { c.workers = parse_integer<unsigned>(v); }},
        {"simulation.block_size",
         [](ConfigFile& c, std::string_view v) {
             c.block_size = parse_integer<std::uint64_t>(v);
         }},
        {"simulation.dt", [](ConfigFile& c, std::string_view v) { c.dt = parse_real(v); }},
        {"simulation.t_end",
         [](ConfigFile& c, std::string_view v) { c.t_end = parse_real(v); }},
        {"source.position",
         [](ConfigFile& c, std::string_view v) { c.source_position = parse_vec2(v); }},
        {"source.mean_speed",
         [](ConfigFile& c, std::string_view v) { c.source_mean_speed = parse_real(v); }},
        {"background.rate",
         [](ConfigFile& c, std::string_view v) { c.background_rate = parse_real(v); }},
        {"background.mean_speed",
         [](ConfigFile& c, std::string_view v) { c.background_mean_speed = parse_real(v); }},
        {"background.drift",
         [](ConfigFile& c, std::string_view v) { c.background_drift = parse_vec2(v); }},
        {"tally.nx",
         [](ConfigFile& c, std::string_view v) { c.tally_nx = parse_integer<std::size_t>(v); }},
        {"tally.ny",
         [](ConfigFile& c, std::string_view v) { c.tally_ny = parse_integer<std::size_t>(v); }},
        {"domain.lx", [](ConfigFile& c, std::string_view v) { c.domain_lx = parse_real(v); }},
        {"domain.ly", [](ConfigFile& c, std::string_view v) { c.domain_ly = parse_real(v); }},
    };
    return table;
}
}  // namespace

ConfigFile parse_config(std::istream& is, std::string const& source_name)
{
    static std::set<std::string, std::less<>> const sections{
        "simulation", "source", "background", "tally", "domain"};

    ConfigFile file;
    std::set<std::string> seen;
    std::string section;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(is, raw))
    {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';')
        {
            continue;
        }
        if (line.front() == '[')
        {
            if (line.back() != ']')
            {
                throw ConfigError(source_name, line_no, "unterminated section header");
            }
            std::string_view const name = trim(line.substr(1, line.size() - 2));
            if (!sections.contains(name))
            {
                throw ConfigError(
                    source_name, line_no, fmt::format("unknown section [{}]", name));
            }
            section = std::string(name);
            continue;
        }

        auto const eq = line.find('=');
        if (eq == std::string_view::npos)
        {
            throw ConfigError(source_name, line_no, "expected 'key = value'");
        }
        std::string_view const key = trim(line.substr(0, eq));
        std::string_view const value = trim(line.substr(eq + 1));
        if (section.empty())
        {
            throw ConfigError(source_name,
                              line_no,
                              fmt::format("key '{}' appears before any section", key));
        }
        std::string const full_key = section + "." + std::string(key);
        auto const it = setters().find(full_key);
        if (it == setters().end())
        {
            throw ConfigError(source_name,
                              line_no,
                              fmt::format("unknown key '{}' in [{}]", key, section));
        }
        if (!seen.insert(full_key).second)
        {
            throw ConfigError(source_name, line_no, fmt::format("duplicate key '{}'", full_key));
        }
        if (value.empty())
        {
            throw ConfigError(source_name, line_no, fmt::format("missing value for '{}'", key));
        }
        try
        {
            it->second(file, value);
        }
        catch (std::invalid_argument const& e)
        {
            throw ConfigError(source_name, line_no, e.what());
        }
    }
    return file;
}

ConfigFile parse_config_file(std::string const& path)
{
    std::ifstream is(path);
    if (!is)
    {
        throw ConfigError(path, 0, "cannot open configuration file");
    }
    return parse_config(is, path);
}

RunConfig apply_config(ConfigFile const& file, RunConfig base)
{
    RunConfig cfg = std::move(base);
    if (file.mode) cfg.mode = *file.mode;
    if (file.particles) cfg.particles = *file.particles;
    if (file.seed) cfg.seed = *file.seed;
    if (file.workers) cfg.workers = *file.workers;
    if (file.block_size) cfg.block_size = *file.block_size;
    if (file.dt) cfg.step.dt = *file.dt;
    if (file.t_end) cfg.step.t_end = *file.t_end;
    if (file.tally_nx) cfg.nx = *file.tally_nx;
    if (file.tally_ny) cfg.ny = *file.tally_ny;

    if (file.domain_lx || file.domain_ly)
    {
        bool const centered = cfg.source.position == cfg.domain.center();
        cfg.domain = Domain(file.domain_lx.value_or(cfg.domain.lx()),
                            file.domain_ly.value_or(cfg.domain.ly()));
        if (centered)
        {
            cfg.source.position = cfg.domain.center();
        }
    }
    if (file.source_position) cfg.source.position = *file.source_position;
    if (file.source_mean_speed)
    {
        cfg.source.emission.temperature = temperature_from_mean_speed(*file.source_mean_speed);
    }

    if (file.background_rate || file.background_mean_speed || file.background_drift)
    {
        if (!cfg.background.is_homogeneous())
        {
            throw ParameterError("background keys only apply to homogeneous backgrounds");
        }
        BackgroundFields f = cfg.background.lookup(cfg.domain.center());
        if (file.background_rate) f.rate = *file.background_rate;
        if (file.background_mean_speed)
        {
            f.maxwellian.temperature = temperature_from_mean_speed(*file.background_mean_speed);
        }
        if (file.background_drift) f.maxwellian.drift = *file.background_drift;
        cfg.background = Background::homogeneous(f.rate, f.maxwellian);
    }
    cfg.validate();
    return cfg;
}

}  // namespace kdmc

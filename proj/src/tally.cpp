#include "kdmc/tally.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include <fmt/format.h>

namespace kdmc
{
Histogram2D::Histogram2D(std::size_t nx, std::size_t ny, Domain const& domain)
    : nx_(nx), ny_(ny), domain_(domain), mass_(nx * ny, 0.0)
{
    if (nx == 0 || ny == 0)
    {
        throw ParameterError("histogram needs at least one cell per axis");
    }
}

std::size_t Histogram2D::bin(double coord, double extent, std::size_t n)
{
    double const s = std::floor(static_cast<double>(n) * coord / extent);
    if (!(s > 0))
    {
        return 0;
    }
    if (s >= static_cast<double>(n - 1))
    {
        return n - 1;
    }
    return static_cast<std::size_t>(s);
}

void Histogram2D::deposit(TrajectoryOutcome const& outcome, double weight)
{
    if (!(weight > 0))
    {
        throw ParameterError("deposit weight must be positive");
    }
    if (outcome.status == TrajectoryStatus::absorbed)
    {
        absorbed_mass_ += weight;
    }
    else
    {
        std::size_t const i = bin(outcome.final_position.x, domain_.lx(), nx_);
        std::size_t const j = bin(outcome.final_position.y, domain_.ly(), ny_);
        mass_[i + nx_ * j] += weight;
    }
    total_mass_ += weight;
}

void Histogram2D::merge(Histogram2D const& other)
{
    if (other.nx_ != nx_ || other.ny_ != ny_)
    {
        throw ParameterError("cannot merge histograms of different shapes");
    }
    for (std::size_t k = 0; k < mass_.size(); ++k)
    {
        mass_[k] += other.mass_[k];
    }
    absorbed_mass_ += other.absorbed_mass_;
    total_mass_ += other.total_mass_;
}

double Histogram2D::deposited_mass() const
{
    double sum = 0;
    for (double m : mass_)
    {
        sum += m;
    }
    return sum;
}

Histogram2D Histogram2D::from_values(std::size_t nx,
                                     std::size_t ny,
                                     Domain const& domain,
                                     std::vector<double> mass,
                                     double absorbed_mass,
                                     double total_mass)
{
    Histogram2D h(nx, ny, domain);
    if (mass.size() != nx * ny)
    {
        throw ParameterError("histogram values do not match nx*ny");
    }
    h.mass_ = std::move(mass);
    h.absorbed_mass_ = absorbed_mass;
    h.total_mass_ = total_mass;
    return h;
}

//---------------------------------------------------------------------------//
Histogram2D normalize(Histogram2D const& h)
{
    if (!(h.total_mass() > 0))
    {
        throw ParameterError("cannot normalize an empty tally");
    }
    double const inv = 1.0 / h.total_mass();
    std::vector<double> mass = h.mass();
    for (double& m : mass)
    {
        m *= inv;
    }
    return Histogram2D::from_values(
        h.nx(), h.ny(), h.domain(), std::move(mass), h.absorbed_mass() * inv, 1.0);
}

Profile1D reduce_x_average(Histogram2D const& h)
{
    Profile1D p;
    p.values.assign(h.ny(), 0.0);
    p.coordinates.resize(h.ny());
    double const dy = h.domain().ly() / static_cast<double>(h.ny());
    for (std::size_t j = 0; j < h.ny(); ++j)
    {
        double sum = 0;
        for (std::size_t i = 0; i < h.nx(); ++i)
        {
            sum += h(i, j);
        }
        p.values[j] = sum / static_cast<double>(h.nx());
        p.coordinates[j] = (static_cast<double>(j) + 0.5) * dy;
    }
    return p;
}

Profile1D fold_about_center(Profile1D const& p)
{
    std::size_t const n = p.size();
    if (n == 0 || n % 2 != 0)
    {
        throw ParameterError("folding needs a non-empty profile of even length");
    }
    if (p.coordinates.size() != n)
    {
        throw ParameterError("profile coordinates do not match its values");
    }
    std::size_t const half = n / 2;
    double const center = 0.5 * (p.coordinates[half - 1] + p.coordinates[half]);

    Profile1D folded;
    folded.values.resize(half);
    folded.coordinates.resize(half);
    for (std::size_t i = 0; i < half; ++i)
    {
        folded.values[i] = 0.5 * (p.values[half - 1 - i] + p.values[half + i]);
        folded.coordinates[i] = p.coordinates[half + i] - center;
    }
    return folded;
}

double l2_diff(Profile1D const& a, Profile1D const& b)
{
    if (a.size() != b.size())
    {
        throw ParameterError("profile lengths differ");
    }
    double sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        double const d = a.values[i] - b.values[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

Profile1D pointwise_diff(Profile1D const& a, Profile1D const& b)
{
    if (a.size() != b.size())
    {
        throw ParameterError("profile lengths differ");
    }
    Profile1D d = a;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        d.values[i] = a.values[i] - b.values[i];
    }
    return d;
}

Histogram2D pointwise_diff(Histogram2D const& a, Histogram2D const& b)
{
    if (a.nx() != b.nx() || a.ny() != b.ny())
    {
        throw ParameterError("histogram shapes differ");
    }
    std::vector<double> mass = a.mass();
    for (std::size_t k = 0; k < mass.size(); ++k)
    {
        mass[k] -= b.mass()[k];
    }
    return Histogram2D::from_values(a.nx(),
                                    a.ny(),
                                    a.domain(),
                                    std::move(mass),
                                    a.absorbed_mass() - b.absorbed_mass(),
                                    a.total_mass() - b.total_mass());
}

Profile1D folded_profile(Histogram2D const& h)
{
    return fold_about_center(reduce_x_average(normalize(h)));
}

//---------------------------------------------------------------------------//
std::string format_value(double v)
{
    return fmt::format("{:.17g}", v);
}

void write_histogram(std::ostream& os, Histogram2D const& h)
{
    double const scale = h.total_mass() > 0 ? 1.0 / h.total_mass() : 1.0;
    std::string out = fmt::format(
        "{},{},{}\n", h.nx(), h.ny(), format_value(h.absorbed_mass() * scale));
    for (std::size_t j = 0; j < h.ny(); ++j)
    {
        for (std::size_t i = 0; i < h.nx(); ++i)
        {
            if (i > 0)
            {
                out += ',';
            }
            out += format_value(h(i, j) * scale);
        }
        out += '\n';
    }
    os << out;
}

std::string histogram_to_string(Histogram2D const& h)
{
    std::ostringstream os;
    write_histogram(os, h);
    return os.str();
}

void write_histogram(std::string const& path, Histogram2D const& h)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
    {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_histogram(os, h);
}

namespace
{
std::vector<std::string> split_csv(std::string const& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
    {
        fields.push_back(field);
    }
    return fields;
}

double parse_double(std::string const& s, std::size_t line_no)
{
    try
    {
        std::size_t used = 0;
        double const v = std::stod(s, &used);
        if (used != s.size() && s.find_first_not_of(" \t\r", used) != std::string::npos)
        {
            throw std::invalid_argument(s);
        }
        return v;
    }
    catch (std::logic_error const&)
    {
        throw ParameterError(
            fmt::format("histogram line {}: invalid number '{}'", line_no, s));
    }
}
}  // namespace

Histogram2D read_histogram(std::istream& is, Domain const& domain)
{
    std::string line;
    if (!std::getline(is, line))
    {
        throw ParameterError("histogram file is empty");
    }
    auto const header = split_csv(line);
    if (header.size() != 3)
    {
        throw ParameterError("histogram header must be 'nx,ny,absorbed_fraction'");
    }
    auto const nx = static_cast<std::size_t>(parse_double(header[0], 1));
    auto const ny = static_cast<std::size_t>(parse_double(header[1], 1));
    double const absorbed = parse_double(header[2], 1);
    if (nx == 0 || ny == 0)
    {
        throw ParameterError("histogram header has zero cells");
    }

    std::vector<double> mass(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
    {
        if (!std::getline(is, line))
        {
            throw ParameterError(
                fmt::format("histogram has {} rows, expected {}", j, ny));
        }
        auto const fields = split_csv(line);
        if (fields.size() != nx)
        {
            throw ParameterError(fmt::format(
                "histogram line {}: {} values, expected {}", j + 2, fields.size(), nx));
        }
        for (std::size_t i = 0; i < nx; ++i)
        {
            mass[i + nx * j] = parse_double(fields[i], j + 2);
        }
    }
    return Histogram2D::from_values(nx, ny, domain, std::move(mass), absorbed, 1.0);
}

Histogram2D read_histogram_file(std::string const& path, Domain const& domain)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
    {
        throw ParameterError("cannot open histogram file " + path);
    }
    return read_histogram(is, domain);
}

void write_profile(std::ostream& os, Profile1D const& p)
{
    std::string out = "x,value\n";
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        out += fmt::format("{},{}\n", format_value(p.coordinates[i]), format_value(p.values[i]));
    }
    os << out;
}

void write_profile(std::string const& path, Profile1D const& p)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
    {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_profile(os, p);
}

}  // namespace kdmc

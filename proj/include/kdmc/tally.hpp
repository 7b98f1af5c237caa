#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "kdmc/core.hpp"
#include "kdmc/transport.hpp"

namespace kdmc
{
//---------------------------------------------------------------------------//
/*!
 * Final-position histogram on a uniform nx x ny grid over the domain.
 *
 * Masses are accumulated in double precision; unit-weight deposits stay
 * exact integers up to 2^53, so merges are order independent and
 * sum(mass) + absorbed_mass == total_mass holds exactly.
 *
 * Cell (i, j) is stored at i + nx * j.
 */
class Histogram2D
{
  public:
    Histogram2D(std::size_t nx, std::size_t ny, Domain const& domain);

    void deposit(TrajectoryOutcome const& outcome, double weight = 1.0);

    //! Add another histogram of identical shape
    void merge(Histogram2D const& other);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    Domain const& domain() const { return domain_; }

    double operator()(std::size_t i, std::size_t j) const { return mass_[i + nx_ * j]; }
    double& operator()(std::size_t i, std::size_t j) { return mass_[i + nx_ * j]; }

    std::vector<double> const& mass() const { return mass_; }
    double absorbed_mass() const { return absorbed_mass_; }
    double total_mass() const { return total_mass_; }
    double deposited_mass() const;

    //! Cell index along one axis with the far-edge clamp
    static std::size_t bin(double coord, double extent, std::size_t n);

    //! Construct from already reduced values (for file input and tests)
    static Histogram2D from_values(std::size_t nx,
                                   std::size_t ny,
                                   Domain const& domain,
                                   std::vector<double> mass,
                                   double absorbed_mass,
                                   double total_mass);

  private:
    std::size_t nx_;
    std::size_t ny_;
    Domain domain_;
    std::vector<double> mass_;
    double absorbed_mass_{0};
    double total_mass_{0};
};

//---------------------------------------------------------------------------//
//! One-dimensional profile with cell-center coordinates
struct Profile1D
{
    std::vector<double> coordinates;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

//---------------------------------------------------------------------------//
// Reduction pipeline
//---------------------------------------------------------------------------//

// Divide all masses by the injected mass; throws if the tally is empty
Histogram2D normalize(Histogram2D const& h);

//! Average over x: profile[j] = (1/nx) sum_i mass(i, j)
Profile1D reduce_x_average(Histogram2D const& h);

/*!
 * Mirror an even-length profile about its center and average both halves.
 *
 * folded[i] = (p[n/2 - 1 - i] + p[n/2 + i]) / 2, at distance from center
 * (i + 0.5) * h where h is the cell width of the input profile.
 */
Profile1D fold_about_center(Profile1D const& p);

//! Euclidean norm of the difference
double l2_diff(Profile1D const& a, Profile1D const& b);

//! a - b (reference minus approximation)
Profile1D pointwise_diff(Profile1D const& a, Profile1D const& b);
Histogram2D pointwise_diff(Histogram2D const& a, Histogram2D const& b);

//! normalize -> x-average -> fold
Profile1D folded_profile(Histogram2D const& h);

//---------------------------------------------------------------------------//
// File formats
//---------------------------------------------------------------------------//

/*!
 * Write a histogram: header "nx,ny,absorbed_fraction" then ny rows of nx
 * comma-separated normalized values. Values use 17 significant digits.
 *
 * Raw histograms are normalized first. Pointwise-difference histograms (whose
 * total mass is zero) are written as is.
 */
void write_histogram(std::ostream& os, Histogram2D const& h);
void write_histogram(std::string const& path, Histogram2D const& h);
std::string histogram_to_string(Histogram2D const& h);

//! Read a histogram file; the result is normalized (total mass 1)
Histogram2D read_histogram(std::istream& is, Domain const& domain = {});
Histogram2D read_histogram_file(std::string const& path, Domain const& domain = {});

//! Profile file: header "x,value" then one row per cell
void write_profile(std::ostream& os, Profile1D const& p);
void write_profile(std::string const& path, Profile1D const& p);

//! Format a double with 17 significant digits
std::string format_value(double v);

}  // namespace kdmc

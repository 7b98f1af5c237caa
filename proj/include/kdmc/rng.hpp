#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include <boost/random/normal_distribution.hpp>

namespace kdmc
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
 *
 * Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits. The
 * mapping is stateless, so any block of any stream is addressable in O(1).
 */
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key)
    {
        ctr = round(ctr, key);
        for (int r = 1; r < 10; ++r)
        {
            key[0] += weyl_w0;
            key[1] += weyl_w1;
            ctr = round(ctr, key);
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t m0 = 0xD2511F53u;
    static constexpr std::uint32_t m1 = 0xCD9E8D57u;
    static constexpr std::uint32_t weyl_w0 = 0x9E3779B9u;
    static constexpr std::uint32_t weyl_w1 = 0xBB67AE85u;

    static constexpr Counter round(Counter const& ctr, Key const& key)
    {
        std::uint64_t const p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        std::uint64_t const p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        return {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                static_cast<std::uint32_t>(p0)};
    }
};

//---------------------------------------------------------------------------//
/*!
 * Deterministic random stream for a single particle history.
 *
 * The Philox key holds the run seed and the high half of the counter holds
 * the particle index. The low half is split into a 32-bit substream id and a
 * 32-bit block counter; each block yields two 64-bit words, so a substream
 * supplies 2^33 words before wrapping.
 *
 * Substreams let different consumers of one particle history draw
 * independently: the transport integrators take collision times and
 * velocities from substream 0 and diffusive increments from substream 1, so
 * kinetic and KDMC runs with the same seed share their collision sequences.
 *
 * Satisfies UniformRandomBitGenerator. Normal deviates use Boost's ziggurat
 * sampler. A stream must not be shared between threads.
 */
class RngStream
{
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t particle_index)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
        , index_lo_(static_cast<std::uint32_t>(particle_index))
        , index_hi_(static_cast<std::uint32_t>(particle_index >> 32))
    {
    }

    //! Independent stream for the same particle, starting at its first block
    RngStream substream(std::uint32_t id) const
    {
        RngStream s(*this);
        s.substream_ = id;
        s.block_ = 0;
        s.has_spare_ = false;
        return s;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        auto const out = Philox4x32::apply(
            {block_,
             substream_,
             index_lo_,
             index_hi_},
            key_);
        ++block_;
        spare_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        has_spare_ = true;
        return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    }

    //! Uniform deviate on (0, 1]
    double uniform()
    {
        constexpr double scale = 0x1.0p-53;
        return static_cast<double>(((*this)() >> 11) + 1) * scale;
    }

    //! Standard normal deviate
    double normal() { return normal_(*this); }

  private:
    Philox4x32::Key key_;
    std::uint32_t index_lo_;
    std::uint32_t index_hi_;
    std::uint32_t substream_{0};
    std::uint32_t block_{0};
    std::uint64_t spare_{0};
    bool has_spare_{false};
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

//! Stream for particle \c particle_index of the run seeded by \c seed
inline RngStream derive_stream(std::uint64_t seed, std::uint64_t particle_index)
{
    return RngStream(seed, particle_index);
}

}  // namespace kdmc

#include "kdmc/rng.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

using namespace kdmc;

namespace
{
std::vector<std::uint64_t> draw(RngStream rng, int n)
{
    std::vector<std::uint64_t> out;
    for (int i = 0; i < n; ++i)
    {
        out.push_back(rng());
    }
    return out;
}
}  // namespace

TEST_CASE("philox known-answer vectors")
{
    // Reference vectors distributed with Random123
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::apply(C{0, 0, 0, 0}, {0, 0})
          == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::apply(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                            {0xffffffff, 0xffffffff})
          == C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::apply(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                            {0xa4093822, 0x299f31d0})
          == C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct")
{
    CHECK(draw(derive_stream(1, 0), 100) == draw(derive_stream(1, 0), 100));
    CHECK(draw(derive_stream(1, 0), 100) != draw(derive_stream(1, 1), 100));
    CHECK(draw(derive_stream(1, 0), 100) != draw(derive_stream(2, 0), 100));
    // Index bits above 32 must matter
    CHECK(draw(derive_stream(1, 0), 4) != draw(derive_stream(1, 1ull << 32), 4));

    RngStream base = derive_stream(7, 3);
    CHECK(draw(base.substream(1), 50) != draw(base.substream(0), 50));
    CHECK(draw(base.substream(0), 50) == draw(derive_stream(7, 3), 50));

    // A substream starts fresh regardless of the parent's position
    RngStream advanced = derive_stream(7, 3);
    draw(advanced, 5);
    for (int i = 0; i < 5; ++i)
    {
        advanced();
    }
    CHECK(draw(advanced.substream(1), 20) == draw(base.substream(1), 20));
}

TEST_CASE("uniform deviates")
{
    RngStream rng = derive_stream(1, 5);
    int const n = 1'000'000;
    double sum = 0;
    double lo = 1;
    double hi = 0;
    for (int i = 0; i < n; ++i)
    {
        double const u = rng.uniform();
        sum += u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    double const tol = 4 * (1 / std::sqrt(12.0)) / 1e3;
    CHECK(std::abs(sum / n - 0.5) < tol);
    CHECK(lo > 0);
    CHECK(hi <= 1);
}

TEST_CASE("normal deviates follow the standard normal law")
{
    RngStream rng = derive_stream(11, 0);
    int const n = 1'000'000;
    // Interval edges and their probabilities under the standard normal
    std::vector<double> const edges{-2, -1, -0.5, 0, 0.5, 1, 2};
    std::vector<int> counts(edges.size() + 1, 0);
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i)
    {
        double const z = rng.normal();
        sum += z;
        sum2 += z * z;
        std::size_t k = 0;
        while (k < edges.size() && z >= edges[k])
        {
            ++k;
        }
        ++counts[k];
    }
    CHECK(std::abs(sum / n) < 4 / std::sqrt(double(n)));
    CHECK(std::abs(sum2 / n - 1) < 4 * std::sqrt(2.0 / n));

    auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    for (std::size_t k = 0; k <= edges.size(); ++k)
    {
        double const lo = k == 0 ? 0 : cdf(edges[k - 1]);
        double const hi = k == edges.size() ? 1 : cdf(edges[k]);
        double const p = hi - lo;
        double const se = std::sqrt(p * (1 - p) / n);
        CAPTURE(k);
        CHECK(std::abs(double(counts[k]) / n - p) < 4 * se);
    }
}

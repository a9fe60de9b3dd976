#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace stpp {

// Philox4x32-10 counter-based generator (Salmon et al., Random123). Output
// depends only on (key, counter), so streams reproduce across platforms and
// compilers.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key);
};

// Sequential stream over Philox blocks: key = seed, counter word 2 = stream.
class RandomStream {
public:
    static constexpr std::string_view kGeneratorId = "philox4x32-10/stpp-stream-v1";

    explicit RandomStream(std::uint64_t seed, std::uint32_t stream = 0);

    std::uint32_t next_u32();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Standard exponential variate.
    double exponential();
    // Poisson(mean) by counting unit-rate arrivals in [0, mean].
    std::uint64_t poisson(double mean);

private:
    Philox4x32::Key key_;
    std::uint64_t block_ = 0;
    std::uint32_t stream_;
    Philox4x32::Counter buffer_{};
    int used_ = 4;
};

}  // namespace stpp

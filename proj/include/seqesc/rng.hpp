#pragma once

// Counter-based random streams. A stream is fully determined by a 64-bit seed
// and a 64-bit stream id (the realization index), so results do not depend on
// which worker runs which realization.

#include <array>
#include <cstdint>
#include <limits>

namespace seqesc {

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// UniformRandomBitGenerator over Philox4x32-10 blocks keyed by the seed.
class PhiloxStream {
public:
    using result_type = std::uint64_t;

    PhiloxStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform on (0, 1].
    double uniform_open0();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
};

/// Standard normal draws by the Box-Muller transform; stateful (caches the pair).
class NormalSource {
public:
    explicit NormalSource(PhiloxStream stream) : stream_(stream) {}

    double operator()();

private:
    PhiloxStream stream_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace seqesc

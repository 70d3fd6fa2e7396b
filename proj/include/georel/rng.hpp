#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace georel {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Roles separate the independent draws a single replication needs.
enum class StreamRole : std::uint32_t {
    sample = 0,
    stress = 1,
    strength = 2,
    user = 0xffff,
};

/// Counter-based random stream keyed by (master seed, replication, role).
///
/// Replication i of a study sees the same numbers whether it runs first,
/// last, or on another thread. Satisfies UniformRandomBitGenerator.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit Stream(std::uint64_t seed, std::uint64_t replication = 0,
                    StreamRole role = StreamRole::sample) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1); never returns 0 or 1.
    double uniform_open() noexcept;

    /// Independent stream sharing seed and replication but using another role.
    Stream substream(StreamRole role) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t replication() const noexcept { return replication_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t replication_;
    std::uint32_t role_;
    std::uint32_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int available_ = 0;
};

}  // namespace georel

#include "georel/rng.hpp"

namespace georel {
namespace {

constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kWeylA = 0x9E3779B9u;
constexpr std::uint32_t kWeylB = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) noexcept {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kMulA, ctr[0], lo0, hi0);
        mulhilo(kMulB, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

Stream::Stream(std::uint64_t seed, std::uint64_t replication, StreamRole role) noexcept
    : seed_(seed), replication_(replication), role_(static_cast<std::uint32_t>(role)) {}

void Stream::refill() noexcept {
    const std::array<std::uint32_t, 4> ctr{block_++, role_, static_cast<std::uint32_t>(replication_),
                                           static_cast<std::uint32_t>(replication_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = philox4x32(ctr, key);
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    available_ = 2;
}

Stream::result_type Stream::operator()() noexcept {
    if (available_ == 0) refill();
    return buffer_[2 - available_--];
}

double Stream::uniform_open() noexcept {
    // 53 random bits centred in their cell: (k + 0.5) / 2^53.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

Stream Stream::substream(StreamRole role) const noexcept { return Stream(seed_, replication_, role); }

}  // namespace georel

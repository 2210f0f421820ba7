#pragma once

#include <cmath>
#include <cstdint>

namespace fwwave::rng {

/// Identifies one replication stream: the stream is a pure function of
/// (master_seed, replication_index), so scheduling order and worker count
/// never change the draws.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t replication_index = 0;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// Counter-based uniform/normal stream (splitmix64 core, Box-Muller pairs).
/// All arithmetic is explicit so output is identical across standard
/// libraries and platforms with IEEE doubles.
class NormalStream {
public:
    explicit NormalStream(SeedSpec seed)
        : state_(detail::mix64(detail::mix64(seed.master_seed) ^
                               detail::mix64(seed.replication_index + 0x6a09e667f3bcc909ULL))) {}

    NormalStream(std::uint64_t master_seed, std::uint64_t replication_index)
        : NormalStream(SeedSpec{master_seed, replication_index}) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1): 53 mantissa bits shifted into the open interval.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace fwwave::rng

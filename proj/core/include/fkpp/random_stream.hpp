#pragma once

#include <cstdint>
#include <random>

namespace fkpp {

/// Per-realization random source. The state depends only on (master seed, stream id),
/// so a sample draws the same amplitudes whatever thread or order it runs in.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

    /// Uniform on the open interval (0, 1), 53 random bits.
    double uniform_open();

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace fkpp

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fmpc {

// Deterministic stream splitting: every component of an execution (dealer,
// input substitution, adversary, sharing randomness, ...) draws from its own
// stream derived from the master seed, so one component's consumption never
// shifts another's values.
uint64_t derive_seed(uint64_t master, std::string_view label, uint64_t index = 0);

class RngStream {
public:
    explicit RngStream(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps the
    // distribution exact.
    uint64_t uniform_below(uint64_t bound);

    // Uniform integer with exactly `bits` random bits, bits in [0, 64].
    uint64_t uniform_bits(unsigned bits);

    uint8_t uniform_byte() { return static_cast<uint8_t>(uniform_bits(8)); }

    std::vector<uint8_t> uniform_bytes(size_t n);

    // True with probability num/den, exactly.
    bool bernoulli(uint64_t num, uint64_t den);

private:
    std::mt19937_64 engine_;
};

} // namespace fmpc

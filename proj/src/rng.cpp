#include "fmpc/rng.hpp"

#include <stdexcept>

namespace fmpc {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

uint64_t derive_seed(uint64_t master, std::string_view label, uint64_t index) {
    uint64_t h = splitmix64(master);
    for (unsigned char c : label) {
        h = splitmix64(h ^ c);
    }
    return splitmix64(h ^ index);
}

uint64_t RngStream::uniform_below(uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_below: bound must be positive");
    }
    if ((bound & (bound - 1)) == 0) {
        return engine_() & (bound - 1);
    }
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % bound;
}

uint64_t RngStream::uniform_bits(unsigned bits) {
    if (bits > 64) {
        throw std::invalid_argument("uniform_bits: at most 64 bits");
    }
    if (bits == 0) {
        return 0;
    }
    return engine_() >> (64 - bits);
}

std::vector<uint8_t> RngStream::uniform_bytes(size_t n) {
    std::vector<uint8_t> out(n);
    for (auto& b : out) {
        b = uniform_byte();
    }
    return out;
}

bool RngStream::bernoulli(uint64_t num, uint64_t den) {
    if (den == 0 || num > den) {
        throw std::invalid_argument("bernoulli: need 0 <= num/den <= 1");
    }
    return uniform_below(den) < num;
}

} // namespace fmpc

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fmpc/subset.hpp"

namespace fmpc {

// Canonical, length-prefixed byte encoding. Every signed payload in the
// protocol goes through this writer so signatures are well-defined and
// transcripts are byte-exact reproducible.
class Encoder {
public:
    void put_u32(uint32_t v);
    void put_bytes(std::span<const uint8_t> data); // length-prefixed
    void put_subset(Subset s);                     // sorted index list

    const std::vector<uint8_t>& bytes() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

class Decoder {
public:
    explicit Decoder(std::span<const uint8_t> data) : data_(data) {}

    uint32_t get_u32();
    std::vector<uint8_t> get_bytes();
    Subset get_subset();
    bool at_end() const { return pos_ == data_.size(); }

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

std::string to_hex(std::span<const uint8_t> data);
std::vector<uint8_t> from_hex(const std::string& hex);

} // namespace fmpc

#include "fmpc/encoding.hpp"

#include <stdexcept>

namespace fmpc {

void Encoder::put_u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
}

void Encoder::put_bytes(std::span<const uint8_t> data) {
    put_u32(static_cast<uint32_t>(data.size()));
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void Encoder::put_subset(Subset s) {
    const auto members = subset_members(s);
    put_u32(static_cast<uint32_t>(members.size()));
    for (int j : members) {
        put_u32(static_cast<uint32_t>(j));
    }
}

uint32_t Decoder::get_u32() {
    if (pos_ + 4 > data_.size()) {
        throw std::invalid_argument("decode: truncated u32");
    }
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= uint32_t{data_[pos_++]} << (8 * i);
    }
    return v;
}

std::vector<uint8_t> Decoder::get_bytes() {
    const uint32_t len = get_u32();
    if (pos_ + len > data_.size()) {
        throw std::invalid_argument("decode: truncated byte field");
    }
    std::vector<uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + len);
    pos_ += len;
    return out;
}

Subset Decoder::get_subset() {
    const uint32_t count = get_u32();
    Subset s = 0;
    for (uint32_t i = 0; i < count; ++i) {
        const uint32_t j = get_u32();
        if (j < 1 || j > 32) {
            throw std::invalid_argument("decode: party index out of range");
        }
        s = subset_add(s, static_cast<int>(j));
    }
    return s;
}

std::string to_hex(std::span<const uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) {
        throw std::invalid_argument("from_hex: odd length");
    }
    auto nibble = [](char c) -> uint8_t {
        if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<uint8_t>(c - 'A' + 10);
        throw std::invalid_argument("from_hex: bad digit");
    };
    std::vector<uint8_t> out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    return out;
}

} // namespace fmpc

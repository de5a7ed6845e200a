#pragma once

#include <cstdint>
#include <vector>

#include "fmpc/rng.hpp"

namespace fmpc {

// Arithmetic in the 256-element binary field with the reduction polynomial
// x^8 + x^4 + x^3 + x + 1 (0x11b). Party j is mapped to the nonzero
// evaluation point j, which caps the party count at 255.
namespace gf256 {
uint8_t mul(uint8_t a, uint8_t b);
uint8_t inv(uint8_t a);
} // namespace gf256

using ByteSecret = std::vector<uint8_t>;

enum class SchemeTag : uint8_t { Xor, Shamir, Masking, Complement };

struct IndexedShare {
    int holder_index = 0;
    SchemeTag scheme_tag = SchemeTag::Xor;
    ByteSecret payload;
};

// k-out-of-k XOR sharing. Payloads XOR to the secret; any k-1 are jointly
// uniform.
std::vector<IndexedShare> xor_share(const ByteSecret& secret, int k, RngStream& rng);
ByteSecret xor_reconstruct(const std::vector<IndexedShare>& shares);

// Byte-wise Shamir sharing of degree threshold-1 at the evaluation points
// given (party index = evaluation point).
std::vector<IndexedShare> shamir_share_at(const ByteSecret& secret, int threshold,
                                          const std::vector<int>& points, RngStream& rng);
std::vector<IndexedShare> shamir_share(const ByteSecret& secret, int threshold,
                                       int party_count, RngStream& rng);

// Lagrange interpolation at 0 from the first `threshold` shares by ascending
// index. Does no consistency checking; inconsistent inputs interpolate
// silently (error detection belongs to the signature layer).
ByteSecret shamir_reconstruct(const std::vector<IndexedShare>& shares, int threshold);

// Uniformly random full sharing of `secret` consistent with the given
// partial shares (strictly fewer than `threshold` of them).
std::vector<IndexedShare> shamir_complete(const std::vector<IndexedShare>& partial,
                                          const ByteSecret& secret, int threshold,
                                          int party_count, RngStream& rng);

// Sharing with respect to a designated party: the special party holds a
// uniform masking share, the rest hold a (threshold-1)-out-of-(m-1) Shamir
// sharing of secret XOR mask. Only qualified sets containing the special
// party can reconstruct.
struct RespectSharing {
    IndexedShare masking;                  // held by the special party
    std::vector<IndexedShare> complements; // held by everyone else
};

RespectSharing share_with_respect_to(const ByteSecret& secret, int special_index,
                                     int threshold, int party_count, RngStream& rng);
ByteSecret reconstruct_with_respect_to(const IndexedShare& masking,
                                       const std::vector<IndexedShare>& complements,
                                       int threshold);

} // namespace fmpc

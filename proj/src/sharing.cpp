#include "fmpc/sharing.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

namespace fmpc {

namespace gf256 {

namespace {

struct Tables {
    std::array<uint8_t, 256> log{};
    std::array<uint8_t, 255> exp{};
    Tables() {
        uint8_t x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = x;
            log[x] = static_cast<uint8_t>(i);
            // multiply by the generator 0x03
            const uint8_t hi = x & 0x80 ? 0x1b : 0x00;
            x = static_cast<uint8_t>((x << 1) ^ hi ^ x);
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

} // namespace

uint8_t mul(uint8_t a, uint8_t b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    const auto& t = tables();
    const int s = t.log[a] + t.log[b];
    return t.exp[s % 255];
}

uint8_t inv(uint8_t a) {
    if (a == 0) {
        throw std::invalid_argument("gf256: zero has no inverse");
    }
    const auto& t = tables();
    return t.exp[(255 - t.log[a]) % 255];
}

} // namespace gf256

namespace {

void check_secret(const ByteSecret& secret) {
    if (secret.empty()) {
        throw std::invalid_argument("sharing: secret must be non-empty");
    }
}

// Evaluate at x the unique polynomial of degree < points.size() through the
// given (point, value-bytes) pairs, byte-wise.
ByteSecret lagrange_eval(const std::vector<std::pair<uint8_t, const ByteSecret*>>& points,
                         uint8_t x) {
    const size_t len = points[0].second->size();
    ByteSecret out(len, 0);
    for (size_t a = 0; a < points.size(); ++a) {
        uint8_t coeff = 1;
        for (size_t b = 0; b < points.size(); ++b) {
            if (a == b) {
                continue;
            }
            const uint8_t num = static_cast<uint8_t>(x ^ points[b].first);
            const uint8_t den = static_cast<uint8_t>(points[a].first ^ points[b].first);
            coeff = gf256::mul(coeff, gf256::mul(num, gf256::inv(den)));
        }
        const ByteSecret& val = *points[a].second;
        for (size_t i = 0; i < len; ++i) {
            out[i] ^= gf256::mul(coeff, val[i]);
        }
    }
    return out;
}

} // namespace

std::vector<IndexedShare> xor_share(const ByteSecret& secret, int k, RngStream& rng) {
    check_secret(secret);
    if (k < 1) {
        throw std::invalid_argument("xor_share: k must be >= 1");
    }
    std::vector<IndexedShare> shares;
    shares.reserve(k);
    ByteSecret last = secret;
    for (int j = 1; j < k; ++j) {
        ByteSecret payload = rng.uniform_bytes(secret.size());
        for (size_t i = 0; i < secret.size(); ++i) {
            last[i] ^= payload[i];
        }
        shares.push_back({j, SchemeTag::Xor, std::move(payload)});
    }
    shares.push_back({k, SchemeTag::Xor, std::move(last)});
    return shares;
}

ByteSecret xor_reconstruct(const std::vector<IndexedShare>& shares) {
    if (shares.empty()) {
        throw std::invalid_argument("xor_reconstruct: no shares");
    }
    ByteSecret out(shares[0].payload.size(), 0);
    for (const auto& sh : shares) {
        if (sh.payload.size() != out.size()) {
            throw std::invalid_argument("xor_reconstruct: payload length mismatch");
        }
        for (size_t i = 0; i < out.size(); ++i) {
            out[i] ^= sh.payload[i];
        }
    }
    return out;
}

std::vector<IndexedShare> shamir_share_at(const ByteSecret& secret, int threshold,
                                          const std::vector<int>& points, RngStream& rng) {
    check_secret(secret);
    const int n = static_cast<int>(points.size());
    if (threshold < 1 || threshold > n || n > 255) {
        throw std::invalid_argument("shamir_share: threshold/point-count out of range");
    }
    std::set<int> distinct(points.begin(), points.end());
    if (static_cast<int>(distinct.size()) != n || *distinct.begin() < 1 || *distinct.rbegin() > 255) {
        throw std::invalid_argument("shamir_share: points must be distinct in [1,255]");
    }
    // Coefficients c_0 = secret, c_1..c_{threshold-1} uniform, byte-wise.
    std::vector<ByteSecret> coeffs;
    coeffs.push_back(secret);
    for (int k = 1; k < threshold; ++k) {
        coeffs.push_back(rng.uniform_bytes(secret.size()));
    }
    std::vector<IndexedShare> shares;
    shares.reserve(n);
    for (int point : points) {
        ByteSecret payload(secret.size(), 0);
        const uint8_t x = static_cast<uint8_t>(point);
        for (size_t i = 0; i < secret.size(); ++i) {
            uint8_t acc = 0;
            for (int k = threshold - 1; k >= 0; --k) {
                acc = static_cast<uint8_t>(gf256::mul(acc, x) ^ coeffs[k][i]);
            }
            payload[i] = acc;
        }
        shares.push_back({point, SchemeTag::Shamir, std::move(payload)});
    }
    return shares;
}

std::vector<IndexedShare> shamir_share(const ByteSecret& secret, int threshold,
                                       int party_count, RngStream& rng) {
    if (party_count < 1 || party_count > 255 || threshold > party_count) {
        throw std::invalid_argument("shamir_share: need 1 <= threshold <= m <= 255");
    }
    std::vector<int> points(party_count);
    for (int j = 0; j < party_count; ++j) {
        points[j] = j + 1;
    }
    return shamir_share_at(secret, threshold, points, rng);
}

ByteSecret shamir_reconstruct(const std::vector<IndexedShare>& shares, int threshold) {
    if (threshold < 1) {
        throw std::invalid_argument("shamir_reconstruct: threshold must be >= 1");
    }
    if (static_cast<int>(shares.size()) < threshold) {
        throw std::invalid_argument("shamir_reconstruct: not enough shares");
    }
    std::vector<const IndexedShare*> sorted;
    sorted.reserve(shares.size());
    for (const auto& sh : shares) {
        sorted.push_back(&sh);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const IndexedShare* a, const IndexedShare* b) {
                  return a->holder_index < b->holder_index;
              });
    for (size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->holder_index == sorted[i - 1]->holder_index) {
            throw std::invalid_argument("shamir_reconstruct: duplicate holder index");
        }
    }
    std::vector<std::pair<uint8_t, const ByteSecret*>> points;
    for (int i = 0; i < threshold; ++i) {
        if (sorted[i]->payload.size() != sorted[0]->payload.size()) {
            throw std::invalid_argument("shamir_reconstruct: payload length mismatch");
        }
        points.emplace_back(static_cast<uint8_t>(sorted[i]->holder_index), &sorted[i]->payload);
    }
    return lagrange_eval(points, 0);
}

std::vector<IndexedShare> shamir_complete(const std::vector<IndexedShare>& partial,
                                          const ByteSecret& secret, int threshold,
                                          int party_count, RngStream& rng) {
    check_secret(secret);
    if (party_count < 1 || party_count > 255 || threshold < 1 || threshold > party_count) {
        throw std::invalid_argument("shamir_complete: bad threshold/party count");
    }
    if (static_cast<int>(partial.size()) >= threshold) {
        throw std::invalid_argument("shamir_complete: too many fixed shares");
    }
    std::set<int> used{0};
    for (const auto& sh : partial) {
        if (sh.payload.size() != secret.size()) {
            throw std::invalid_argument("shamir_complete: payload length mismatch");
        }
        if (!used.insert(sh.holder_index).second) {
            throw std::invalid_argument("shamir_complete: duplicate holder index");
        }
    }
    // Pin the polynomial with fresh uniform values at unused points; the
    // result is a uniform completion.
    std::vector<std::pair<uint8_t, const ByteSecret*>> constraints;
    constraints.emplace_back(0, &secret);
    for (const auto& sh : partial) {
        constraints.emplace_back(static_cast<uint8_t>(sh.holder_index), &sh.payload);
    }
    std::vector<ByteSecret> fresh;
    fresh.reserve(threshold);
    for (int point = 1; static_cast<int>(constraints.size()) < threshold; ++point) {
        if (used.count(point)) {
            continue;
        }
        fresh.push_back(rng.uniform_bytes(secret.size()));
        constraints.emplace_back(static_cast<uint8_t>(point), &fresh.back());
        used.insert(point);
    }
    std::vector<IndexedShare> out;
    out.reserve(party_count);
    for (int j = 1; j <= party_count; ++j) {
        out.push_back({j, SchemeTag::Shamir, lagrange_eval(constraints, static_cast<uint8_t>(j))});
    }
    return out;
}

RespectSharing share_with_respect_to(const ByteSecret& secret, int special_index,
                                     int threshold, int party_count, RngStream& rng) {
    check_secret(secret);
    if (special_index < 1 || special_index > party_count) {
        throw std::invalid_argument("share_with_respect_to: special index out of range");
    }
    if (threshold < 2 || threshold > party_count) {
        throw std::invalid_argument("share_with_respect_to: need 2 <= threshold <= m");
    }
    RespectSharing out;
    out.masking = {special_index, SchemeTag::Masking, rng.uniform_bytes(secret.size())};
    ByteSecret complement(secret.size());
    for (size_t i = 0; i < secret.size(); ++i) {
        complement[i] = secret[i] ^ out.masking.payload[i];
    }
    std::vector<int> points;
    for (int j = 1; j <= party_count; ++j) {
        if (j != special_index) {
            points.push_back(j);
        }
    }
    out.complements = shamir_share_at(complement, threshold - 1, points, rng);
    for (auto& sh : out.complements) {
        sh.scheme_tag = SchemeTag::Complement;
    }
    return out;
}

ByteSecret reconstruct_with_respect_to(const IndexedShare& masking,
                                       const std::vector<IndexedShare>& complements,
                                       int threshold) {
    if (static_cast<int>(complements.size()) < threshold - 1) {
        throw std::invalid_argument("reconstruct_with_respect_to: not enough complement shares");
    }
    ByteSecret complement = shamir_reconstruct(complements, threshold - 1);
    if (masking.payload.size() != complement.size()) {
        throw std::invalid_argument("reconstruct_with_respect_to: payload length mismatch");
    }
    for (size_t i = 0; i < complement.size(); ++i) {
        complement[i] ^= masking.payload[i];
    }
    return complement;
}

} // namespace fmpc

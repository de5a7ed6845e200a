#include "fmpc/auth.hpp"

#include <stdexcept>
#include <string_view>

namespace fmpc {

namespace {

std::vector<uint8_t> expand_tag(uint64_t a, uint64_t b) {
    std::vector<uint8_t> out(16);
    for (int i = 0; i < 8; ++i) {
        out[i] = static_cast<uint8_t>(a >> (8 * i));
        out[8 + i] = static_cast<uint8_t>(b >> (8 * i));
    }
    return out;
}

uint64_t key_hash(std::span<const uint8_t> key) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint8_t b : key) {
        h = (h ^ b) * 0x100000001b3ULL;
    }
    return h;
}

} // namespace

KeyPair RegistrySignatureProvider::gen(RngStream& rng) {
    KeyPair kp;
    kp.signing_key = expand_tag(rng.next_u64(), rng.next_u64());
    kp.verification_key = expand_tag(rng.next_u64(), rng.next_u64());
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = by_signing_key_.try_emplace(kp.signing_key);
    if (!inserted) {
        throw std::logic_error("gen: signing key collision");
    }
    it->second.verification_key = kp.verification_key;
    by_verification_key_[kp.verification_key] = &it->second;
    return kp;
}

SignedPayload RegistrySignatureProvider::sign(std::span<const uint8_t> message,
                                              std::span<const uint8_t> signing_key) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = by_signing_key_.find(std::vector<uint8_t>(signing_key.begin(), signing_key.end()));
    if (it == by_signing_key_.end()) {
        throw std::invalid_argument("sign: unknown signing key");
    }
    Record& rec = it->second;
    // Tag derived from the key and a per-key counter: unique per call and
    // reproducible under a fixed seed.
    const auto tag = expand_tag(key_hash(signing_key) ^ rec.counter,
                                derive_seed(key_hash(signing_key), "sig", rec.counter));
    ++rec.counter;
    SignedPayload sp;
    sp.message.assign(message.begin(), message.end());
    sp.signature = tag;
    rec.issued.insert({sp.message, sp.signature});
    return sp;
}

bool RegistrySignatureProvider::verify(std::span<const uint8_t> message,
                                       std::span<const uint8_t> signature,
                                       std::span<const uint8_t> verification_key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = by_verification_key_.find(
        std::vector<uint8_t>(verification_key.begin(), verification_key.end()));
    if (it == by_verification_key_.end()) {
        return false;
    }
    return it->second->issued.count({std::vector<uint8_t>(message.begin(), message.end()),
                                     std::vector<uint8_t>(signature.begin(), signature.end())}) >
           0;
}

} // namespace fmpc

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <vector>

#include "fmpc/rng.hpp"

namespace fmpc {

struct KeyPair {
    std::vector<uint8_t> signing_key;
    std::vector<uint8_t> verification_key;
};

struct SignedPayload {
    std::vector<uint8_t> message;
    std::vector<uint8_t> signature;
};

// Gen/Sign/Ver abstraction. The default provider is an in-memory registry
// oracle: a signature is a random tag recorded in a table, and verification
// is a lookup, so unforgeability holds unconditionally inside simulations.
// A provider backed by a real signature scheme can be swapped in behind the
// same interface.
class SignatureProvider {
public:
    virtual ~SignatureProvider() = default;
    virtual KeyPair gen(RngStream& rng) = 0;
    virtual SignedPayload sign(std::span<const uint8_t> message,
                               std::span<const uint8_t> signing_key) = 0;
    virtual bool verify(std::span<const uint8_t> message, std::span<const uint8_t> signature,
                        std::span<const uint8_t> verification_key) const = 0;
};

class RegistrySignatureProvider : public SignatureProvider {
public:
    KeyPair gen(RngStream& rng) override;
    SignedPayload sign(std::span<const uint8_t> message,
                       std::span<const uint8_t> signing_key) override;
    bool verify(std::span<const uint8_t> message, std::span<const uint8_t> signature,
                std::span<const uint8_t> verification_key) const override;

private:
    struct Record {
        std::vector<uint8_t> verification_key;
        std::set<std::pair<std::vector<uint8_t>, std::vector<uint8_t>>> issued;
        uint64_t counter = 0;
    };
    mutable std::mutex mutex_;
    std::map<std::vector<uint8_t>, Record> by_signing_key_;
    std::map<std::vector<uint8_t>, const Record*> by_verification_key_;
};

} // namespace fmpc

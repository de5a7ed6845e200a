#include "doctest.h"

#include "fmpc/auth.hpp"

using namespace fmpc;

TEST_CASE("sign then verify succeeds; any tampering fails") {
    RegistrySignatureProvider sigs;
    RngStream rng(1);
    const auto keys = sigs.gen(rng);
    const std::vector<uint8_t> msg{1, 2, 3, 4};
    const auto signed_msg = sigs.sign(msg, keys.signing_key);
    CHECK(signed_msg.message == msg);
    CHECK(sigs.verify(msg, signed_msg.signature, keys.verification_key));

    auto bad_msg = msg;
    bad_msg[0] ^= 1;
    CHECK_FALSE(sigs.verify(bad_msg, signed_msg.signature, keys.verification_key));

    auto bad_sig = signed_msg.signature;
    bad_sig[0] ^= 1;
    CHECK_FALSE(sigs.verify(msg, bad_sig, keys.verification_key));
}

TEST_CASE("signatures do not transfer between keys") {
    RegistrySignatureProvider sigs;
    RngStream rng(2);
    const auto a = sigs.gen(rng);
    const auto b = sigs.gen(rng);
    const std::vector<uint8_t> msg{9, 9, 9};
    const auto sa = sigs.sign(msg, a.signing_key);
    CHECK(sigs.verify(msg, sa.signature, a.verification_key));
    CHECK_FALSE(sigs.verify(msg, sa.signature, b.verification_key));
}

TEST_CASE("unforgeability: unsigned messages never verify") {
    RegistrySignatureProvider sigs;
    RngStream rng(3);
    const auto keys = sigs.gen(rng);
    // Sign many messages, then probe messages that were never signed with
    // every signature issued so far.
    std::vector<SignedPayload> issued;
    for (uint8_t k = 0; k < 50; ++k) {
        issued.push_back(sigs.sign(std::vector<uint8_t>{k, 0}, keys.signing_key));
    }
    for (uint8_t k = 0; k < 50; ++k) {
        const std::vector<uint8_t> never_signed{k, 1};
        for (const auto& sp : issued) {
            CHECK_FALSE(sigs.verify(never_signed, sp.signature, keys.verification_key));
        }
    }
}

TEST_CASE("verify with an unknown verification key is false, not an error") {
    RegistrySignatureProvider sigs;
    const std::vector<uint8_t> msg{1};
    const std::vector<uint8_t> sig(16, 0);
    const std::vector<uint8_t> key(16, 7);
    CHECK_FALSE(sigs.verify(msg, sig, key));
}

TEST_CASE("signing with an unknown signing key throws") {
    RegistrySignatureProvider sigs;
    const std::vector<uint8_t> key(16, 5);
    CHECK_THROWS_AS(sigs.sign(std::vector<uint8_t>{1}, key), std::invalid_argument);
}

TEST_CASE("same message signed twice: both signatures verify") {
    RegistrySignatureProvider sigs;
    RngStream rng(4);
    const auto keys = sigs.gen(rng);
    const std::vector<uint8_t> msg{5, 5};
    const auto s1 = sigs.sign(msg, keys.signing_key);
    const auto s2 = sigs.sign(msg, keys.signing_key);
    CHECK(sigs.verify(msg, s1.signature, keys.verification_key));
    CHECK(sigs.verify(msg, s2.signature, keys.verification_key));
}

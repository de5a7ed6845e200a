#include "doctest.h"

#include "fmpc/sharegen.hpp"

using namespace fmpc;

namespace {

ProtocolConfig xor4_config(int r, Subset corrupt = 0, uint64_t seed = 1) {
    ProtocolConfig cfg;
    cfg.functionality = FunctionalitySpec::xor_n(4);
    cfg.corruption_bound = 2;
    cfg.round_count = r;
    cfg.corrupt_indices = corrupt;
    cfg.master_seed = seed;
    return cfg;
}

ShareGenResult make_gen(const ProtocolConfig& cfg, const std::vector<Value>& inputs,
                        RegistrySignatureProvider& sigs, Variant variant = Variant::Domain) {
    RngStream table_rng(derive_seed(cfg.master_seed, "dealer"));
    RngStream share_rng(derive_seed(cfg.master_seed, "sharing"));
    return multi_share_gen(cfg, inputs, 0, variant, table_rng, share_rng, sigs);
}

// Test-side oracle: rebuild one round value from the packages alone, the way
// the parties would after the round-i broadcast.
Value reconstruct_round_value(const ShareGenResult& gen, RegistrySignatureProvider& sigs,
                              int i, Subset j_set, int threshold) {
    ByteSecret acc(4, 0);
    for (int j : subset_members(j_set)) {
        std::vector<IndexedShare> comps;
        for (const auto& pkg : gen.packages) {
            if (pkg.party_index == j) {
                continue;
            }
            const auto msg = parse_round_message(pkg.round_messages[i - 1].message);
            auto it = msg.complement_shares.find({j_set, j});
            REQUIRE(it != msg.complement_shares.end());
            comps.push_back({pkg.party_index, SchemeTag::Complement, it->second});
        }
        const IndexedShare masking{j, SchemeTag::Masking,
                                   gen.packages[j - 1].masking_shares.at({i, j_set})};
        const auto recovered = SignedInnerShare::parse(
            reconstruct_with_respect_to(masking, comps, threshold));
        CHECK(recovered.round == i);
        CHECK(recovered.j_set == j_set);
        CHECK(recovered.holder == j);
        CHECK(sigs.verify(recovered.signed_portion(), recovered.signature,
                          gen.verification_key));
        for (size_t k = 0; k < acc.size(); ++k) {
            acc[k] ^= recovered.payload.at(k);
        }
    }
    return bytes_value(acc);
}

} // namespace

TEST_CASE("value byte helpers round trip") {
    for (Value v : {Value{0}, Value{1}, Value{255}, Value{0xdeadbeef}}) {
        CHECK(bytes_value(value_bytes(v)) == v);
    }
    CHECK_THROWS_AS(bytes_value(ByteSecret{1, 2}), std::invalid_argument);
}

TEST_CASE("signed inner share serialization round trips; trailing bytes rejected") {
    SignedInnerShare sis;
    sis.payload = {1, 2, 3, 4};
    sis.round = 7;
    sis.j_set = subset_add(subset_add(0, 2), 4);
    sis.holder = 2;
    sis.signature = ByteSecret(16, 0xab);
    auto bytes = sis.serialize();
    const auto parsed = SignedInnerShare::parse(bytes);
    CHECK(parsed.payload == sis.payload);
    CHECK(parsed.round == 7);
    CHECK(parsed.j_set == sis.j_set);
    CHECK(parsed.holder == 2);
    CHECK(parsed.signature == sis.signature);
    CHECK(parsed.signed_portion() == sis.signed_portion());
    bytes.push_back(0);
    CHECK_THROWS_AS(SignedInnerShare::parse(bytes), std::invalid_argument);
}

TEST_CASE("package arity at m=4, t=2, r=2") {
    RegistrySignatureProvider sigs;
    const auto cfg = xor4_config(2);
    const auto gen = make_gen(cfg, {1, 0, 0, 1}, sigs);
    CHECK(gen.table.subsets.size() == 6);
    for (const auto& pkg : gen.packages) {
        CHECK(pkg.round_messages.size() == 2);
        // three qualifying sets contain each party, over two rounds
        CHECK(pkg.masking_shares.size() == 6);
        const auto msg = parse_round_message(pkg.round_messages[0].message);
        CHECK(msg.sender == pkg.party_index);
        CHECK(msg.round == 1);
        // each of the six sets contributes its members other than the sender
        CHECK(msg.complement_shares.size() == 9);
    }
}

TEST_CASE("every round value reconstructs from packages and matches the table") {
    RegistrySignatureProvider sigs;
    const auto cfg = xor4_config(3, 0, 77);
    const auto gen = make_gen(cfg, {1, 1, 0, 0}, sigs);
    for (int i = 1; i <= 3; ++i) {
        for (Subset j_set : gen.table.subsets) {
            CHECK(reconstruct_round_value(gen, sigs, i, j_set, 3) ==
                  gen.table.at(i, j_set));
        }
    }
}

TEST_CASE("matched streams reproduce the dealer-model table exactly") {
    RegistrySignatureProvider sigs;
    const auto cfg = xor4_config(5, 0, 123);
    const std::vector<Value> inputs{0, 1, 0, 1};
    const auto gen = make_gen(cfg, inputs, sigs);
    RngStream dealer_rng(derive_seed(cfg.master_seed, "dealer"));
    const auto table = build_round_value_table(cfg, inputs, 0, 5, Variant::Domain, dealer_rng);
    CHECK(gen.table.special_round == table.special_round);
    CHECK(gen.table.final_output == table.final_output);
    CHECK(gen.table.values == table.values);
}

TEST_CASE("round message body is canonical; tampering breaks the signature") {
    RegistrySignatureProvider sigs;
    const auto cfg = xor4_config(2, 0, 9);
    const auto gen = make_gen(cfg, {0, 0, 1, 1}, sigs);
    const auto& sp = gen.packages[0].round_messages[0];
    CHECK(sigs.verify(sp.message, sp.signature, gen.verification_key));
    for (size_t k = 0; k < sp.message.size(); k += 7) {
        auto tampered = sp.message;
        tampered[k] ^= 0x01;
        CHECK_FALSE(sigs.verify(tampered, sp.signature, gen.verification_key));
    }

    // identical content signed again yields the identical message body
    RngStream t1(derive_seed(9, "dealer")), s1(derive_seed(9, "sharing"));
    RegistrySignatureProvider sigs2;
    const auto gen2 = multi_share_gen(cfg, {0, 0, 1, 1}, 0, Variant::Domain, t1, s1, sigs2);
    CHECK(gen2.packages[0].round_messages[0].message == sp.message);
}

TEST_CASE("build_round_message rejects missing shares") {
    RegistrySignatureProvider sigs;
    RngStream rng(4);
    const auto keys = sigs.gen(rng);
    const std::vector<Subset> subsets{subset_add(subset_add(0, 1), 2)};
    CHECK_THROWS_AS(build_round_message(3, 1, subsets, {}, keys.signing_key, sigs),
                    std::invalid_argument);
}

TEST_CASE("a t-coalition cannot open a member's own inner share from packages alone") {
    RegistrySignatureProvider sigs;
    const auto cfg = xor4_config(2, subset_add(subset_add(0, 1), 2), 55);
    const auto gen = make_gen(cfg, {1, 0, 1, 0}, sigs);
    const Subset coalition_set = subset_add(subset_add(0, 1), 2);
    // party 1's inner share of sigma for {1,2}: the coalition holds the
    // masking share and only party 2's complement share, one short of the
    // sub-scheme threshold.
    const IndexedShare masking{1, SchemeTag::Masking,
                               gen.packages[0].masking_shares.at({1, coalition_set})};
    const auto msg = parse_round_message(gen.packages[1].round_messages[0].message);
    const std::vector<IndexedShare> comps{
        {2, SchemeTag::Complement, msg.complement_shares.at({coalition_set, 1})}};
    CHECK_THROWS_AS(reconstruct_with_respect_to(masking, comps, 3), std::invalid_argument);
}

TEST_CASE("precondition checks") {
    RegistrySignatureProvider sigs;
    const auto cfg = xor4_config(2);
    RngStream t(1), s(2);
    CHECK_THROWS_AS(multi_share_gen(cfg, {0, 0, 0}, 0, Variant::Domain, t, s, sigs),
                    std::invalid_argument);
    CHECK_THROWS_AS(multi_share_gen(cfg, {0, 0, 0, 0}, subset_add(subset_add(0, 1), 2),
                                    Variant::Domain, t, s, sigs),
                    std::invalid_argument);
}

namespace {

struct PackageBlamer : AdversaryStrategy {
    int blame;
    int calls = 0;
    explicit PackageBlamer(int b) : blame(b) {}
    std::optional<int> on_packages(const std::vector<const PartyPackage*>& pkgs) override {
        ++calls;
        for (const auto* p : pkgs) {
            REQUIRE(p != nullptr);
        }
        return blame;
    }
};

} // namespace

TEST_CASE("ideal wrapper: cooperative run completes and delivers packages") {
    RegistrySignatureProvider sigs;
    auto cfg = xor4_config(2, subset_add(0, 1), 5);
    auto adv = honest_strategy();
    adv->begin_execution(cfg, 1, {});
    RngStream t(1), s(2);
    const auto outcome = multi_share_gen_with_abort(cfg, *adv, true, {1, 1, 1, 1}, 0,
                                                    Variant::Domain, t, s, sigs);
    CHECK(outcome.completed);
    CHECK(outcome.result.packages.size() == 4);
}

TEST_CASE("ideal wrapper: post-package abort blames a corrupt index") {
    RegistrySignatureProvider sigs;
    auto cfg = xor4_config(2, subset_add(subset_add(0, 1), 3), 5);
    PackageBlamer adv(3);
    adv.begin_execution(cfg, 1, {});
    RngStream t(1), s(2);
    const auto outcome = multi_share_gen_with_abort(cfg, adv, true, {1, 1, 1, 1}, 0,
                                                    Variant::Domain, t, s, sigs);
    CHECK_FALSE(outcome.completed);
    CHECK(outcome.blamed == 3);
    CHECK(outcome.result.packages.empty());

    PackageBlamer rogue(2); // not corrupt
    rogue.begin_execution(cfg, 1, {});
    RegistrySignatureProvider sigs2;
    RngStream t2(1), s2(2);
    CHECK_THROWS_AS(multi_share_gen_with_abort(cfg, rogue, true, {1, 1, 1, 1}, 0,
                                               Variant::Domain, t2, s2, sigs2),
                    ContractViolation);
}

TEST_CASE("ideal wrapper: input abort blames the minimal aborting index") {
    RegistrySignatureProvider sigs;
    auto cfg = xor4_config(2, subset_add(subset_add(0, 2), 4), 5);

    struct BothAbort : AdversaryStrategy {
        std::map<int, InputDecision> provide_inputs(const std::vector<int>& active,
                                                    const std::map<int, Value>&) override {
            std::map<int, InputDecision> out;
            for (int j : active) {
                out[j] = {true, 0};
            }
            return out;
        }
    } adv;
    adv.begin_execution(cfg, 1, {});
    RngStream t(1), s(2);
    const auto outcome = multi_share_gen_with_abort(cfg, adv, true, {0, 0, 0, 0}, 0,
                                                    Variant::Domain, t, s, sigs);
    CHECK_FALSE(outcome.completed);
    CHECK(outcome.blamed == 2);
}

#include "doctest.h"

#include "fmpc/dealerless.hpp"

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

} // namespace

TEST_CASE("all-honest run outputs f(x) exactly, every seed") {
    const std::vector<Value> inputs{1, 1, 1, 0};
    for (uint64_t seed = 0; seed < 30; ++seed) {
        auto cfg = xor4_config(4, 0, seed);
        auto adv = honest_strategy();
        const auto res = run_mpc(cfg, inputs, *adv, Variant::Domain);
        CHECK(res.termination == Termination::Normal);
        CHECK(res.termination_round == 4);
        CHECK(res.honest_output == Value{1});
        CHECK(res.honest_majority_violations == 0);
    }
}

TEST_CASE("honest runs agree with the dealer engine on matched seeds") {
    const std::vector<Value> inputs{0, 1, 1, 1};
    for (uint64_t seed = 100; seed < 120; ++seed) {
        auto cfg = xor4_config(6, 0, seed);
        auto a = honest_strategy();
        auto b = honest_strategy();
        const auto dealer = run_dealer_protocol(cfg, inputs, *a, Variant::Domain);
        const auto dealerless = run_mpc(cfg, inputs, *b, Variant::Domain);
        CHECK(dealer.special_round == dealerless.special_round);
        CHECK(dealer.honest_output == dealerless.honest_output);
    }
}

TEST_CASE("silence from round k reproduces the dealer-model previous-round value") {
    const std::vector<Value> inputs{1, 0, 0, 0};
    const Subset corrupt = subset_add(subset_add(0, 1), 2);
    for (uint64_t seed = 0; seed < 40; ++seed) {
        auto cfg = xor4_config(8, corrupt, seed);
        auto a = fixed_round_aborter(4, {1, 2});
        auto b = fixed_round_aborter(4, {1, 2});
        const auto dealer = run_dealer_protocol(cfg, inputs, *a, Variant::Domain);
        const auto dealerless = run_mpc(cfg, inputs, *b, Variant::Domain);
        CHECK(dealer.termination == Termination::Premature);
        CHECK(dealerless.termination == Termination::Premature);
        CHECK(dealer.termination_round == 4);
        CHECK(dealerless.termination_round == 4);
        CHECK(dealer.honest_output == dealerless.honest_output);
        CHECK(dealerless.honest_majority_violations == 0);
    }
}

TEST_CASE("threshold guesser behaves identically in both engines on matched seeds") {
    const std::vector<Value> inputs{1, 0, 1, 0};
    const Subset corrupt = subset_add(subset_add(0, 1), 2);
    std::map<int, Value> honest_inputs{{3, 1}, {4, 0}};
    const auto aux = aux_from_inputs(honest_inputs);
    for (uint64_t seed = 0; seed < 25; ++seed) {
        auto cfg = xor4_config(8, corrupt, seed);
        auto a = threshold_guesser();
        auto b = threshold_guesser();
        const auto dealer = run_dealer_protocol(cfg, inputs, *a, Variant::Domain, aux);
        const auto dealerless = run_mpc(cfg, inputs, *b, Variant::Domain, aux);
        CHECK(dealer.termination == dealerless.termination);
        CHECK(dealer.termination_round == dealerless.termination_round);
        CHECK(dealer.honest_output == dealerless.honest_output);
    }
}

TEST_CASE("round-one silence falls back to the trusted computation") {
    const Subset corrupt = subset_add(subset_add(0, 2), 3);
    auto cfg = xor4_config(5, corrupt, 71);
    auto adv = fixed_round_aborter(1, {2, 3});
    const auto res = run_mpc(cfg, {0, 0, 0, 0}, *adv, Variant::Domain);
    CHECK(res.termination == Termination::Premature);
    CHECK(res.termination_round == 1);
    CHECK(res.honest_output.has_value());
    CHECK(res.honest_majority_violations == 0);
}

TEST_CASE("slot validation: verbatim passes, everything else marks inactive") {
    RegistrySignatureProvider sigs;
    auto cfg = xor4_config(3, 0, 5);
    RngStream t(derive_seed(5, "dealer")), s(derive_seed(5, "sharing"));
    const auto gen = multi_share_gen(cfg, {1, 1, 0, 0}, 0, Variant::Domain, t, s, sigs);
    const auto& vkey = gen.verification_key;

    const auto slot1 = encode_slot(gen.packages[0].round_messages[0]);
    CHECK(validate_round_message(slot1, vkey, 1, 1, sigs).has_value());

    // silence
    CHECK_FALSE(validate_round_message(std::nullopt, vkey, 1, 1, sigs).has_value());
    // replayed message from another round: tag mismatch
    const auto slot2 = encode_slot(gen.packages[0].round_messages[1]);
    CHECK_FALSE(validate_round_message(slot2, vkey, 1, 1, sigs).has_value());
    CHECK(validate_round_message(slot2, vkey, 1, 2, sigs).has_value());
    // wrong sender
    CHECK_FALSE(validate_round_message(slot1, vkey, 2, 1, sigs).has_value());
    // single-bit corruption anywhere
    for (size_t k = 0; k < slot1.size(); k += 11) {
        auto bad = slot1;
        bad[k] ^= 0x04;
        CHECK_FALSE(validate_round_message(bad, vkey, 1, 1, sigs).has_value());
    }
    // malformed structure
    CHECK_FALSE(validate_round_message(std::vector<uint8_t>{1, 2, 3}, vkey, 1, 1, sigs)
                    .has_value());
}

namespace {

// builds each party's reconstruction submission directly from the packages
std::map<int, std::map<Subset, SignedInnerShare>> oracle_submissions(
    const ShareGenResult& gen, int value_round, int threshold) {
    std::map<int, std::map<Subset, SignedInnerShare>> subs;
    for (const auto& pkg : gen.packages) {
        const int j = pkg.party_index;
        for (Subset j_set : gen.table.subsets) {
            if (!subset_contains(j_set, j)) {
                continue;
            }
            std::vector<IndexedShare> comps;
            for (const auto& other : gen.packages) {
                if (other.party_index == j) {
                    continue;
                }
                const auto msg =
                    parse_round_message(other.round_messages[value_round - 1].message);
                comps.push_back({other.party_index, SchemeTag::Complement,
                                 msg.complement_shares.at({j_set, j})});
            }
            subs[j].emplace(j_set, SignedInnerShare::parse(reconstruct_with_respect_to(
                                       {j, SchemeTag::Masking,
                                        pkg.masking_shares.at({value_round, j_set})},
                                       comps, threshold)));
        }
    }
    return subs;
}

} // namespace

TEST_CASE("reconstruction functionality matches the stored table value") {
    RegistrySignatureProvider sigs;
    auto cfg = xor4_config(4, 0, 13);
    RngStream t(derive_seed(13, "dealer")), s(derive_seed(13, "sharing"));
    const auto gen = multi_share_gen(cfg, {1, 0, 1, 1}, 0, Variant::Domain, t, s, sigs);

    auto subs = oracle_submissions(gen, 2, 3);
    SUBCASE("all active parties submit honestly") {
        const Subset d = subset_add(subset_add(0, 1), 2);
        subs.erase(1);
        subs.erase(2);
        const auto rec =
            reconstruction_functionality(4, 2, subs, d, gen.verification_key, sigs);
        CHECK(rec.d == d);
        CHECK(rec.j_set == subset_add(subset_add(0, 3), 4));
        CHECK(rec.value == gen.table.at(2, rec.j_set));
    }
    SUBCASE("a garbage submission shrinks the set") {
        const Subset d = subset_add(0, 1);
        subs.erase(1);
        subs.at(2).begin()->second.signature[0] ^= 0xff;
        const auto rec =
            reconstruction_functionality(4, 2, subs, d, gen.verification_key, sigs);
        CHECK(rec.d == subset_add(subset_add(0, 1), 2));
        CHECK(rec.j_set == subset_add(subset_add(0, 3), 4));
        CHECK(rec.value == gen.table.at(2, rec.j_set));
    }
    SUBCASE("at or past the special round every set gives the final output") {
        const int sp = gen.table.special_round;
        if (sp <= 4) {
            auto late = oracle_submissions(gen, sp, 3);
            const Subset d = subset_add(subset_add(0, 1), 2);
            late.erase(1);
            late.erase(2);
            const auto rec =
                reconstruction_functionality(4, sp, late, d, gen.verification_key, sigs);
            CHECK(rec.value == gen.table.final_output);
        }
    }
}

TEST_CASE("unmask rejects tampered complements and shortage") {
    RegistrySignatureProvider sigs;
    auto cfg = xor4_config(2, 0, 21);
    RngStream t(derive_seed(21, "dealer")), s(derive_seed(21, "sharing"));
    const auto gen = multi_share_gen(cfg, {0, 1, 0, 1}, 0, Variant::Domain, t, s, sigs);
    const Subset j_set = gen.table.subsets.front();
    const int j = subset_members(j_set).front();

    std::vector<IndexedShare> comps;
    for (const auto& other : gen.packages) {
        if (other.party_index == j) {
            continue;
        }
        const auto msg = parse_round_message(other.round_messages[0].message);
        comps.push_back({other.party_index, SchemeTag::Complement,
                         msg.complement_shares.at({j_set, j})});
    }
    const auto& masking = gen.packages[j - 1].masking_shares.at({1, j_set});
    CHECK_NOTHROW(unmask_inner_share(masking, j, comps, 3, 1, j_set,
                                     gen.verification_key, sigs));

    auto bad = comps;
    bad[0].payload[0] ^= 0x80;
    CHECK_THROWS_AS(unmask_inner_share(masking, j, bad, 3, 1, j_set, gen.verification_key,
                                       sigs),
                    std::runtime_error);

    comps.resize(1);
    CHECK_THROWS(unmask_inner_share(masking, j, comps, 3, 1, j_set, gen.verification_key,
                                    sigs));
}

namespace {

struct RepeatedBlamer : AdversaryStrategy {
    std::optional<int> on_packages(const std::vector<const PartyPackage*>& pkgs) override {
        int lowest = 0;
        for (const auto* p : pkgs) {
            if (lowest == 0 || p->party_index < lowest) {
                lowest = p->party_index;
            }
        }
        return lowest == 0 ? std::nullopt : std::optional<int>(lowest);
    }
};

struct FinalWithholder : AdversaryStrategy {
    std::map<int, ReconAction> on_reconstruction_input(
        int, const std::vector<int>& corrupt_active) override {
        std::map<int, ReconAction> out;
        for (int j : corrupt_active) {
            out[j] = ReconAction::Silent;
        }
        return out;
    }
};

} // namespace

TEST_CASE("repeated preprocessing aborts shrink the participant set to the fallback") {
    const Subset corrupt = subset_add(subset_add(0, 1), 2);
    auto cfg = xor4_config(4, corrupt, 37);
    RepeatedBlamer adv;
    const auto res = run_mpc(cfg, {1, 1, 1, 1}, adv, Variant::Domain);
    CHECK(res.termination == Termination::Premature);
    CHECK(res.termination_round == 1);
    // two failed preprocessing calls, then the trusted fallback
    CHECK(res.hybrid_calls == 3);
    CHECK(res.honest_majority_violations == 0);
}

TEST_CASE("withholding the final shares still yields the output via an honest set") {
    const Subset corrupt = subset_add(subset_add(0, 1), 2);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        auto cfg = xor4_config(3, corrupt, 400 + seed);
        FinalWithholder adv;
        const auto res = run_mpc(cfg, {1, 0, 1, 0}, adv, Variant::Domain);
        CHECK(res.termination == Termination::Normal);
        CHECK(res.honest_output == Value{0});
    }
}

TEST_CASE("fair fallback substitutes aborters uniformly") {
    const auto spec = FunctionalitySpec::xor_n(4);
    RngStream coins(1), subst(2);
    CHECK(fair_mpc_functionality(spec, {Value{1}, Value{0}, Value{1}, Value{1}}, coins,
                                 subst) == Value{1});
    // deterministic spec, fixed inputs: constant
    for (int k = 0; k < 5; ++k) {
        CHECK(fair_mpc_functionality(spec, {Value{1}, Value{1}, Value{0}, Value{0}}, coins,
                                     subst) == Value{0});
    }
    // substituted slots follow the uniform oracle: exact frequency check
    int ones = 0;
    for (int k = 0; k < 4000; ++k) {
        ones += fair_mpc_functionality(spec, {Value{0}, Value{0}, Value{0}, std::nullopt},
                                       coins, subst);
    }
    CHECK(ones > 1800);
    CHECK(ones < 2200);
}

TEST_CASE("dealer-free transcripts are reproducible") {
    const Subset corrupt = subset_add(subset_add(0, 1), 2);
    auto cfg = xor4_config(5, corrupt, 61);
    auto a = fixed_round_aborter(3, {1, 2});
    auto b = fixed_round_aborter(3, {1, 2});
    const auto ra = run_mpc(cfg, {0, 1, 0, 1}, *a, Variant::Domain);
    const auto rb = run_mpc(cfg, {0, 1, 0, 1}, *b, Variant::Domain);
    CHECK(ra.transcript.serialize() == rb.transcript.serialize());
}

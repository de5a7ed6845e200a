#include "fmpc/sharegen.hpp"

#include <algorithm>

#include "fmpc/encoding.hpp"

namespace fmpc {

ByteSecret value_bytes(Value v) {
    return {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
            static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
}

Value bytes_value(const ByteSecret& bytes) {
    if (bytes.size() != 4) {
        throw std::invalid_argument("bytes_value: need exactly 4 bytes");
    }
    return static_cast<Value>(bytes[0]) | (static_cast<Value>(bytes[1]) << 8) |
           (static_cast<Value>(bytes[2]) << 16) | (static_cast<Value>(bytes[3]) << 24);
}

std::vector<uint8_t> SignedInnerShare::signed_portion() const {
    Encoder enc;
    enc.put_bytes(payload);
    enc.put_u32(static_cast<uint32_t>(round));
    enc.put_subset(j_set);
    enc.put_u32(static_cast<uint32_t>(holder));
    return enc.take();
}

std::vector<uint8_t> SignedInnerShare::serialize() const {
    Encoder enc;
    enc.put_bytes(payload);
    enc.put_u32(static_cast<uint32_t>(round));
    enc.put_subset(j_set);
    enc.put_u32(static_cast<uint32_t>(holder));
    enc.put_bytes(signature);
    return enc.take();
}

SignedInnerShare SignedInnerShare::parse(std::span<const uint8_t> bytes) {
    Decoder dec(bytes);
    SignedInnerShare out;
    out.payload = dec.get_bytes();
    out.round = static_cast<int>(dec.get_u32());
    out.j_set = dec.get_subset();
    out.holder = static_cast<int>(dec.get_u32());
    out.signature = dec.get_bytes();
    if (!dec.at_end()) {
        throw std::invalid_argument("SignedInnerShare::parse: trailing bytes");
    }
    return out;
}

SignedPayload build_round_message(
    int sender, int round, const std::vector<Subset>& subsets,
    const std::map<std::pair<Subset, int>, ByteSecret>& complement_shares,
    std::span<const uint8_t> signing_key, SignatureProvider& sigs) {
    Encoder enc;
    enc.put_u32(static_cast<uint32_t>(sender));
    enc.put_u32(static_cast<uint32_t>(round));
    uint32_t count = 0;
    for (Subset j_set : subsets) {
        for (int j : subset_members(j_set)) {
            if (j != sender) {
                ++count;
            }
        }
    }
    enc.put_u32(count);
    for (Subset j_set : subsets) {
        for (int j : subset_members(j_set)) {
            if (j == sender) {
                continue;
            }
            auto it = complement_shares.find({j_set, j});
            if (it == complement_shares.end()) {
                throw std::invalid_argument("build_round_message: missing complement share");
            }
            enc.put_subset(j_set);
            enc.put_u32(static_cast<uint32_t>(j));
            enc.put_bytes(it->second);
        }
    }
    return sigs.sign(enc.bytes(), signing_key);
}

RoundMessage parse_round_message(std::span<const uint8_t> message) {
    Decoder dec(message);
    RoundMessage out;
    out.sender = static_cast<int>(dec.get_u32());
    out.round = static_cast<int>(dec.get_u32());
    const uint32_t count = dec.get_u32();
    for (uint32_t k = 0; k < count; ++k) {
        const Subset j_set = dec.get_subset();
        const int j = static_cast<int>(dec.get_u32());
        if (!out.complement_shares.emplace(std::pair{j_set, j}, dec.get_bytes()).second) {
            throw std::invalid_argument("parse_round_message: duplicate entry");
        }
    }
    if (!dec.at_end()) {
        throw std::invalid_argument("parse_round_message: trailing bytes");
    }
    return out;
}

ShareGenResult multi_share_gen(const ProtocolConfig& config,
                               const std::vector<Value>& effective_inputs,
                               Subset initial_aborts, Variant variant,
                               RngStream& table_rng, RngStream& share_rng,
                               SignatureProvider& sigs) {
    const int m = config.functionality.party_count();
    const int t = config.corruption_bound;
    const int r = config.rounds_small();
    if (static_cast<int>(effective_inputs.size()) != m) {
        throw std::invalid_argument("multi_share_gen: need one input per party");
    }
    if (subset_size(initial_aborts) >= m - t) {
        throw std::invalid_argument("multi_share_gen: too few participants");
    }

    ShareGenResult out;
    out.table = build_round_value_table(config, effective_inputs, initial_aborts, r,
                                        variant, table_rng);
    const KeyPair keys = sigs.gen(share_rng);
    out.verification_key = keys.verification_key;
    out.packages.resize(m);
    for (int j = 1; j <= m; ++j) {
        out.packages[j - 1].party_index = j;
        out.packages[j - 1].verification_key = keys.verification_key;
    }

    // per_party[q-1][i-1]: complement shares party q carries for round i
    std::vector<std::vector<std::map<std::pair<Subset, int>, ByteSecret>>> per_party(
        m, std::vector<std::map<std::pair<Subset, int>, ByteSecret>>(r));

    for (int i = 1; i <= r; ++i) {
        for (Subset j_set : out.table.subsets) {
            const auto members = subset_members(j_set);
            const auto inner = xor_share(value_bytes(out.table.at(i, j_set)),
                                         static_cast<int>(members.size()), share_rng);
            for (size_t k = 0; k < members.size(); ++k) {
                const int j = members[k];
                SignedInnerShare sis;
                sis.payload = inner[k].payload;
                sis.round = i;
                sis.j_set = j_set;
                sis.holder = j;
                sis.signature =
                    sigs.sign(sis.signed_portion(), keys.signing_key).signature;
                const auto secret = sis.serialize();
                const auto outer = share_with_respect_to(secret, j, t + 1, m, share_rng);
                out.packages[j - 1].masking_shares[{i, j_set}] = outer.masking.payload;
                for (const auto& comp : outer.complements) {
                    per_party[comp.holder_index - 1][i - 1][{j_set, j}] = comp.payload;
                }
            }
        }
    }

    for (int q = 1; q <= m; ++q) {
        auto& pkg = out.packages[q - 1];
        pkg.round_messages.reserve(r);
        for (int i = 1; i <= r; ++i) {
            pkg.round_messages.push_back(build_round_message(
                q, i, out.table.subsets, per_party[q - 1][i - 1], keys.signing_key, sigs));
        }
    }
    return out;
}

CheatDetectionOutcome multi_share_gen_with_abort(
    const ProtocolConfig& config, AdversaryStrategy& adversary, bool first_call,
    const std::vector<Value>& base_inputs, Subset initial_aborts, Variant variant,
    RngStream& table_rng, RngStream& share_rng, SignatureProvider& sigs) {
    const auto& spec = config.functionality;
    const int m = spec.party_count();

    std::vector<int> corrupt_active;
    std::map<int, Value> corrupt_true;
    for (int j : subset_members(config.corrupt_indices)) {
        if (!subset_contains(initial_aborts, j)) {
            corrupt_active.push_back(j);
            corrupt_true[j] = base_inputs[j - 1];
        }
    }
    const auto decisions = first_call ? adversary.provide_inputs(corrupt_active, corrupt_true)
                                      : adversary.provide_inputs_again(corrupt_active);

    CheatDetectionOutcome out;
    std::vector<Value> effective = base_inputs;
    for (int j : corrupt_active) {
        auto it = decisions.find(j);
        // A missing decision, explicit abort, or out-of-domain value all end
        // the call with the minimal offending index blamed.
        if (it == decisions.end() || it->second.abort || it->second.value >= spec.domain_size()) {
            out.blamed = j;
            return out;
        }
        effective[j - 1] = it->second.value;
    }

    out.result = multi_share_gen(config, effective, initial_aborts, variant, table_rng,
                                 share_rng, sigs);

    std::vector<const PartyPackage*> corrupt_packages;
    for (int j : corrupt_active) {
        corrupt_packages.push_back(&out.result.packages[j - 1]);
    }
    if (const auto blame = adversary.on_packages(corrupt_packages)) {
        if (!subset_contains(config.corrupt_indices, *blame) ||
            subset_contains(initial_aborts, *blame)) {
            throw ContractViolation("adversary blamed a party it does not control");
        }
        out.blamed = *blame;
        out.result = {};
        return out;
    }
    out.completed = true;
    return out;
}

} // namespace fmpc

#pragma once

#include <map>
#include <span>
#include <vector>

#include "fmpc/adversary.hpp"
#include "fmpc/auth.hpp"
#include "fmpc/dealer_model.hpp"
#include "fmpc/sharing.hpp"

namespace fmpc {

ByteSecret value_bytes(Value v);
Value bytes_value(const ByteSecret& bytes);

// One inner XOR share of a round value, bound to its coordinates by the
// signature: (payload, round, subset, holder) is the signed portion.
struct SignedInnerShare {
    ByteSecret payload;
    int round = 0;
    Subset j_set = 0;
    int holder = 0;
    std::vector<uint8_t> signature;

    std::vector<uint8_t> signed_portion() const;
    std::vector<uint8_t> serialize() const;
    static SignedInnerShare parse(std::span<const uint8_t> bytes);
};

// Everything one party leaves the preprocessing with: the signed messages it
// will broadcast round by round, and its masking share of each of its own
// inner shares. Any t packages together reveal no round value.
struct PartyPackage {
    int party_index = 0;
    std::vector<uint8_t> verification_key;
    std::vector<SignedPayload> round_messages; // index i-1
    std::map<std::pair<int, Subset>, ByteSecret> masking_shares; // (i, J) with party in J
};

// Parsed broadcast message: the complement shares its sender carries for one
// round, keyed by (subset, masked party).
struct RoundMessage {
    int sender = 0;
    int round = 0;
    std::map<std::pair<Subset, int>, ByteSecret> complement_shares;
};

SignedPayload build_round_message(
    int sender, int round, const std::vector<Subset>& subsets,
    const std::map<std::pair<Subset, int>, ByteSecret>& complement_shares,
    std::span<const uint8_t> signing_key, SignatureProvider& sigs);

RoundMessage parse_round_message(std::span<const uint8_t> message);

struct ShareGenResult {
    RoundValueTable table;
    std::vector<uint8_t> verification_key;
    std::vector<PartyPackage> packages; // index j-1, one per party including inactive
};

// The preprocessing functionality: value tables, inner XOR shares signed per
// coordinate, outer sharing of each signed inner share with respect to its
// holder (threshold t+1), and assembled round messages. `table_rng` feeds the
// value table only, so a dealer-model run with a matching stream produces the
// identical table; all sharing and key randomness comes from `share_rng`.
ShareGenResult multi_share_gen(const ProtocolConfig& config,
                               const std::vector<Value>& effective_inputs,
                               Subset initial_aborts, Variant variant,
                               RngStream& table_rng, RngStream& share_rng,
                               SignatureProvider& sigs);

struct CheatDetectionOutcome {
    bool completed = false;
    int blamed = 0; // corrupt index when !completed
    ShareGenResult result;
};

// Ideal wrapper with abort and cheat detection: corrupt inputs (or an input
// abort, blaming the minimal aborting index) are collected through the
// strategy; the corrupt packages are shown to the adversary, which may still
// abort blaming one of its own indices. `first_call` selects between the
// initial input collection and the repeat hook used by retry loops.
CheatDetectionOutcome multi_share_gen_with_abort(
    const ProtocolConfig& config, AdversaryStrategy& adversary, bool first_call,
    const std::vector<Value>& base_inputs, Subset initial_aborts, Variant variant,
    RngStream& table_rng, RngStream& share_rng, SignatureProvider& sigs);

} // namespace fmpc

#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fmpc/sharegen.hpp"

namespace fmpc {

// Signature and tag checks applied to one broadcast slot. Anything short of
// a verbatim, correctly-tagged, correctly-signed message (silence included)
// maps to "mark inactive", i.e. nullopt.
std::optional<RoundMessage> validate_round_message(
    const std::optional<std::vector<uint8_t>>& slot,
    std::span<const uint8_t> verification_key, int expected_sender, int expected_round,
    const SignatureProvider& sigs);

std::vector<uint8_t> encode_slot(const SignedPayload& message);

// Combines a masking share with at least threshold-1 complement shares from
// other parties' round messages, then checks the recovered share's signature
// and coordinates. Throws on shortage or on verification failure.
SignedInnerShare unmask_inner_share(const ByteSecret& masking_payload, int holder,
                                    const std::vector<IndexedShare>& complements,
                                    int threshold, int expected_round, Subset expected_set,
                                    std::span<const uint8_t> verification_key,
                                    const SignatureProvider& sigs);

struct ReconResult {
    Subset d = 0;     // after adding parties with bad submissions
    Subset j_set = 0; // [m] \ d
    Value value = 0;
};

// The trusted reconstruction call of the premature-termination step. Each
// submission maps qualifying sets to that party's signed inner share of the
// value round; missing or badly-signed submissions move the party into D.
ReconResult reconstruction_functionality(
    int m, int value_round,
    const std::map<int, std::map<Subset, SignedInnerShare>>& submissions, Subset d,
    std::span<const uint8_t> verification_key, const SignatureProvider& sigs);

// The trusted fallback for a first-round collapse: aborters (nullopt slots)
// are substituted uniformly and f is evaluated with fresh coins.
Value fair_mpc_functionality(const FunctionalitySpec& spec,
                             const std::vector<std::optional<Value>>& inputs,
                             RngStream& coin_rng, RngStream& substitution_rng);

RunResult run_mpc(const ProtocolConfig& config, const std::vector<Value>& true_inputs,
                  AdversaryStrategy& adversary, Variant variant,
                  const std::vector<uint8_t>& aux = {});

} // namespace fmpc

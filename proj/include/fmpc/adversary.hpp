#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fmpc/functionality.hpp"
#include "fmpc/rng.hpp"
#include "fmpc/subset.hpp"

namespace fmpc {

struct PartyPackage; // sharegen

// Raised when a strategy breaks the harness contract (acting for an index it
// does not control, aborting twice, ...). Never surfaces as a protocol
// output.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct InputDecision {
    bool abort = false;
    Value value = 0;
};

enum class SlotAction : uint8_t { Verbatim, Silent, Replace };

struct BroadcastSlot {
    SlotAction action = SlotAction::Verbatim;
    std::vector<uint8_t> bytes; // used for Replace
};

enum class ReconAction : uint8_t { Honest, Garbage, Silent };

// The rushing adversary's decision interface. Both engines call the same
// hooks; the defaults are fully honest behavior, so a strategy overrides
// only the decisions it cares about. Decisions must be deterministic
// functions of (view so far, strategy seed).
class AdversaryStrategy {
public:
    virtual ~AdversaryStrategy() = default;

    virtual void begin_execution(const ProtocolConfig& config, uint64_t seed,
                                 std::vector<uint8_t> aux);

    // Input submission on behalf of the active corrupt parties. The harness
    // passes the true inputs these parties were handed.
    virtual std::map<int, InputDecision> provide_inputs(
        const std::vector<int>& corrupt_active, const std::map<int, Value>& true_inputs);

    // Re-collection of inputs at a premature termination in round 1 (and the
    // FairMPC fallback in the dealer-free engine).
    virtual std::map<int, InputDecision> provide_inputs_again(
        const std::vector<int>& corrupt_active);

    // Values for fully-corrupt qualifying sets, revealed before any corrupt
    // decision of the round. Returns the abort list for the round.
    virtual std::vector<int> on_peek(int round, const std::map<Subset, Value>& peeked);

    // Extra aborts while the premature-termination value is being fixed.
    virtual std::vector<int> on_premature(int round);

    // Ideal sharegen wrapper: continue (nullopt) or abort blaming a corrupt
    // index.
    virtual std::optional<int> on_packages(
        const std::vector<const PartyPackage*>& corrupt_packages);

    // Dealer-free engine: fill the corrupt broadcast slots after the honest
    // slots of the round are visible. `planned_silent` are the parties the
    // strategy already aborted via on_peek.
    virtual std::map<int, BroadcastSlot> on_broadcast(
        int round, const std::map<int, std::vector<uint8_t>>& honest_slots,
        const std::vector<int>& planned_silent);

    // Reconstruction-functionality and final-broadcast inputs.
    virtual std::map<int, ReconAction> on_reconstruction_input(
        int round, const std::vector<int>& corrupt_active);

protected:
    const ProtocolConfig* config_ = nullptr;
    std::vector<uint8_t> aux_;
    std::map<int, Value> submitted_;
    std::unique_ptr<RngStream> rng_;
};

// Aux payload helpers: the guessing experiments pass the honest inputs to
// the adversary through aux (the proof's worst case).
std::vector<uint8_t> aux_from_inputs(const std::map<int, Value>& honest_inputs);
std::map<int, Value> inputs_from_aux(const std::vector<uint8_t>& aux);

std::unique_ptr<AdversaryStrategy> honest_strategy();

// Aborts the given corrupt parties at round k, after peeking.
std::unique_ptr<AdversaryStrategy> fixed_round_aborter(int k, std::vector<int> subset);

// Multiple scheduled aborts: (round, parties) pairs.
std::unique_ptr<AdversaryStrategy> scheduled_aborter(
    std::vector<std::pair<int, std::vector<int>>> schedule);

struct ThresholdGuesserConfig {
    // Fires when the peeked-value pattern looks like the fixed final output.
    // Default: all peeked values equal and consistent with the output
    // computed from the corrupt inputs and the aux-known honest inputs.
    std::function<bool(int round, const std::map<Subset, Value>& peeked,
                       const std::map<int, Value>& all_inputs,
                       const FunctionalitySpec& spec)>
        target_predicate;
};

std::unique_ptr<AdversaryStrategy> threshold_guesser(ThresholdGuesserConfig config = {});

} // namespace fmpc

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fmpc/adversary.hpp"
#include "fmpc/functionality.hpp"
#include "fmpc/rng.hpp"
#include "fmpc/subset.hpp"
#include "fmpc/transcript.hpp"

namespace fmpc {

enum class Variant { Domain, Range };

// The dealer's preprocessing output: the special round i*, the per-round
// per-subset values, and the fixed output w. For every i >= i* and every J,
// values[(i, J)] == w.
struct RoundValueTable {
    int special_round = 0; // i*
    Value final_output = 0; // w
    std::vector<Value> effective_inputs; // x-hat, index j-1
    std::vector<Subset> subsets;         // qualifying J, lexicographic
    std::map<std::pair<int, Subset>, Value> values;

    Value at(int round, Subset j) const { return values.at({round, j}); }
};

struct PartyStatus {
    int party_count = 0;
    Subset initial_aborts = 0; // D0
    Subset aborted = 0;        // D, always a superset of D0

    Subset active() const { return full_set(party_count) & ~aborted; }
};

struct DealerPreprocessResult {
    bool premature_at_one = false;
    RoundValueTable table;
    PartyStatus status;
};

enum class Termination { Normal, Premature };

struct RunResult {
    Termination termination = Termination::Normal;
    int termination_round = 0; // premature round, or r on normal termination
    int special_round = 0;     // 0 if termination preceded the draw of i*
    std::optional<Value> honest_output; // empty only when the simulator fails
    bool simulator_failed = false;      // range-variant bottom outcome
    int hybrid_calls = 0;               // dealer-free engine bookkeeping
    int honest_majority_violations = 0;
    Transcript transcript;
};

// Case-I / Case-II value selection shared by the dealer engine and the
// share-generation functionality; both draw from the same stream layout so
// matched seeds produce identical tables.
RoundValueTable build_round_value_table(const ProtocolConfig& config,
                                        const std::vector<Value>& effective_inputs,
                                        Subset initial_aborts, int round_count,
                                        Variant variant, RngStream& rng);

// Range-variant selection for rounds before i*: with probability 1/(2p) a
// uniform range value, otherwise the Case-I computation.
Value range_variant_value(const ProtocolConfig& config, const std::vector<Value>& inputs,
                          Subset j_set, RngStream& rng);

DealerPreprocessResult dealer_preprocess(const ProtocolConfig& config,
                                         const std::vector<std::optional<Value>>& submitted,
                                         Variant variant, RngStream& dealer_rng,
                                         RngStream& substitution_rng);

// The peeking phase: values of exactly the fully-corrupt qualifying sets.
std::map<Subset, Value> peek_values(const RoundValueTable& table, int round,
                                    Subset corrupt, const PartyStatus& status);

// Applies an abort list; true means premature termination was triggered.
bool process_abort_phase(PartyStatus& status, const std::vector<int>& abort_list,
                         int corruption_bound);

// Rejects abort lists naming parties the adversary does not control or has
// already aborted. Shared by both engines.
void check_abort_list(const std::vector<int>& list, const ProtocolConfig& config,
                      const PartyStatus& status);

// Premature termination for rounds > 1: applies the late aborts atomically,
// then returns the stored value of the remaining set.
Value premature_terminate(const RoundValueTable& table, PartyStatus& status, int round,
                          const std::vector<int>& late_aborts, int corruption_bound);

RunResult run_dealer_protocol(const ProtocolConfig& config,
                              const std::vector<Value>& true_inputs,
                              AdversaryStrategy& adversary, Variant variant,
                              const std::vector<uint8_t>& aux = {});

} // namespace fmpc

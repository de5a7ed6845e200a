#include "fmpc/dealer_model.hpp"

#include <algorithm>
#include <sstream>

#include "fmpc/encoding.hpp"

namespace fmpc {

namespace {

std::string subset_label(Subset s) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (int j : subset_members(s)) {
        if (!first) {
            out << ',';
        }
        out << j;
        first = false;
    }
    out << '}';
    return out.str();
}

std::string value_hex(Value v) {
    Encoder enc;
    enc.put_u32(v);
    return to_hex(enc.bytes());
}

// 1/(2p) as an exact fraction.
std::pair<uint64_t, uint64_t> half_inverse_p(const Rational& p) {
    const auto num = boost::multiprecision::numerator(p).convert_to<uint64_t>();
    const auto den = boost::multiprecision::denominator(p).convert_to<uint64_t>();
    return {den, 2 * num};
}

Value case_one_value(const FunctionalitySpec& spec, const std::vector<Value>& inputs,
                     Subset j_set, RngStream& rng) {
    std::vector<Value> tuple(inputs);
    for (int j = 1; j <= spec.party_count(); ++j) {
        if (!subset_contains(j_set, j)) {
            tuple[j - 1] = spec.sample_uniform_input(rng);
        }
    }
    return spec.evaluate_with_rng(tuple, rng);
}

} // namespace

void check_abort_list(const std::vector<int>& list, const ProtocolConfig& config,
                      const PartyStatus& status) {
    Subset seen = 0;
    for (int j : list) {
        if (j < 1 || j > status.party_count || !subset_contains(config.corrupt_indices, j)) {
            throw ContractViolation("adversary aborted a party it does not control");
        }
        if (subset_contains(status.aborted, j) || subset_contains(seen, j)) {
            throw ContractViolation("adversary aborted an already-aborted party");
        }
        seen = subset_add(seen, j);
    }
}

Value range_variant_value(const ProtocolConfig& config, const std::vector<Value>& inputs,
                          Subset j_set, RngStream& rng) {
    const auto [num, den] = half_inverse_p(config.fairness_parameter);
    if (rng.bernoulli(num, den)) {
        return static_cast<Value>(
            rng.uniform_bits(static_cast<unsigned>(config.functionality.range_bits())));
    }
    return case_one_value(config.functionality, inputs, j_set, rng);
}

RoundValueTable build_round_value_table(const ProtocolConfig& config,
                                        const std::vector<Value>& effective_inputs,
                                        Subset initial_aborts, int round_count,
                                        Variant variant, RngStream& rng) {
    const auto& spec = config.functionality;
    RoundValueTable table;
    table.effective_inputs = effective_inputs;
    table.subsets = qualifying_subsets(spec.party_count(), config.corruption_bound,
                                       initial_aborts);
    table.final_output = spec.evaluate_with_rng(effective_inputs, rng);
    table.special_round = 1 + static_cast<int>(rng.uniform_below(round_count));
    for (int i = 1; i < table.special_round; ++i) {
        for (Subset j_set : table.subsets) {
            // Fresh randomness per (i, J); never cached across sets.
            const Value v = variant == Variant::Range
                                ? range_variant_value(config, effective_inputs, j_set, rng)
                                : case_one_value(spec, effective_inputs, j_set, rng);
            table.values[{i, j_set}] = v;
        }
    }
    for (int i = table.special_round; i <= round_count; ++i) {
        for (Subset j_set : table.subsets) {
            table.values[{i, j_set}] = table.final_output;
        }
    }
    return table;
}

DealerPreprocessResult dealer_preprocess(const ProtocolConfig& config,
                                         const std::vector<std::optional<Value>>& submitted,
                                         Variant variant, RngStream& dealer_rng,
                                         RngStream& substitution_rng) {
    const auto& spec = config.functionality;
    const int m = spec.party_count();
    if (static_cast<int>(submitted.size()) != m) {
        throw std::invalid_argument("dealer_preprocess: need one submission slot per party");
    }
    DealerPreprocessResult res;
    res.status.party_count = m;
    std::vector<Value> effective(m, 0);
    for (int j = 1; j <= m; ++j) {
        const auto& slot = submitted[j - 1];
        // A malformed value is an abort in protocol semantics, not an error.
        if (!slot.has_value() || *slot >= spec.domain_size()) {
            res.status.initial_aborts = subset_add(res.status.initial_aborts, j);
            effective[j - 1] = spec.sample_uniform_input(substitution_rng);
        } else {
            effective[j - 1] = *slot;
        }
    }
    res.status.aborted = res.status.initial_aborts;
    if (subset_size(res.status.aborted) >= m - config.corruption_bound) {
        res.premature_at_one = true;
        res.table.effective_inputs = effective;
        return res;
    }
    res.table = build_round_value_table(config, effective, res.status.initial_aborts,
                                        config.rounds_small(), variant, dealer_rng);
    return res;
}

std::map<Subset, Value> peek_values(const RoundValueTable& table, int round, Subset corrupt,
                                    const PartyStatus& status) {
    std::map<Subset, Value> out;
    const Subset fully_corrupt = corrupt & ~status.initial_aborts;
    for (Subset j_set : table.subsets) {
        if ((j_set & ~fully_corrupt) == 0) {
            out[j_set] = table.at(round, j_set);
        }
    }
    return out;
}

bool process_abort_phase(PartyStatus& status, const std::vector<int>& abort_list,
                         int corruption_bound) {
    for (int j : abort_list) {
        status.aborted = subset_add(status.aborted, j);
    }
    return subset_size(status.aborted) >= status.party_count - corruption_bound;
}

Value premature_terminate(const RoundValueTable& table, PartyStatus& status, int round,
                          const std::vector<int>& late_aborts, int corruption_bound) {
    (void)corruption_bound;
    if (round <= 1) {
        throw std::invalid_argument("premature_terminate: round 1 re-collects inputs instead");
    }
    for (int j : late_aborts) {
        status.aborted = subset_add(status.aborted, j);
    }
    const Subset j_set = status.active();
    return table.at(round - 1, j_set);
}

RunResult run_dealer_protocol(const ProtocolConfig& config,
                              const std::vector<Value>& true_inputs,
                              AdversaryStrategy& adversary, Variant variant,
                              const std::vector<uint8_t>& aux) {
    config.validate();
    const auto& spec = config.functionality;
    const int m = spec.party_count();
    const int t = config.corruption_bound;
    const int r = config.rounds_small();
    if (static_cast<int>(true_inputs.size()) != m) {
        throw std::invalid_argument("run_dealer_protocol: need one input per party");
    }

    RngStream dealer_rng(derive_seed(config.master_seed, "dealer"));
    RngStream substitution_rng(derive_seed(config.master_seed, "substitution"));
    adversary.begin_execution(config, derive_seed(config.master_seed, "adversary"), aux);

    RunResult result;
    auto& tr = result.transcript;

    // Input submission: honest parties send their inputs; the adversary
    // decides for the corrupt ones.
    std::vector<int> corrupt;
    std::map<int, Value> corrupt_true;
    for (int j : subset_members(config.corrupt_indices)) {
        corrupt.push_back(j);
        corrupt_true[j] = true_inputs[j - 1];
    }
    const auto decisions = adversary.provide_inputs(corrupt, corrupt_true);
    std::vector<std::optional<Value>> submitted(m);
    for (int j = 1; j <= m; ++j) {
        if (!subset_contains(config.corrupt_indices, j)) {
            submitted[j - 1] = true_inputs[j - 1];
        } else if (auto it = decisions.find(j); it != decisions.end() && !it->second.abort) {
            submitted[j - 1] = it->second.value;
        }
        tr.record(0, Phase::Input, "p" + std::to_string(j),
                  submitted[j - 1] ? value_hex(*submitted[j - 1]) : "abort");
    }

    auto pre = dealer_preprocess(config, submitted, variant, dealer_rng, substitution_rng);
    auto& status = pre.status;

    const auto premature_round_one = [&]() {
        tr.record(1, Phase::Premature, "dealer", "i=1");
        std::vector<int> corrupt_active;
        for (int j : corrupt) {
            if (!subset_contains(status.aborted, j)) {
                corrupt_active.push_back(j);
            }
        }
        const auto again = adversary.provide_inputs_again(corrupt_active);
        std::vector<Value> inputs(m, 0);
        for (int j = 1; j <= m; ++j) {
            if (subset_contains(status.aborted, j)) {
                inputs[j - 1] = spec.sample_uniform_input(substitution_rng);
                continue;
            }
            if (!subset_contains(config.corrupt_indices, j)) {
                inputs[j - 1] = true_inputs[j - 1];
                continue;
            }
            auto it = again.find(j);
            if (it == again.end() || it->second.abort || it->second.value >= spec.domain_size()) {
                status.aborted = subset_add(status.aborted, j);
                inputs[j - 1] = spec.sample_uniform_input(substitution_rng);
            } else {
                inputs[j - 1] = it->second.value;
            }
        }
        const Value w = spec.evaluate_with_rng(inputs, dealer_rng);
        tr.record(1, Phase::Deliver, "dealer", value_hex(w));
        result.termination = Termination::Premature;
        result.termination_round = 1;
        result.honest_output = w;
    };

    if (pre.premature_at_one) {
        premature_round_one();
        return result;
    }
    result.special_round = pre.table.special_round;

    for (int i = 1; i <= r; ++i) {
        const auto peeked = peek_values(pre.table, i, config.corrupt_indices, status);
        for (const auto& [j_set, v] : peeked) {
            tr.record(i, Phase::Peek, "dealer->" + subset_label(j_set), value_hex(v));
        }
        const auto aborts = adversary.on_peek(i, peeked);
        check_abort_list(aborts, config, status);
        for (int j : aborts) {
            tr.record(i, Phase::Abort, "p" + std::to_string(j), "abort");
        }
        if (process_abort_phase(status, aborts, t)) {
            if (i == 1) {
                premature_round_one();
                return result;
            }
            const auto late = adversary.on_premature(i);
            check_abort_list(late, config, status);
            for (int j : late) {
                tr.record(i, Phase::Abort, "p" + std::to_string(j), "late-abort");
            }
            const Value w = premature_terminate(pre.table, status, i, late, t);
            tr.record(i, Phase::Premature, "dealer", subset_label(status.active()));
            tr.record(i, Phase::Deliver, "dealer", value_hex(w));
            result.termination = Termination::Premature;
            result.termination_round = i;
            result.honest_output = w;
            return result;
        }
        tr.record(i, Phase::Main, "dealer", "proceed");
    }

    tr.record(r, Phase::Deliver, "dealer", value_hex(pre.table.final_output));
    result.termination = Termination::Normal;
    result.termination_round = r;
    result.honest_output = pre.table.final_output;
    return result;
}

} // namespace fmpc

#include "fmpc/adversary.hpp"

#include <algorithm>

#include "fmpc/encoding.hpp"

namespace fmpc {

void AdversaryStrategy::begin_execution(const ProtocolConfig& config, uint64_t seed,
                                        std::vector<uint8_t> aux) {
    config_ = &config;
    aux_ = std::move(aux);
    submitted_.clear();
    rng_ = std::make_unique<RngStream>(seed);
}

std::map<int, InputDecision> AdversaryStrategy::provide_inputs(
    const std::vector<int>& corrupt_active, const std::map<int, Value>& true_inputs) {
    std::map<int, InputDecision> out;
    for (int j : corrupt_active) {
        const Value v = true_inputs.at(j);
        out[j] = {false, v};
        submitted_[j] = v;
    }
    return out;
}

std::map<int, InputDecision> AdversaryStrategy::provide_inputs_again(
    const std::vector<int>& corrupt_active) {
    std::map<int, InputDecision> out;
    for (int j : corrupt_active) {
        auto it = submitted_.find(j);
        out[j] = {it == submitted_.end(), it == submitted_.end() ? 0 : it->second};
    }
    return out;
}

std::vector<int> AdversaryStrategy::on_peek(int, const std::map<Subset, Value>&) {
    return {};
}

std::vector<int> AdversaryStrategy::on_premature(int) {
    return {};
}

std::optional<int> AdversaryStrategy::on_packages(const std::vector<const PartyPackage*>&) {
    return std::nullopt;
}

std::map<int, BroadcastSlot> AdversaryStrategy::on_broadcast(
    int, const std::map<int, std::vector<uint8_t>>&, const std::vector<int>& planned_silent) {
    std::map<int, BroadcastSlot> out;
    for (int j : planned_silent) {
        out[j] = {SlotAction::Silent, {}};
    }
    return out;
}

std::map<int, ReconAction> AdversaryStrategy::on_reconstruction_input(
    int, const std::vector<int>& corrupt_active) {
    std::map<int, ReconAction> out;
    for (int j : corrupt_active) {
        out[j] = ReconAction::Honest;
    }
    return out;
}

std::vector<uint8_t> aux_from_inputs(const std::map<int, Value>& honest_inputs) {
    Encoder enc;
    enc.put_u32(static_cast<uint32_t>(honest_inputs.size()));
    for (const auto& [j, v] : honest_inputs) {
        enc.put_u32(static_cast<uint32_t>(j));
        enc.put_u32(v);
    }
    return enc.take();
}

std::map<int, Value> inputs_from_aux(const std::vector<uint8_t>& aux) {
    std::map<int, Value> out;
    if (aux.empty()) {
        return out;
    }
    Decoder dec(aux);
    const uint32_t count = dec.get_u32();
    for (uint32_t i = 0; i < count; ++i) {
        const int j = static_cast<int>(dec.get_u32());
        out[j] = dec.get_u32();
    }
    return out;
}

std::unique_ptr<AdversaryStrategy> honest_strategy() {
    return std::make_unique<AdversaryStrategy>();
}

namespace {

class ScheduledAborter : public AdversaryStrategy {
public:
    explicit ScheduledAborter(std::vector<std::pair<int, std::vector<int>>> schedule)
        : schedule_(std::move(schedule)) {}

    std::vector<int> on_peek(int round, const std::map<Subset, Value>&) override {
        std::vector<int> out;
        for (const auto& [k, parties] : schedule_) {
            if (k == round) {
                out.insert(out.end(), parties.begin(), parties.end());
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::vector<std::pair<int, std::vector<int>>> schedule_;
};

class ThresholdGuesser : public AdversaryStrategy {
public:
    explicit ThresholdGuesser(ThresholdGuesserConfig cfg) : cfg_(std::move(cfg)) {}

    void begin_execution(const ProtocolConfig& config, uint64_t seed,
                         std::vector<uint8_t> aux) override {
        AdversaryStrategy::begin_execution(config, seed, std::move(aux));
        fired_ = false;
    }

    std::vector<int> on_peek(int round, const std::map<Subset, Value>& peeked) override {
        if (fired_ || peeked.empty()) {
            return {};
        }
        std::map<int, Value> all_inputs = submitted_;
        for (const auto& [j, v] : inputs_from_aux(aux_)) {
            all_inputs.emplace(j, v);
        }
        const bool fire = cfg_.target_predicate
                              ? cfg_.target_predicate(round, peeked, all_inputs,
                                                      config_->functionality)
                              : default_predicate(peeked, all_inputs);
        if (!fire) {
            return {};
        }
        fired_ = true;
        // Abort the m-t lowest-indexed corrupt parties: enough to force
        // premature termination in this round.
        const int m = config_->functionality.party_count();
        const int needed = m - config_->corruption_bound;
        std::vector<int> out;
        for (int j : subset_members(config_->corrupt_indices)) {
            if (static_cast<int>(out.size()) == needed) {
                break;
            }
            out.push_back(j);
        }
        return out;
    }

private:
    bool default_predicate(const std::map<Subset, Value>& peeked,
                           const std::map<int, Value>& all_inputs) const {
        const Value first = peeked.begin()->second;
        for (const auto& [_, v] : peeked) {
            if (v != first) {
                return false;
            }
        }
        const auto& spec = config_->functionality;
        if (static_cast<int>(all_inputs.size()) < spec.party_count()) {
            return true; // aux does not pin the honest inputs; equality is all we have
        }
        std::vector<Value> tuple;
        for (int j = 1; j <= spec.party_count(); ++j) {
            tuple.push_back(all_inputs.at(j));
        }
        if (spec.kind() == FunctionKind::Deterministic) {
            return first == spec.evaluate(tuple);
        }
        for (const auto& [w, mass] : spec.output_distribution(tuple)) {
            if (w == first && mass > 0) {
                return true;
            }
        }
        return false;
    }

    ThresholdGuesserConfig cfg_;
    bool fired_ = false;
};

} // namespace

std::unique_ptr<AdversaryStrategy> fixed_round_aborter(int k, std::vector<int> subset) {
    return std::make_unique<ScheduledAborter>(
        std::vector<std::pair<int, std::vector<int>>>{{k, std::move(subset)}});
}

std::unique_ptr<AdversaryStrategy> scheduled_aborter(
    std::vector<std::pair<int, std::vector<int>>> schedule) {
    return std::make_unique<ScheduledAborter>(std::move(schedule));
}

std::unique_ptr<AdversaryStrategy> threshold_guesser(ThresholdGuesserConfig config) {
    return std::make_unique<ThresholdGuesser>(std::move(config));
}

} // namespace fmpc

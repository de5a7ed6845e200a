#include "fmpc/dealerless.hpp"

#include <algorithm>
#include <stdexcept>

#include "fmpc/encoding.hpp"

namespace fmpc {

namespace {

std::string party_name(int j) {
    return "p" + std::to_string(j);
}

std::string value_hex(Value v) {
    Encoder enc;
    enc.put_u32(v);
    return to_hex(enc.bytes());
}

void note_majority(RunResult& result, Subset aborted, Subset corrupt, int m) {
    const Subset active = full_set(m) & ~aborted;
    const int honest = subset_size(active & ~corrupt);
    const int corrupted = subset_size(active & corrupt);
    if (honest <= corrupted) {
        ++result.honest_majority_violations;
    }
}

} // namespace

std::vector<uint8_t> encode_slot(const SignedPayload& message) {
    Encoder enc;
    enc.put_bytes(message.message);
    enc.put_bytes(message.signature);
    return enc.take();
}

std::optional<RoundMessage> validate_round_message(
    const std::optional<std::vector<uint8_t>>& slot,
    std::span<const uint8_t> verification_key, int expected_sender, int expected_round,
    const SignatureProvider& sigs) {
    if (!slot.has_value()) {
        return std::nullopt;
    }
    try {
        Decoder dec(*slot);
        const auto message = dec.get_bytes();
        const auto signature = dec.get_bytes();
        if (!dec.at_end() || !sigs.verify(message, signature, verification_key)) {
            return std::nullopt;
        }
        auto parsed = parse_round_message(message);
        if (parsed.sender != expected_sender || parsed.round != expected_round) {
            return std::nullopt;
        }
        return parsed;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

SignedInnerShare unmask_inner_share(const ByteSecret& masking_payload, int holder,
                                    const std::vector<IndexedShare>& complements,
                                    int threshold, int expected_round, Subset expected_set,
                                    std::span<const uint8_t> verification_key,
                                    const SignatureProvider& sigs) {
    const IndexedShare masking{holder, SchemeTag::Masking, masking_payload};
    auto sorted = complements;
    std::sort(sorted.begin(), sorted.end(),
              [](const IndexedShare& a, const IndexedShare& b) {
                  return a.holder_index < b.holder_index;
              });
    SignedInnerShare share;
    try {
        share = SignedInnerShare::parse(
            reconstruct_with_respect_to(masking, sorted, threshold));
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error(std::string("unmask_inner_share: ") + err.what());
    }
    if (share.round != expected_round || share.j_set != expected_set ||
        share.holder != holder ||
        !sigs.verify(share.signed_portion(), share.signature, verification_key)) {
        throw std::runtime_error("unmask_inner_share: recovered share fails verification");
    }
    return share;
}

ReconResult reconstruction_functionality(
    int m, int value_round,
    const std::map<int, std::map<Subset, SignedInnerShare>>& submissions, Subset d,
    std::span<const uint8_t> verification_key, const SignatureProvider& sigs) {
    ReconResult out;
    out.d = d;
    for (int j = 1; j <= m; ++j) {
        if (subset_contains(out.d, j)) {
            continue;
        }
        const auto it = submissions.find(j);
        bool ok = it != submissions.end();
        if (ok) {
            for (const auto& [j_set, share] : it->second) {
                if (share.round != value_round || share.holder != j ||
                    share.j_set != j_set || !subset_contains(j_set, j) ||
                    !sigs.verify(share.signed_portion(), share.signature,
                                 verification_key)) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) {
            out.d = subset_add(out.d, j);
        }
    }
    for (;;) {
        const Subset j_set = full_set(m) & ~out.d;
        if (j_set == 0) {
            throw std::invalid_argument("reconstruction_functionality: no valid parties");
        }
        bool grown = false;
        for (int j : subset_members(j_set)) {
            if (!submissions.at(j).contains(j_set)) {
                out.d = subset_add(out.d, j);
                grown = true;
            }
        }
        if (grown) {
            continue;
        }
        ByteSecret acc(4, 0);
        for (int j : subset_members(j_set)) {
            const auto& payload = submissions.at(j).at(j_set).payload;
            for (size_t k = 0; k < acc.size(); ++k) {
                acc[k] ^= payload.at(k);
            }
        }
        out.j_set = j_set;
        out.value = bytes_value(acc);
        return out;
    }
}

Value fair_mpc_functionality(const FunctionalitySpec& spec,
                             const std::vector<std::optional<Value>>& inputs,
                             RngStream& coin_rng, RngStream& substitution_rng) {
    if (static_cast<int>(inputs.size()) != spec.party_count()) {
        throw std::invalid_argument("fair_mpc_functionality: need one slot per party");
    }
    std::vector<Value> tuple(inputs.size());
    for (size_t k = 0; k < inputs.size(); ++k) {
        tuple[k] = (inputs[k].has_value() && *inputs[k] < spec.domain_size())
                       ? *inputs[k]
                       : spec.sample_uniform_input(substitution_rng);
    }
    return spec.evaluate_with_rng(tuple, coin_rng);
}

RunResult run_mpc(const ProtocolConfig& config, const std::vector<Value>& true_inputs,
                  AdversaryStrategy& adversary, Variant variant,
                  const std::vector<uint8_t>& aux) {
    config.validate();
    const auto& spec = config.functionality;
    const int m = spec.party_count();
    const int t = config.corruption_bound;
    const int r = config.rounds_small();
    const Subset corrupt = config.corrupt_indices;
    if (static_cast<int>(true_inputs.size()) != m) {
        throw std::invalid_argument("run_mpc: need one input per party");
    }

    RegistrySignatureProvider sigs;
    RngStream dealer_rng(derive_seed(config.master_seed, "dealer"));
    RngStream substitution_rng(derive_seed(config.master_seed, "substitution"));
    RngStream share_rng(derive_seed(config.master_seed, "sharing"));
    adversary.begin_execution(config, derive_seed(config.master_seed, "adversary"), aux);

    RunResult result;
    auto& tr = result.transcript;

    PartyStatus status;
    status.party_count = m;

    // Premature termination at round 1 (or a collapsed preliminary phase):
    // inputs are re-collected and handed to the trusted fallback computation.
    const auto fair_path = [&]() {
        ++result.hybrid_calls;
        note_majority(result, status.aborted, corrupt, m);
        tr.record(1, Phase::Hybrid, "fairmpc", "call");
        std::vector<int> corrupt_active;
        for (int j : subset_members(corrupt & ~status.aborted)) {
            corrupt_active.push_back(j);
        }
        const auto again = adversary.provide_inputs_again(corrupt_active);
        std::vector<std::optional<Value>> inputs(m);
        for (int j = 1; j <= m; ++j) {
            if (subset_contains(status.aborted, j)) {
                continue;
            }
            if (!subset_contains(corrupt, j)) {
                inputs[j - 1] = true_inputs[j - 1];
                continue;
            }
            if (auto it = again.find(j); it != again.end() && !it->second.abort) {
                inputs[j - 1] = it->second.value;
            }
        }
        const Value w = fair_mpc_functionality(spec, inputs, dealer_rng, substitution_rng);
        tr.record(1, Phase::Deliver, "fairmpc", value_hex(w));
        result.termination = Termination::Premature;
        result.termination_round = 1;
        result.honest_output = w;
    };

    // Preliminary phase: repeat the share-generation call, shrinking the
    // participant set by the blamed party each time it aborts.
    std::vector<Value> base = true_inputs;
    bool first_call = true;
    ShareGenResult gen;
    for (;;) {
        if (subset_size(status.initial_aborts) >= m - t) {
            status.aborted = status.initial_aborts;
            fair_path();
            return result;
        }
        ++result.hybrid_calls;
        auto outcome = multi_share_gen_with_abort(config, adversary, first_call, base,
                                                  status.initial_aborts, variant,
                                                  dealer_rng, share_rng, sigs);
        first_call = false;
        if (outcome.completed) {
            tr.record(0, Phase::Hybrid, "sharegen", "complete");
            gen = std::move(outcome.result);
            break;
        }
        tr.record(0, Phase::Hybrid, "sharegen", "blame " + party_name(outcome.blamed));
        status.initial_aborts = subset_add(status.initial_aborts, outcome.blamed);
        base[outcome.blamed - 1] = spec.sample_uniform_input(substitution_rng);
    }
    status.aborted = status.initial_aborts;
    result.special_round = gen.table.special_round;

    const auto& vkey = gen.verification_key;
    const Subset fully_corrupt = corrupt & ~status.initial_aborts;

    // history[i]: messages accepted as valid in round i, by sender.
    std::vector<std::map<int, RoundMessage>> history(r + 1);

    // One party's submission to a reconstruction call: its unmasked signed
    // inner shares of every qualifying set it belongs to, for `value_round`.
    const auto unmask_all = [&](int j, int value_round) {
        std::map<Subset, SignedInnerShare> out;
        for (Subset j_set : gen.table.subsets) {
            if (!subset_contains(j_set, j)) {
                continue;
            }
            std::vector<IndexedShare> comps;
            for (const auto& [q, msg] : history[value_round]) {
                if (q == j) {
                    continue;
                }
                if (auto it = msg.complement_shares.find({j_set, j});
                    it != msg.complement_shares.end()) {
                    comps.push_back({q, SchemeTag::Complement, it->second});
                }
            }
            out.emplace(j_set, unmask_inner_share(
                                   gen.packages[j - 1].masking_shares.at({value_round, j_set}),
                                   j, comps, t + 1, value_round, j_set, vkey, sigs));
        }
        return out;
    };

    const auto recon_submissions = [&](int value_round,
                                       const std::map<int, ReconAction>& actions) {
        std::map<int, std::map<Subset, SignedInnerShare>> subs;
        for (int j = 1; j <= m; ++j) {
            if (subset_contains(status.aborted, j)) {
                continue;
            }
            auto action = ReconAction::Honest;
            if (auto it = actions.find(j); it != actions.end()) {
                action = it->second;
            }
            if (action == ReconAction::Silent) {
                continue;
            }
            auto shares = unmask_all(j, value_round);
            if (action == ReconAction::Garbage) {
                for (auto& [_, share] : shares) {
                    share.signature[0] ^= 0xff;
                }
            }
            subs.emplace(j, std::move(shares));
        }
        return subs;
    };

    const auto active_corrupt_list = [&]() {
        std::vector<int> out;
        for (int j : subset_members(corrupt & ~status.aborted)) {
            out.push_back(j);
        }
        return out;
    };

    const auto premature_path = [&](int round) {
        const int value_round = round - 1;
        ++result.hybrid_calls;
        note_majority(result, status.aborted, corrupt, m);
        tr.record(round, Phase::Hybrid, "reconstruction", "call");
        const auto actions = adversary.on_reconstruction_input(round, active_corrupt_list());
        const auto rec = reconstruction_functionality(
            m, value_round, recon_submissions(value_round, actions), status.aborted, vkey,
            sigs);
        status.aborted = rec.d;
        tr.record(round, Phase::Premature, "reconstruction", value_hex(rec.value));
        result.termination = Termination::Premature;
        result.termination_round = round;
        result.honest_output = rec.value;
    };

    for (int i = 1; i <= r; ++i) {
        // Honest parties post first; the adversary reads them before acting.
        std::map<int, std::vector<uint8_t>> honest_slots;
        for (int j = 1; j <= m; ++j) {
            if (!subset_contains(corrupt, j) && !subset_contains(status.aborted, j)) {
                honest_slots[j] = encode_slot(gen.packages[j - 1].round_messages[i - 1]);
            }
        }

        // The engine unmasks the round values of fully corrupt qualifying
        // sets on the adversary's behalf: it holds those parties' packages,
        // and the honest complement shares are already on the board.
        std::map<int, RoundMessage> visible;
        for (int q = 1; q <= m; ++q) {
            if (subset_contains(fully_corrupt, q)) {
                visible.emplace(
                    q, parse_round_message(gen.packages[q - 1].round_messages[i - 1].message));
            } else if (auto it = honest_slots.find(q); it != honest_slots.end()) {
                visible.emplace(q, parse_round_message(
                                       gen.packages[q - 1].round_messages[i - 1].message));
            }
        }
        std::map<Subset, Value> peeked;
        for (Subset j_set : gen.table.subsets) {
            if ((j_set & ~fully_corrupt) != 0) {
                continue;
            }
            ByteSecret acc(4, 0);
            for (int j : subset_members(j_set)) {
                std::vector<IndexedShare> comps;
                for (const auto& [q, msg] : visible) {
                    if (q == j) {
                        continue;
                    }
                    if (auto it = msg.complement_shares.find({j_set, j});
                        it != msg.complement_shares.end()) {
                        comps.push_back({q, SchemeTag::Complement, it->second});
                    }
                }
                const auto share = unmask_inner_share(
                    gen.packages[j - 1].masking_shares.at({i, j_set}), j, comps, t + 1, i,
                    j_set, vkey, sigs);
                for (size_t k = 0; k < acc.size(); ++k) {
                    acc[k] ^= share.payload.at(k);
                }
            }
            peeked[j_set] = bytes_value(acc);
            tr.record(i, Phase::Peek, "board", value_hex(peeked[j_set]));
        }

        const auto aborts = adversary.on_peek(i, peeked);
        check_abort_list(aborts, config, status);
        const auto corrupt_slots = adversary.on_broadcast(i, honest_slots, aborts);

        std::map<int, std::optional<std::vector<uint8_t>>> board;
        for (const auto& [j, bytes] : honest_slots) {
            board[j] = bytes;
        }
        for (int j : subset_members(corrupt & ~status.aborted)) {
            auto action = BroadcastSlot{};
            if (auto it = corrupt_slots.find(j); it != corrupt_slots.end()) {
                action = it->second;
            }
            switch (action.action) {
            case SlotAction::Verbatim:
                board[j] = encode_slot(gen.packages[j - 1].round_messages[i - 1]);
                break;
            case SlotAction::Silent:
                board[j] = std::nullopt;
                break;
            case SlotAction::Replace:
                board[j] = action.bytes;
                break;
            }
        }

        // All slots are judged together, then the abort threshold is tested
        // once for the round.
        for (const auto& [j, slot] : board) {
            auto parsed = validate_round_message(slot, vkey, j, i, sigs);
            if (parsed.has_value()) {
                history[i].emplace(j, std::move(*parsed));
            } else {
                status.aborted = subset_add(status.aborted, j);
                tr.record(i, Phase::Broadcast, party_name(j),
                          slot.has_value() ? "invalid" : "silent");
            }
        }

        if (subset_size(status.aborted) >= m - t) {
            if (i == 1) {
                fair_path();
            } else {
                premature_path(i);
            }
            return result;
        }
        tr.record(i, Phase::Main, "board", "proceed");
    }

    // Final reconstruction: every active party reveals its round-r inner
    // shares; the first fully-signed qualifying set by set order decides.
    const auto actions = adversary.on_reconstruction_input(r, active_corrupt_list());
    const auto subs = recon_submissions(r, actions);
    const auto valid_for = [&](int j, Subset j_set) {
        const auto it = subs.find(j);
        if (it == subs.end()) {
            return false;
        }
        const auto sh = it->second.find(j_set);
        return sh != it->second.end() && sh->second.round == r &&
               sh->second.holder == j && sh->second.j_set == j_set &&
               sigs.verify(sh->second.signed_portion(), sh->second.signature, vkey);
    };
    std::vector<Subset> candidates;
    for (Subset j_set : gen.table.subsets) {
        if ((j_set & status.aborted) != 0) {
            continue;
        }
        if (std::ranges::all_of(subset_members(j_set),
                                [&](int j) { return valid_for(j, j_set); })) {
            candidates.push_back(j_set);
        }
    }
    if (candidates.empty()) {
        // Everyone able to complete a set withheld its share; fall back to
        // the premature machinery one round back.
        if (r == 1) {
            fair_path();
        } else {
            premature_path(r);
        }
        return result;
    }
    const Subset chosen = *std::min_element(candidates.begin(), candidates.end(),
                                            subset_lex_less);
    ByteSecret acc(4, 0);
    for (int j : subset_members(chosen)) {
        const auto& payload = subs.at(j).at(chosen).payload;
        for (size_t k = 0; k < acc.size(); ++k) {
            acc[k] ^= payload.at(k);
        }
    }
    const Value w = bytes_value(acc);
    tr.record(r, Phase::Deliver, "board", value_hex(w));
    result.termination = Termination::Normal;
    result.termination_round = r;
    result.honest_output = w;
    return result;
}

} // namespace fmpc

#include "fmpc/analysis.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace fmpc {

namespace {

BigInt bigint_pow(BigInt base, uint64_t exp) {
    BigInt out{1};
    while (exp != 0) {
        if (exp & 1) {
            out *= base;
        }
        base *= base;
        exp >>= 1;
    }
    return out;
}

Rational rational_pow(const Rational& base, uint64_t exp) {
    return Rational(bigint_pow(boost::multiprecision::numerator(base), exp),
                    bigint_pow(boost::multiprecision::denominator(base), exp));
}

Rational abs_diff(const Rational& a, const Rational& b) {
    return a >= b ? a - b : b - a;
}

std::map<Value, Rational> output_map(const FunctionalitySpec& spec,
                                     const std::vector<Value>& inputs) {
    std::map<Value, Rational> out;
    for (const auto& [w, mass] : spec.output_distribution(inputs)) {
        out[w] += mass;
    }
    return out;
}

} // namespace

Rational statistical_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (a.trials == 0 || b.trials == 0) {
        throw std::invalid_argument("statistical_distance: empty distribution");
    }
    std::set<uint64_t> keys;
    for (const auto& [k, _] : a.counts) {
        keys.insert(k);
    }
    for (const auto& [k, _] : b.counts) {
        keys.insert(k);
    }
    Rational sum{0};
    for (uint64_t k : keys) {
        const auto ita = a.counts.find(k);
        const auto itb = b.counts.find(k);
        const Rational pa(ita == a.counts.end() ? 0 : ita->second, a.trials);
        const Rational pb(itb == b.counts.end() ? 0 : itb->second, b.trials);
        sum += abs_diff(pa, pb);
    }
    return sum / 2;
}

Rational statistical_distance(const ExactDistribution& a, const ExactDistribution& b) {
    std::set<uint64_t> keys;
    for (const auto& [k, _] : a) {
        keys.insert(k);
    }
    for (const auto& [k, _] : b) {
        keys.insert(k);
    }
    Rational sum{0};
    for (uint64_t k : keys) {
        const auto ita = a.find(k);
        const auto itb = b.find(k);
        sum += abs_diff(ita == a.end() ? Rational{0} : ita->second,
                        itb == b.end() ? Rational{0} : itb->second);
    }
    return sum / 2;
}

Rational statistical_distance(const EmpiricalDistribution& a, const ExactDistribution& b) {
    if (a.trials == 0) {
        throw std::invalid_argument("statistical_distance: empty distribution");
    }
    ExactDistribution ea;
    for (const auto& [k, n] : a.counts) {
        ea[k] = Rational(n, a.trials);
    }
    return statistical_distance(ea, b);
}

ExactDistribution substituted_distribution(const FunctionalitySpec& spec,
                                           const std::vector<Value>& inputs,
                                           Subset substituted) {
    const auto positions = subset_members(substituted);
    const uint64_t d = spec.domain_size();
    uint64_t combos = 1;
    for (size_t k = 0; k < positions.size(); ++k) {
        combos *= d;
    }
    const Rational weight(1, combos);
    ExactDistribution out;
    std::vector<Value> tuple = inputs;
    for (uint64_t idx = 0; idx < combos; ++idx) {
        uint64_t rest = idx;
        for (int pos : positions) {
            tuple[pos - 1] = static_cast<Value>(rest % d);
            rest /= d;
        }
        for (const auto& [w, mass] : spec.output_distribution(tuple)) {
            out[w] += mass * weight;
        }
    }
    return out;
}

Rational alpha_exact(const ProtocolConfig& config, const std::vector<Value>& inputs,
                     Variant variant) {
    const auto& spec = config.functionality;
    const int m = spec.party_count();
    if (bigint_pow(BigInt(spec.domain_size()), m) * bigint_pow(2, spec.coin_bits()) >
        BigInt(1) << 20) {
        throw CapacityError("alpha_exact: enumeration budget exceeded");
    }
    std::vector<Subset> visible;
    for (Subset j_set : qualifying_subsets(m, config.corruption_bound, 0)) {
        if ((j_set & ~config.corrupt_indices) == 0) {
            visible.push_back(j_set);
        }
    }
    if (visible.empty()) {
        return Rational{1};
    }
    std::vector<ExactDistribution> dists;
    for (Subset j_set : visible) {
        auto dist = substituted_distribution(spec, inputs, full_set(m) & ~j_set);
        if (variant == Variant::Range) {
            const Rational half_inv = Rational(1) / (2 * config.fairness_parameter);
            const Rational uniform(1, spec.range_size());
            for (auto& [_, mass] : dist) {
                mass *= (1 - half_inv);
            }
            for (uint64_t w = 0; w < spec.range_size(); ++w) {
                dist[static_cast<Value>(w)] += half_inv * uniform;
            }
        }
        dists.push_back(std::move(dist));
    }
    std::optional<Rational> alpha;
    for (const auto& [w, mass] : output_map(spec, inputs)) {
        if (mass == 0) {
            continue;
        }
        Rational prod{1};
        for (const auto& dist : dists) {
            const auto it = dist.find(w);
            prod *= it == dist.end() ? Rational{0} : it->second;
        }
        if (!alpha || prod < *alpha) {
            alpha = prod;
        }
    }
    return alpha.value_or(Rational{0});
}

double BoundReport::sd_bound_value() const {
    if (variant == Variant::Range) {
        return range_bound.convert_to<double>();
    }
    return deterministic ? deterministic_bound.convert_to<double>() : randomized_proof;
}

std::string BoundReport::to_line() const {
    std::ostringstream out;
    out << "variant=" << (variant == Variant::Range ? "range" : "domain")
        << " kind=" << (deterministic ? "deterministic" : "randomized") << " d=" << d
        << " g=" << g << " m=" << m << " t=" << t << " r=" << r << " p=" << p;
    if (alpha) {
        out << " alpha=" << *alpha;
    }
    if (guessing_bound) {
        out << " guessing_bound=" << *guessing_bound;
    }
    out << " deterministic_bound=" << deterministic_bound
        << " randomized_stated=" << randomized_stated
        << " randomized_proof=" << randomized_proof << " p0=" << p0
        << " range_bound=" << range_bound;
    if (empirical) {
        out << " empirical=" << *empirical << " radius=" << *radius
            << " pass=" << (*pass ? "yes" : "no");
    }
    return out.str();
}

BoundReport bound_formulas(uint64_t d, uint64_t g, int m, int t, const BigInt& r,
                           const Rational& p, Variant variant, bool deterministic,
                           std::optional<Rational> alpha) {
    BoundReport out;
    out.d = d;
    out.g = g;
    out.m = m;
    out.t = t;
    out.r = r;
    out.p = p;
    out.variant = variant;
    out.deterministic = deterministic;

    const uint64_t exp = uint64_t{1} << t;
    const BigInt dm = bigint_pow(BigInt(d), m);
    out.deterministic_bound = Rational(bigint_pow(dm, exp), r);
    out.randomized_stated = Rational(2 * g * dm, bigint_pow(r, exp));
    const double rd = r.convert_to<double>();
    const double root = std::pow(rd, 1.0 / static_cast<double>(exp));
    out.randomized_proof = 2.0 * static_cast<double>(g) * dm.convert_to<double>() / root;
    out.p0 = root / (static_cast<double>(g) * dm.convert_to<double>());
    out.range_bound =
        rational_pow(2 * p * g, exp) / Rational(r) + Rational(1) / (2 * p);
    if (alpha) {
        out.alpha = alpha;
        if (*alpha > 0) {
            out.guessing_bound = Rational(1) / (*alpha * Rational(r));
        }
    }
    return out;
}

uint64_t summary_key(int cls, Value output, bool failed) {
    return (static_cast<uint64_t>(cls) << 34) | (static_cast<uint64_t>(output) << 1) |
           (failed ? 1 : 0);
}

uint64_t summarize(const RunResult& result) {
    int cls = 2;
    if (result.special_round == 0) {
        cls = 0;
    } else if (result.termination == Termination::Premature) {
        if (result.termination_round < result.special_round) {
            cls = 0;
        } else if (result.termination_round == result.special_round) {
            cls = 1;
        }
    }
    return summary_key(cls, result.honest_output.value_or(0), result.simulator_failed);
}

RunResult simulate_ideal_dealer(const ProtocolConfig& config,
                                const std::vector<Value>& true_inputs,
                                AdversaryStrategy& adversary, Variant variant,
                                const std::vector<uint8_t>& aux) {
    config.validate();
    const auto& spec = config.functionality;
    const int m = spec.party_count();
    const int t = config.corruption_bound;
    const int r = config.rounds_small();
    if (static_cast<int>(true_inputs.size()) != m) {
        throw std::invalid_argument("simulate_ideal_dealer: need one input per party");
    }

    RngStream sim_rng(derive_seed(config.master_seed, "simulator"));
    RngStream trusted_rng(derive_seed(config.master_seed, "dealer"));
    RngStream substitution_rng(derive_seed(config.master_seed, "substitution"));
    adversary.begin_execution(config, derive_seed(config.master_seed, "adversary"), aux);

    RunResult result;
    auto& tr = result.transcript;

    std::vector<int> corrupt;
    std::map<int, Value> corrupt_true;
    for (int j : subset_members(config.corrupt_indices)) {
        corrupt.push_back(j);
        corrupt_true[j] = true_inputs[j - 1];
    }
    const auto decisions = adversary.provide_inputs(corrupt, corrupt_true);
    PartyStatus status;
    status.party_count = m;
    std::map<int, Value> submitted;
    for (int j = 1; j <= m; ++j) {
        if (!subset_contains(config.corrupt_indices, j)) {
            submitted[j] = true_inputs[j - 1];
            continue;
        }
        const auto it = decisions.find(j);
        if (it == decisions.end() || it->second.abort ||
            it->second.value >= spec.domain_size()) {
            status.initial_aborts = subset_add(status.initial_aborts, j);
        } else {
            submitted[j] = it->second.value;
        }
    }
    status.aborted = status.initial_aborts;

    // One call to the trusted party; aborted parties' inputs are substituted
    // uniformly, everyone else's submitted values stand.
    const auto trusted_output = [&]() {
        std::vector<Value> tuple(m);
        for (int j = 1; j <= m; ++j) {
            tuple[j - 1] = subset_contains(status.aborted, j)
                               ? spec.sample_uniform_input(substitution_rng)
                               : submitted.at(j);
        }
        return spec.evaluate_with_rng(tuple, trusted_rng);
    };

    const auto recollect = [&]() {
        std::vector<int> corrupt_active;
        for (int j : corrupt) {
            if (!subset_contains(status.aborted, j)) {
                corrupt_active.push_back(j);
            }
        }
        const auto again = adversary.provide_inputs_again(corrupt_active);
        for (int j : corrupt_active) {
            const auto it = again.find(j);
            if (it == again.end() || it->second.abort ||
                it->second.value >= spec.domain_size()) {
                status.aborted = subset_add(status.aborted, j);
                submitted.erase(j);
            } else {
                submitted[j] = it->second.value;
            }
        }
    };

    if (subset_size(status.aborted) >= m - t) {
        tr.record(1, Phase::Premature, "simulator", "i=1");
        recollect();
        const Value w = trusted_output();
        result.termination = Termination::Premature;
        result.termination_round = 1;
        result.honest_output = w;
        return result;
    }

    const int special = 1 + static_cast<int>(sim_rng.uniform_below(r));
    result.special_round = special;
    std::vector<Subset> visible;
    const Subset fully_corrupt = config.corrupt_indices & ~status.initial_aborts;
    for (Subset j_set : qualifying_subsets(m, t, status.initial_aborts)) {
        if ((j_set & ~fully_corrupt) == 0) {
            visible.push_back(j_set);
        }
    }

    // Fake value for one (round, set) pair: the corrupt submissions of the
    // set's members plus fresh uniform substitutes for everyone else.
    const auto fake_value = [&](Subset j_set) {
        std::vector<Value> tuple(m);
        for (int j = 1; j <= m; ++j) {
            tuple[j - 1] =
                subset_contains(j_set, j) ? submitted.at(j) : spec.sample_uniform_input(sim_rng);
        }
        return spec.evaluate_with_rng(tuple, sim_rng);
    };
    const auto fake_round_value = [&](Subset j_set) {
        if (variant == Variant::Range) {
            const auto num = boost::multiprecision::denominator(config.fairness_parameter)
                                 .convert_to<uint64_t>();
            const auto den = 2 * boost::multiprecision::numerator(config.fairness_parameter)
                                     .convert_to<uint64_t>();
            if (sim_rng.bernoulli(num, den)) {
                return static_cast<Value>(
                    sim_rng.uniform_bits(static_cast<unsigned>(spec.range_bits())));
            }
        }
        return fake_value(j_set);
    };

    std::optional<Value> w;
    for (int i = 1; i <= r; ++i) {
        if (i == special) {
            w = trusted_output();
        }
        std::map<Subset, Value> peeked;
        for (Subset j_set : visible) {
            peeked[j_set] = i < special ? fake_round_value(j_set) : *w;
        }
        const auto aborts = adversary.on_peek(i, peeked);
        check_abort_list(aborts, config, status);
        if (process_abort_phase(status, aborts, t)) {
            if (i == 1 && !w.has_value()) {
                tr.record(1, Phase::Premature, "simulator", "i=1");
                recollect();
                result.honest_output = trusted_output();
            } else {
                const auto late = adversary.on_premature(i);
                check_abort_list(late, config, status);
                for (int j : late) {
                    status.aborted = subset_add(status.aborted, j);
                }
                if (w.has_value()) {
                    result.honest_output = *w;
                } else {
                    result.honest_output = trusted_output();
                    if (variant == Variant::Range) {
                        const auto num =
                            boost::multiprecision::denominator(config.fairness_parameter)
                                .convert_to<uint64_t>();
                        const auto den =
                            2 * boost::multiprecision::numerator(config.fairness_parameter)
                                    .convert_to<uint64_t>();
                        if (sim_rng.bernoulli(num, den)) {
                            result.simulator_failed = true;
                        }
                    }
                }
            }
            tr.record(i, Phase::Premature, "simulator", "terminate");
            result.termination = Termination::Premature;
            result.termination_round = i;
            return result;
        }
    }
    result.termination = Termination::Normal;
    result.termination_round = r;
    result.honest_output = *w;
    return result;
}

ComparisonReport compare_real_ideal(const ProtocolConfig& config,
                                    const std::vector<Value>& true_inputs,
                                    AdversaryStrategy& adversary, uint64_t trials,
                                    Variant variant, Engine engine,
                                    const std::vector<uint8_t>& aux) {
    ComparisonReport out;
    ProtocolConfig trial = config;
    for (uint64_t k = 0; k < trials; ++k) {
        trial.master_seed = derive_seed(config.master_seed, "cmp-real", k);
        const auto real = engine == Engine::Dealer
                              ? run_dealer_protocol(trial, true_inputs, adversary, variant, aux)
                              : run_mpc(trial, true_inputs, adversary, variant, aux);
        out.real.add(summarize(real));
        trial.master_seed = derive_seed(config.master_seed, "cmp-ideal", k);
        out.ideal.add(summarize(
            simulate_ideal_dealer(trial, true_inputs, adversary, variant, aux)));
    }
    out.estimated_sd = statistical_distance(out.real, out.ideal);
    return out;
}

double guessing_probability(const ProtocolConfig& config,
                            const std::vector<Value>& true_inputs,
                            AdversaryStrategy& adversary, uint64_t trials, Variant variant,
                            Engine engine, const std::vector<uint8_t>& aux) {
    if (trials == 0) {
        throw std::invalid_argument("guessing_probability: need at least one trial");
    }
    ProtocolConfig trial = config;
    uint64_t hits = 0;
    for (uint64_t k = 0; k < trials; ++k) {
        trial.master_seed = derive_seed(config.master_seed, "guess", k);
        const auto res = engine == Engine::Dealer
                             ? run_dealer_protocol(trial, true_inputs, adversary, variant, aux)
                             : run_mpc(trial, true_inputs, adversary, variant, aux);
        if (res.termination == Termination::Premature && res.special_round > 0 &&
            res.termination_round == res.special_round) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

ExactDistribution exact_honest_summary(const ProtocolConfig& config,
                                       const std::vector<Value>& inputs) {
    ExactDistribution out;
    for (const auto& [w, mass] : output_map(config.functionality, inputs)) {
        out[summary_key(2, w, false)] += mass;
    }
    return out;
}

ExactDistribution exact_aborter_summary(const ProtocolConfig& config,
                                        const std::vector<Value>& inputs, int k,
                                        Subset abort_set, bool ideal_world) {
    const auto& spec = config.functionality;
    const int m = spec.party_count();
    const int r = config.rounds_small();
    ExactDistribution out;
    if (k > r || subset_size(abort_set) < m - config.corruption_bound) {
        return exact_honest_summary(config, inputs);
    }
    const auto normal = output_map(spec, inputs);
    const auto sub = substituted_distribution(spec, inputs, abort_set);
    const Rational per_round(1, r);
    for (int special = 1; special <= r; ++special) {
        if (special > k) {
            // Premature strictly before the special round: both worlds hand
            // out f with the aborted inputs substituted.
            for (const auto& [w, mass] : sub) {
                out[summary_key(0, w, false)] += mass * per_round;
            }
        } else if (special == k) {
            // The divergence point: the real world reveals the decoy value of
            // the previous round, the ideal world the fixed output.
            if (ideal_world) {
                for (const auto& [w, mass] : normal) {
                    out[summary_key(1, w, false)] += mass * per_round;
                }
            } else {
                for (const auto& [w, mass] : sub) {
                    out[summary_key(1, w, false)] += mass * per_round;
                }
            }
        } else {
            for (const auto& [w, mass] : normal) {
                out[summary_key(2, w, false)] += mass * per_round;
            }
        }
    }
    return out;
}

} // namespace fmpc

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "fmpc/dealerless.hpp"

namespace fmpc {

class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EmpiricalDistribution {
    std::map<uint64_t, uint64_t> counts;
    uint64_t trials = 0;

    void add(uint64_t outcome) {
        ++counts[outcome];
        ++trials;
    }
};

using ExactDistribution = std::map<uint64_t, Rational>;

Rational statistical_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
Rational statistical_distance(const ExactDistribution& a, const ExactDistribution& b);
Rational statistical_distance(const EmpiricalDistribution& a, const ExactDistribution& b);

// Exact distribution of f(inputs) with the positions in `substituted`
// replaced by independent uniform domain elements.
ExactDistribution substituted_distribution(const FunctionalitySpec& spec,
                                           const std::vector<Value>& inputs,
                                           Subset substituted);

// The guessing parameter: the minimum over outputs w in the support of
// f(inputs) of the probability that every value visible to the corrupt
// coalition in one pre-special round equals w. Exact, by enumeration of the
// substitution tuples (and the uniform branch under the range variant).
Rational alpha_exact(const ProtocolConfig& config, const std::vector<Value>& inputs,
                     Variant variant);

struct BoundReport {
    uint64_t d = 0;
    uint64_t g = 0;
    int m = 0;
    int t = 0;
    BigInt r;
    Rational p;
    Variant variant = Variant::Domain;
    bool deterministic = true;

    Rational deterministic_bound; // (d^m)^{2^t} / r
    Rational randomized_stated;   // 2 g d^m / r^{2^t}, as written in the source lemma
    double randomized_proof = 0;  // 2 g d^m / r^{1/2^t}, as derived in its proof
    double p0 = 0;                // r^{1/2^t} / (g d^m)
    Rational range_bound;         // (2pg)^{2^t}/r + 1/(2p)
    std::optional<Rational> alpha;
    std::optional<Rational> guessing_bound; // 1/(alpha r)

    // The applicable distance bound for this variant/kind, as a double.
    double sd_bound_value() const;

    std::optional<double> empirical;
    std::optional<double> radius; // 3 binomial standard deviations
    std::optional<bool> pass;

    std::string to_line() const;
};

BoundReport bound_formulas(uint64_t d, uint64_t g, int m, int t, const BigInt& r,
                           const Rational& p, Variant variant, bool deterministic,
                           std::optional<Rational> alpha = std::nullopt);

// The ideal-world execution: fake pre-special values from the corrupt inputs
// plus uniform substitutes, one trusted-party call at the special round or at
// premature termination, and the 1/(2p) failure branch under the range
// variant.
RunResult simulate_ideal_dealer(const ProtocolConfig& config,
                                const std::vector<Value>& true_inputs,
                                AdversaryStrategy& adversary, Variant variant,
                                const std::vector<uint8_t>& aux = {});

// Joint summary statistic an execution is reduced to for the real-vs-ideal
// comparison: termination class (before / at / after the special round),
// output value, and the failure flag.
uint64_t summarize(const RunResult& result);
uint64_t summary_key(int cls, Value output, bool failed);

enum class Engine { Dealer, Dealerless };

struct ComparisonReport {
    EmpiricalDistribution real;
    EmpiricalDistribution ideal;
    Rational estimated_sd;
};

ComparisonReport compare_real_ideal(const ProtocolConfig& config,
                                    const std::vector<Value>& true_inputs,
                                    AdversaryStrategy& adversary, uint64_t trials,
                                    Variant variant, Engine engine = Engine::Dealer,
                                    const std::vector<uint8_t>& aux = {});

double guessing_probability(const ProtocolConfig& config,
                            const std::vector<Value>& true_inputs,
                            AdversaryStrategy& adversary, uint64_t trials, Variant variant,
                            Engine engine = Engine::Dealer,
                            const std::vector<uint8_t>& aux = {});

// Closed-form summary distributions for the peek-independent strategies,
// obtained by conditioning on the special round (uniform over 1..r): the
// honest strategy and the fixed-round aborter that forces premature
// termination at round k by silencing `abort_set`. Domain variant only.
ExactDistribution exact_honest_summary(const ProtocolConfig& config,
                                       const std::vector<Value>& inputs);
ExactDistribution exact_aborter_summary(const ProtocolConfig& config,
                                        const std::vector<Value>& inputs, int k,
                                        Subset abort_set, bool ideal_world);

} // namespace fmpc

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmpc/rng.hpp"
#include "fmpc/subset.hpp"

namespace fmpc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using Value = uint32_t;

enum class FunctionKind { Deterministic, Randomized };

// One randomized table entry: probabilities are dyadic with a common
// denominator 2^coin_bits, so weight_num/2^coin_bits is the exact mass.
struct OutputWeight {
    Value output = 0;
    uint64_t weight_num = 0;
};

// The plaintext ground truth for the m-party function f: (X)^m -> Z with
// X = {0,1}^domain_bits and Z = {0,1}^range_bits. Deterministic specs carry a
// total output table; randomized specs carry a total table of dyadic-rational
// output distributions, so every quantity here can be verified by exact
// enumeration.
class FunctionalitySpec {
public:
    static FunctionalitySpec deterministic(int m, int domain_bits, int range_bits,
                                           std::vector<Value> table);
    static FunctionalitySpec randomized(int m, int domain_bits, int range_bits,
                                        unsigned coin_bits,
                                        std::vector<std::vector<OutputWeight>> table);

    // m=4 one-bit inputs, output x1 ^ x2 ^ x3 ^ x4. The workhorse example.
    static FunctionalitySpec xor_n(int m);

    // Output is a uniform bit independent of the inputs.
    static FunctionalitySpec uniform_coin(int m);

    int party_count() const { return m_; }
    int domain_bits() const { return domain_bits_; }
    int range_bits() const { return range_bits_; }
    FunctionKind kind() const { return kind_; }
    unsigned coin_bits() const { return coin_bits_; }

    uint64_t domain_size() const { return uint64_t{1} << domain_bits_; }  // d
    uint64_t range_size() const { return uint64_t{1} << range_bits_; }    // g
    uint64_t tuple_count() const;

    // Row index of an input tuple; x_1 occupies the least significant bits.
    uint64_t tuple_index(std::span<const Value> inputs) const;

    Value evaluate(std::span<const Value> inputs, std::span<const uint8_t> coin_bits) const;
    Value evaluate(std::span<const Value> inputs) const;  // deterministic only
    Value evaluate_with_rng(std::span<const Value> inputs, RngStream& rng) const;

    Value sample_uniform_input(RngStream& rng) const;

    // Exact distribution of f on a fixed input tuple, as (output -> mass).
    std::vector<std::pair<Value, Rational>> output_distribution(std::span<const Value> inputs) const;

    // epsilon: min over input tuples and outputs in the support of
    // Pr[f(inputs) = w]. Deterministic specs give 1.
    Rational min_output_probability() const;

    FunctionalitySpec() = default; // an empty spec; fill via the factories

    const std::vector<std::vector<OutputWeight>>& randomized_table() const { return rand_table_; }

    // Line-oriented text format: header "m domain_bits range_bits kind", then
    // one line per input tuple (row order = tuple_index order).
    static FunctionalitySpec load(std::istream& in);
    static FunctionalitySpec load_file(const std::string& path);
    void save(std::ostream& out) const;

private:
    int m_ = 0;
    int domain_bits_ = 0;
    int range_bits_ = 0;
    FunctionKind kind_ = FunctionKind::Deterministic;
    unsigned coin_bits_ = 0;
    std::vector<Value> det_table_;
    std::vector<std::vector<OutputWeight>> rand_table_;
};

// Parameters of one protocol execution.
struct ProtocolConfig {
    FunctionalitySpec functionality;
    int corruption_bound = 0;       // t
    Rational fairness_parameter{1}; // p >= 1
    BigInt round_count{1};          // r
    Subset corrupt_indices = 0;     // B
    uint64_t master_seed = 0;

    int rounds_small() const; // r as an int; throws if it does not fit

    void validate() const;
};

// Theorem-driven round counts. Ceilings are applied when p is not an integer.
BigInt rounds_for_domain(const Rational& p, uint64_t d, uint64_t g, int m, int t,
                         bool deterministic);
BigInt rounds_for_range(const Rational& p, uint64_t g, int t);

} // namespace fmpc

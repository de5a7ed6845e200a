#include "fmpc/functionality.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fmpc {

namespace {

constexpr int kMaxTotalDomainBits = 20; // keeps d^m enumerable
constexpr int kMaxRangeBits = 8;

Rational ratio_ceil_to_int(const Rational& x, BigInt& out) {
    const BigInt num = boost::multiprecision::numerator(x);
    const BigInt den = boost::multiprecision::denominator(x);
    out = num / den;
    if (out * den != num) {
        out += 1;
    }
    return x;
}

BigInt bigint_pow(BigInt base, BigInt exp) {
    BigInt result{1};
    while (exp > 0) {
        if ((exp & 1) != 0) {
            result *= base;
        }
        base *= base;
        exp >>= 1;
    }
    return result;
}

Rational rational_pow(const Rational& base, BigInt exp) {
    const BigInt num = bigint_pow(boost::multiprecision::numerator(base), exp);
    const BigInt den = bigint_pow(boost::multiprecision::denominator(base), exp);
    return Rational(num, den);
}

} // namespace

FunctionalitySpec FunctionalitySpec::deterministic(int m, int domain_bits, int range_bits,
                                                   std::vector<Value> table) {
    if (m < 1 || domain_bits < 1 || range_bits < 1) {
        throw std::invalid_argument("spec: m, domain_bits, range_bits must be positive");
    }
    if (domain_bits * m > kMaxTotalDomainBits || range_bits > kMaxRangeBits) {
        throw std::invalid_argument("spec: domain/range size exceeds enumeration cap");
    }
    FunctionalitySpec s;
    s.m_ = m;
    s.domain_bits_ = domain_bits;
    s.range_bits_ = range_bits;
    s.kind_ = FunctionKind::Deterministic;
    if (table.size() != (uint64_t{1} << (domain_bits * m))) {
        throw std::invalid_argument("spec: table must cover every input tuple");
    }
    for (Value v : table) {
        if (v >= (Value{1} << range_bits)) {
            throw std::invalid_argument("spec: table output outside range");
        }
    }
    s.det_table_ = std::move(table);
    return s;
}

FunctionalitySpec FunctionalitySpec::randomized(int m, int domain_bits, int range_bits,
                                                unsigned coin_bits,
                                                std::vector<std::vector<OutputWeight>> table) {
    if (m < 1 || domain_bits < 1 || range_bits < 1) {
        throw std::invalid_argument("spec: m, domain_bits, range_bits must be positive");
    }
    if (domain_bits * m > kMaxTotalDomainBits || range_bits > kMaxRangeBits) {
        throw std::invalid_argument("spec: domain/range size exceeds enumeration cap");
    }
    if (coin_bits > 20) {
        throw std::invalid_argument("spec: coin space exceeds enumeration cap");
    }
    if (table.size() != (uint64_t{1} << (domain_bits * m))) {
        throw std::invalid_argument("spec: table must cover every input tuple");
    }
    const uint64_t total = uint64_t{1} << coin_bits;
    for (const auto& entry : table) {
        uint64_t sum = 0;
        for (const auto& ow : entry) {
            if (ow.output >= (Value{1} << range_bits)) {
                throw std::invalid_argument("spec: table output outside range");
            }
            sum += ow.weight_num;
        }
        if (sum != total) {
            throw std::invalid_argument("spec: randomized weights must sum to 1");
        }
    }
    FunctionalitySpec s;
    s.m_ = m;
    s.domain_bits_ = domain_bits;
    s.range_bits_ = range_bits;
    s.kind_ = FunctionKind::Randomized;
    s.coin_bits_ = coin_bits;
    s.rand_table_ = std::move(table);
    return s;
}

FunctionalitySpec FunctionalitySpec::xor_n(int m) {
    std::vector<Value> table(uint64_t{1} << m);
    for (uint64_t idx = 0; idx < table.size(); ++idx) {
        table[idx] = static_cast<Value>(std::popcount(idx) & 1);
    }
    return deterministic(m, 1, 1, std::move(table));
}

FunctionalitySpec FunctionalitySpec::uniform_coin(int m) {
    std::vector<std::vector<OutputWeight>> table(uint64_t{1} << m,
                                                 {{0, 1}, {1, 1}});
    return randomized(m, 1, 1, 1, std::move(table));
}

uint64_t FunctionalitySpec::tuple_count() const {
    return uint64_t{1} << (domain_bits_ * m_);
}

uint64_t FunctionalitySpec::tuple_index(std::span<const Value> inputs) const {
    if (static_cast<int>(inputs.size()) != m_) {
        throw std::invalid_argument("evaluate: need exactly m inputs");
    }
    uint64_t idx = 0;
    for (int j = 0; j < m_; ++j) {
        if (inputs[j] >= domain_size()) {
            throw std::domain_error("evaluate: input outside domain");
        }
        idx |= uint64_t{inputs[j]} << (j * domain_bits_);
    }
    return idx;
}

Value FunctionalitySpec::evaluate(std::span<const Value> inputs,
                                  std::span<const uint8_t> coins) const {
    const uint64_t idx = tuple_index(inputs);
    if (kind_ == FunctionKind::Deterministic) {
        return det_table_[idx];
    }
    if (coins.size() < coin_bits_) {
        throw std::invalid_argument("evaluate: insufficient coins");
    }
    uint64_t c = 0;
    for (unsigned k = 0; k < coin_bits_; ++k) {
        c = (c << 1) | (coins[k] & 1u);
    }
    uint64_t cumulative = 0;
    for (const auto& ow : rand_table_[idx]) {
        cumulative += ow.weight_num;
        if (c < cumulative) {
            return ow.output;
        }
    }
    throw std::logic_error("evaluate: weight table does not cover coin space");
}

Value FunctionalitySpec::evaluate(std::span<const Value> inputs) const {
    if (kind_ != FunctionKind::Deterministic) {
        throw std::invalid_argument("evaluate: randomized spec needs coins");
    }
    return evaluate(inputs, {});
}

Value FunctionalitySpec::evaluate_with_rng(std::span<const Value> inputs, RngStream& rng) const {
    if (kind_ == FunctionKind::Deterministic) {
        return evaluate(inputs, {});
    }
    std::vector<uint8_t> coins(coin_bits_);
    for (auto& b : coins) {
        b = static_cast<uint8_t>(rng.uniform_bits(1));
    }
    return evaluate(inputs, coins);
}

Value FunctionalitySpec::sample_uniform_input(RngStream& rng) const {
    return static_cast<Value>(rng.uniform_bits(static_cast<unsigned>(domain_bits_)));
}

std::vector<std::pair<Value, Rational>> FunctionalitySpec::output_distribution(
    std::span<const Value> inputs) const {
    const uint64_t idx = tuple_index(inputs);
    std::vector<std::pair<Value, Rational>> out;
    if (kind_ == FunctionKind::Deterministic) {
        out.emplace_back(det_table_[idx], Rational{1});
        return out;
    }
    const uint64_t total = uint64_t{1} << coin_bits_;
    for (const auto& ow : rand_table_[idx]) {
        if (ow.weight_num > 0) {
            out.emplace_back(ow.output, Rational(ow.weight_num, total));
        }
    }
    return out;
}

Rational FunctionalitySpec::min_output_probability() const {
    if (kind_ == FunctionKind::Deterministic) {
        return Rational{1};
    }
    const uint64_t total = uint64_t{1} << coin_bits_;
    Rational eps{1};
    for (const auto& entry : rand_table_) {
        for (const auto& ow : entry) {
            if (ow.weight_num > 0) {
                eps = std::min(eps, Rational(ow.weight_num, total));
            }
        }
    }
    return eps;
}

FunctionalitySpec FunctionalitySpec::load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) {
        throw std::invalid_argument("spec load: empty input");
    }
    std::istringstream hs(header);
    int m = 0, db = 0, rb = 0;
    std::string kind;
    if (!(hs >> m >> db >> rb >> kind)) {
        throw std::invalid_argument("spec load: malformed header");
    }
    const uint64_t rows = uint64_t{1} << (db * m);
    std::string line;
    if (kind == "deterministic") {
        std::vector<Value> table;
        table.reserve(rows);
        while (table.size() < rows && std::getline(in, line)) {
            if (line.empty() || line[0] == '#') {
                continue;
            }
            table.push_back(static_cast<Value>(std::stoul(line)));
        }
        if (table.size() != rows) {
            throw std::invalid_argument("spec load: missing table rows");
        }
        return deterministic(m, db, rb, std::move(table));
    }
    if (kind != "randomized") {
        throw std::invalid_argument("spec load: unknown kind");
    }
    std::vector<std::vector<std::pair<Value, std::pair<uint64_t, uint64_t>>>> rows_frac;
    unsigned coin_bits = 0;
    while (rows_frac.size() < rows && std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::pair<Value, std::pair<uint64_t, uint64_t>>> entry;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            const auto slash = tok.find('/');
            if (colon == std::string::npos || slash == std::string::npos || slash < colon) {
                throw std::invalid_argument("spec load: expected output:num/den");
            }
            const Value out = static_cast<Value>(std::stoul(tok.substr(0, colon)));
            const uint64_t num = std::stoull(tok.substr(colon + 1, slash - colon - 1));
            const uint64_t den = std::stoull(tok.substr(slash + 1));
            if (den == 0 || (den & (den - 1)) != 0) {
                throw std::invalid_argument("spec load: denominator must be a power of two");
            }
            const unsigned bits = static_cast<unsigned>(std::countr_zero(den));
            coin_bits = std::max(coin_bits, bits);
            entry.emplace_back(out, std::make_pair(num, den));
        }
        rows_frac.push_back(std::move(entry));
    }
    if (rows_frac.size() != rows) {
        throw std::invalid_argument("spec load: missing table rows");
    }
    std::vector<std::vector<OutputWeight>> table;
    table.reserve(rows);
    const uint64_t total = uint64_t{1} << coin_bits;
    for (const auto& entry : rows_frac) {
        std::vector<OutputWeight> scaled;
        for (const auto& [out, frac] : entry) {
            scaled.push_back({out, frac.first * (total / frac.second)});
        }
        table.push_back(std::move(scaled));
    }
    return randomized(m, db, rb, coin_bits, std::move(table));
}

FunctionalitySpec FunctionalitySpec::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("spec load: cannot open " + path);
    }
    return load(in);
}

void FunctionalitySpec::save(std::ostream& out) const {
    out << m_ << ' ' << domain_bits_ << ' ' << range_bits_ << ' '
        << (kind_ == FunctionKind::Deterministic ? "deterministic" : "randomized") << '\n';
    if (kind_ == FunctionKind::Deterministic) {
        for (Value v : det_table_) {
            out << v << '\n';
        }
        return;
    }
    const uint64_t total = uint64_t{1} << coin_bits_;
    for (const auto& entry : rand_table_) {
        bool first = true;
        for (const auto& ow : entry) {
            if (!first) {
                out << ' ';
            }
            out << ow.output << ':' << ow.weight_num << '/' << total;
            first = false;
        }
        out << '\n';
    }
}

int ProtocolConfig::rounds_small() const {
    if (round_count < 1 || round_count > 1'000'000'000) {
        throw std::invalid_argument("config: round count not executable at desk scale");
    }
    return static_cast<int>(round_count);
}

void ProtocolConfig::validate() const {
    const int m = functionality.party_count();
    const int t = corruption_bound;
    if (2 * t < m || 3 * t >= 2 * m) {
        throw std::invalid_argument("config: need m/2 <= t < 2m/3");
    }
    if (fairness_parameter < 1) {
        throw std::invalid_argument("config: fairness parameter p must be >= 1");
    }
    if (round_count < 1) {
        throw std::invalid_argument("config: need at least one round");
    }
    if (subset_size(corrupt_indices) > t) {
        throw std::invalid_argument("config: more corrupt parties than the bound t");
    }
    if ((corrupt_indices & ~full_set(m)) != 0) {
        throw std::invalid_argument("config: corrupt index outside [m]");
    }
}

BigInt rounds_for_domain(const Rational& p, uint64_t d, uint64_t g, int m, int t,
                         bool deterministic) {
    if (p < 1) {
        throw std::invalid_argument("rounds_for_domain: p must be >= 1");
    }
    if (2 * t < m || 3 * t >= 2 * m) {
        throw std::invalid_argument("rounds_for_domain: need m/2 <= t < 2m/3");
    }
    const BigInt two_t = bigint_pow(2, t);
    Rational r;
    if (deterministic) {
        r = p * Rational(bigint_pow(BigInt(d), BigInt(m) * two_t));
    } else {
        const Rational base = Rational(2) * Rational(bigint_pow(BigInt(d), m)) * Rational(g) * p;
        r = p * rational_pow(base, two_t);
    }
    BigInt out;
    ratio_ceil_to_int(r, out);
    return out;
}

BigInt rounds_for_range(const Rational& p, uint64_t g, int t) {
    if (p < 1) {
        throw std::invalid_argument("rounds_for_range: p must be >= 1");
    }
    if (t < 1) {
        throw std::invalid_argument("rounds_for_range: t must be >= 1");
    }
    const BigInt two_t = bigint_pow(2, t);
    const Rational r =
        rational_pow(2 * p, two_t + 1) * Rational(bigint_pow(BigInt(g), two_t));
    BigInt out;
    ratio_ceil_to_int(r, out);
    return out;
}

} // namespace fmpc

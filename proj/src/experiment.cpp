#include "fmpc/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fmpc {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(std::stoi(item));
        }
    }
    return out;
}

} // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(text));
        }
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rational: bad value '" + text + "'");
    }
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "functionality") {
            cfg.functionality = value;
        } else if (key == "t") {
            cfg.corruption_bound = std::stoi(value);
        } else if (key == "p") {
            cfg.fairness = parse_rational(value);
        } else if (key == "r") {
            cfg.rounds = value;
        } else if (key == "variant") {
            if (value != "domain" && value != "range") {
                throw std::invalid_argument("config: variant must be domain or range");
            }
            cfg.variant = value == "range" ? Variant::Range : Variant::Domain;
        } else if (key == "engine") {
            if (value != "dealer" && value != "dealerless") {
                throw std::invalid_argument("config: engine must be dealer or dealerless");
            }
            cfg.engine = value == "dealerless" ? Engine::Dealerless : Engine::Dealer;
        } else if (key == "adversary") {
            cfg.adversary = value;
        } else if (key == "abort_round") {
            cfg.abort_round = std::stoi(value);
        } else if (key == "abort_parties") {
            cfg.abort_parties = parse_int_list(value);
        } else if (key == "corrupt") {
            cfg.corrupt = parse_int_list(value);
        } else if (key == "inputs") {
            cfg.inputs.clear();
            for (int v : parse_int_list(value)) {
                cfg.inputs.push_back(static_cast<Value>(v));
            }
        } else if (key == "trials") {
            cfg.trials = std::stoull(value);
        } else if (key == "seed") {
            cfg.seed = std::stoull(value);
        } else if (key == "aux_honest") {
            cfg.aux_honest = value == "true" || value == "1" || value == "yes";
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    if (cfg.functionality.empty()) {
        throw std::invalid_argument("config: missing functionality");
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open " + path);
    }
    return parse(in);
}

FunctionalitySpec ExperimentConfig::resolve_functionality() const {
    if (functionality.rfind("xor", 0) == 0 && functionality.size() > 3 &&
        std::isdigit(static_cast<unsigned char>(functionality[3]))) {
        return FunctionalitySpec::xor_n(std::stoi(functionality.substr(3)));
    }
    if (functionality.rfind("coin", 0) == 0 && functionality.size() > 4 &&
        std::isdigit(static_cast<unsigned char>(functionality[4]))) {
        return FunctionalitySpec::uniform_coin(std::stoi(functionality.substr(4)));
    }
    return FunctionalitySpec::load_file(functionality);
}

ProtocolConfig ExperimentConfig::to_protocol_config() const {
    ProtocolConfig out;
    out.functionality = resolve_functionality();
    out.corruption_bound = corruption_bound;
    out.fairness_parameter = fairness;
    if (rounds == "auto") {
        const auto& spec = out.functionality;
        out.round_count =
            variant == Variant::Range
                ? rounds_for_range(fairness, spec.range_size(), corruption_bound)
                : rounds_for_domain(fairness, spec.domain_size(), spec.range_size(),
                                    spec.party_count(), corruption_bound,
                                    spec.kind() == FunctionKind::Deterministic);
    } else {
        try {
            out.round_count = BigInt(rounds);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: bad round count '" + rounds + "'");
        }
    }
    for (int j : corrupt) {
        out.corrupt_indices = subset_add(out.corrupt_indices, j);
    }
    out.master_seed = seed;
    out.validate();
    if (static_cast<int>(inputs.size()) != out.functionality.party_count()) {
        throw std::invalid_argument("config: need one input per party");
    }
    for (Value v : inputs) {
        if (v >= out.functionality.domain_size()) {
            throw std::invalid_argument("config: input out of domain");
        }
    }
    return out;
}

std::unique_ptr<AdversaryStrategy> ExperimentConfig::make_adversary() const {
    if (adversary == "honest") {
        return honest_strategy();
    }
    if (adversary == "fixed_round_aborter") {
        return fixed_round_aborter(abort_round, abort_parties);
    }
    if (adversary == "threshold_guesser") {
        return threshold_guesser();
    }
    throw std::invalid_argument("config: unknown adversary '" + adversary + "'");
}

std::vector<uint8_t> ExperimentConfig::make_aux() const {
    if (!aux_honest) {
        return {};
    }
    Subset corrupt_set = 0;
    for (int j : corrupt) {
        corrupt_set = subset_add(corrupt_set, j);
    }
    std::map<int, Value> honest;
    for (size_t k = 0; k < inputs.size(); ++k) {
        if (!subset_contains(corrupt_set, static_cast<int>(k) + 1)) {
            honest[static_cast<int>(k) + 1] = inputs[k];
        }
    }
    return aux_from_inputs(honest);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    const ProtocolConfig proto = config.to_protocol_config();
    const auto& spec = proto.functionality;
    const auto adversary = config.make_adversary();
    const auto aux = config.make_aux();

    std::optional<Rational> alpha;
    try {
        alpha = alpha_exact(proto, config.inputs, config.variant);
    } catch (const CapacityError&) {
        // reported without a guessing bound
    }

    ExperimentReport out;
    out.bounds = bound_formulas(spec.domain_size(), spec.range_size(), spec.party_count(),
                                proto.corruption_bound, proto.round_count,
                                proto.fairness_parameter, config.variant,
                                spec.kind() == FunctionKind::Deterministic, alpha);

    const auto cmp = compare_real_ideal(proto, config.inputs, *adversary, config.trials,
                                        config.variant, config.engine, aux);
    out.estimated_sd = cmp.estimated_sd.convert_to<double>();
    const auto support = static_cast<double>(
        std::max(cmp.real.counts.size(), cmp.ideal.counts.size()));
    out.sd_radius = 3.0 * std::sqrt(support / (4.0 * static_cast<double>(config.trials)));
    const double sd_bound = out.bounds.sd_bound_value();
    out.sd_pass = sd_bound >= 1.0 || out.estimated_sd <= sd_bound + out.sd_radius;
    out.bounds.empirical = out.estimated_sd;
    out.bounds.radius = out.sd_radius;
    out.bounds.pass = out.sd_pass;

    out.guess_rate = guessing_probability(proto, config.inputs, *adversary, config.trials,
                                          config.variant, config.engine, aux);
    if (out.bounds.guessing_bound) {
        const double b = std::min(1.0, out.bounds.guessing_bound->convert_to<double>());
        out.guess_radius =
            3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(config.trials));
        out.guess_pass = out.guess_rate <= b + out.guess_radius;
    }
    out.pass = out.sd_pass && out.guess_pass;

    // one sample execution for the transcript file
    ProtocolConfig sample = proto;
    sample.master_seed = derive_seed(config.seed, "sample");
    const auto run = config.engine == Engine::Dealer
                         ? run_dealer_protocol(sample, config.inputs, *adversary,
                                               config.variant, aux)
                         : run_mpc(sample, config.inputs, *adversary, config.variant, aux);
    out.sample_transcript = run.transcript.serialize();

    std::ostringstream report;
    report << out.bounds.to_line() << "\n";
    report << "comparison trials=" << config.trials << " estimated_sd=" << out.estimated_sd
           << " radius=" << out.sd_radius << " pass=" << (out.sd_pass ? "yes" : "no")
           << "\n";
    report << "guessing trials=" << config.trials << " rate=" << out.guess_rate
           << " radius=" << out.guess_radius << " pass=" << (out.guess_pass ? "yes" : "no")
           << "\n";
    out.report_text = report.str();

    std::ostringstream csv;
    csv << "metric,value\n";
    csv << "estimated_sd," << out.estimated_sd << "\n";
    csv << "sd_bound," << sd_bound << "\n";
    csv << "guess_rate," << out.guess_rate << "\n";
    if (out.bounds.guessing_bound) {
        csv << "guessing_bound," << out.bounds.guessing_bound->convert_to<double>() << "\n";
    }
    if (alpha) {
        csv << "alpha," << alpha->convert_to<double>() << "\n";
    }
    csv << "pass," << (out.pass ? 1 : 0) << "\n";
    out.summary_csv = csv.str();
    return out;
}

void write_report(const ExperimentReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto dump = [&](const std::string& name, const std::string& text) {
        std::ofstream file(std::filesystem::path(out_dir) / name, std::ios::binary);
        if (!file) {
            throw std::runtime_error("cannot write " + name + " under " + out_dir);
        }
        file << text;
    };
    dump("report.txt", report.report_text);
    dump("summary.csv", report.summary_csv);
    dump("transcript.txt", report.sample_transcript);
}

} // namespace fmpc

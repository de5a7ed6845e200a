#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fmpc/analysis.hpp"

namespace fmpc {

Rational parse_rational(const std::string& text);

// One experiment: a functionality, protocol parameters, an adversary, and a
// trial budget. Loaded from line-oriented `key = value` text.
struct ExperimentConfig {
    std::string functionality;   // "xorN", "coinN", or a table file path
    int corruption_bound = 0;    // t
    Rational fairness{1};        // p
    std::string rounds = "auto"; // round count, or "auto" for the formula value
    Variant variant = Variant::Domain;
    Engine engine = Engine::Dealer;
    std::string adversary = "honest";
    int abort_round = 1;
    std::vector<int> abort_parties;
    std::vector<int> corrupt;
    std::vector<Value> inputs;
    uint64_t trials = 10000;
    uint64_t seed = 0;
    bool aux_honest = false; // hand the honest inputs to the adversary via aux

    static ExperimentConfig parse(std::istream& in);
    static ExperimentConfig load_file(const std::string& path);

    FunctionalitySpec resolve_functionality() const;
    ProtocolConfig to_protocol_config() const;
    std::unique_ptr<AdversaryStrategy> make_adversary() const;
    std::vector<uint8_t> make_aux() const;
};

struct ExperimentReport {
    BoundReport bounds;
    double estimated_sd = 0;
    double sd_radius = 0;
    double guess_rate = 0;
    double guess_radius = 0;
    bool sd_pass = true;
    bool guess_pass = true;
    bool pass = true;
    std::string report_text;      // one structured record per line
    std::string summary_csv;      // comma-separated metric table
    std::string sample_transcript;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

// Writes report.txt, summary.csv, and transcript.txt under `out_dir`.
// Byte-identical output for identical config and seed.
void write_report(const ExperimentReport& report, const std::string& out_dir);

} // namespace fmpc

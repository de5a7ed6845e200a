#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fmpc/encoding.hpp"
#include "fmpc/experiment.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitCapacity = 3;

int cmd_run(const std::string& config_path, std::optional<uint64_t> seed,
            std::optional<uint64_t> trials, const std::string& out_dir) {
    fmpc::ExperimentConfig cfg;
    try {
        cfg = fmpc::ExperimentConfig::load_file(config_path);
        if (seed) {
            cfg.seed = *seed;
        }
        if (trials) {
            cfg.trials = *trials;
        }
        (void)cfg.to_protocol_config();
    } catch (const std::exception& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitBadConfig;
    }
    try {
        const auto report = fmpc::run_experiment(cfg);
        fmpc::write_report(report, out_dir);
        std::cout << report.report_text;
        return report.pass ? 0 : kExitChecksFailed;
    } catch (const fmpc::CapacityError& err) {
        std::cerr << "capacity error: " << err.what() << "\n";
        return kExitCapacity;
    }
}

int cmd_bounds(int m, int t, uint64_t d, uint64_t g, const std::string& p_text,
               const std::string& variant, const std::string& kind) {
    try {
        const auto p = fmpc::parse_rational(p_text);
        const bool deterministic = kind == "deterministic";
        const auto var = variant == "range" ? fmpc::Variant::Range : fmpc::Variant::Domain;
        const fmpc::BigInt r =
            var == fmpc::Variant::Range
                ? fmpc::rounds_for_range(p, g, t)
                : fmpc::rounds_for_domain(p, d, g, m, t, deterministic);
        std::cout << "r=" << r << "\n";
        std::cout << fmpc::bound_formulas(d, g, m, t, r, p, var, deterministic).to_line()
                  << "\n";
        return 0;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitBadConfig;
    }
}

int cmd_share_demo(const std::string& scheme, const std::string& secret_hex, int k,
                   int parties, int special, uint64_t seed) {
    try {
        const auto secret = fmpc::from_hex(secret_hex);
        if (secret.empty()) {
            throw std::invalid_argument("secret must be nonempty hex");
        }
        fmpc::RngStream rng(seed);
        if (scheme == "xor") {
            const auto shares = fmpc::xor_share(secret, k, rng);
            for (const auto& sh : shares) {
                std::cout << "share " << sh.holder_index << " "
                          << fmpc::to_hex(sh.payload) << "\n";
            }
            std::cout << "reconstructed " << fmpc::to_hex(fmpc::xor_reconstruct(shares))
                      << "\n";
        } else if (scheme == "shamir") {
            const auto shares = fmpc::shamir_share(secret, k, parties, rng);
            for (const auto& sh : shares) {
                std::cout << "share " << sh.holder_index << " "
                          << fmpc::to_hex(sh.payload) << "\n";
            }
            std::cout << "reconstructed "
                      << fmpc::to_hex(fmpc::shamir_reconstruct(shares, k)) << "\n";
        } else if (scheme == "respect") {
            const auto sharing =
                fmpc::share_with_respect_to(secret, special, k, parties, rng);
            std::cout << "masking " << sharing.masking.holder_index << " "
                      << fmpc::to_hex(sharing.masking.payload) << "\n";
            for (const auto& sh : sharing.complements) {
                std::cout << "complement " << sh.holder_index << " "
                          << fmpc::to_hex(sh.payload) << "\n";
            }
            std::cout << "reconstructed "
                      << fmpc::to_hex(fmpc::reconstruct_with_respect_to(
                             sharing.masking, sharing.complements, k))
                      << "\n";
        } else {
            throw std::invalid_argument("scheme must be xor, shamir, or respect");
        }
        return 0;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitBadConfig;
    }
}

int cmd_validate(const std::string& config_path) {
    try {
        const auto cfg = fmpc::ExperimentConfig::load_file(config_path);
        (void)cfg.to_protocol_config();
        (void)cfg.make_adversary();
        std::cout << "ok\n";
        return 0;
    } catch (const std::exception& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitBadConfig;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"protocol experiment runner and bounds calculator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> trials;
    std::string out_dir = "out";
    auto* run = app.add_subcommand("run", "execute an experiment");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--seed", seed, "master seed override");
    run->add_option("--trials", trials, "trial count override");
    run->add_option("--out", out_dir, "report directory");

    int m = 4;
    int t = 2;
    uint64_t d = 2;
    uint64_t g = 2;
    std::string p_text = "1";
    std::string variant = "domain";
    std::string kind = "deterministic";
    auto* bounds = app.add_subcommand("bounds", "print round counts and bound formulas");
    bounds->add_option("--m", m, "party count");
    bounds->add_option("--t", t, "corruption bound");
    bounds->add_option("--d", d, "domain size");
    bounds->add_option("--g", g, "range size");
    bounds->add_option("--p", p_text, "fairness parameter (rational)");
    bounds->add_option("--variant", variant, "domain or range");
    bounds->add_option("--kind", kind, "deterministic or randomized");

    std::string scheme = "xor";
    std::string secret_hex = "2a";
    int k = 2;
    int parties = 3;
    int special = 1;
    uint64_t demo_seed = 0;
    auto* demo = app.add_subcommand("share-demo", "sharing round-trip demonstration");
    demo->add_option("--scheme", scheme, "xor, shamir, or respect");
    demo->add_option("--secret", secret_hex, "secret as hex bytes");
    demo->add_option("--k", k, "share count or threshold");
    demo->add_option("--parties", parties, "party count");
    demo->add_option("--special", special, "masked party (respect scheme)");
    demo->add_option("--seed", demo_seed, "rng seed");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check an experiment config");
    validate->add_option("--config", validate_path, "experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(config_path, seed, trials, out_dir);
    }
    if (bounds->parsed()) {
        return cmd_bounds(m, t, d, g, p_text, variant, kind);
    }
    if (demo->parsed()) {
        return cmd_share_demo(scheme, secret_hex, k, parties, special, demo_seed);
    }
    return cmd_validate(validate_path);
}

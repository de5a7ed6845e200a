#include "doctest.h"

#include <cmath>

#include "fmpc/analysis.hpp"
#include "fmpc/experiment.hpp"

using namespace fmpc;

namespace {

ProtocolConfig xor4_config(int r, Subset corrupt = 0, uint64_t seed = 1) {
    ProtocolConfig cfg;
    cfg.functionality = FunctionalitySpec::xor_n(4);
    cfg.corruption_bound = 2;
    cfg.round_count = r;
    cfg.corrupt_indices = corrupt;
    cfg.master_seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("statistical distance on hand-computed examples") {
    ExactDistribution uniform{{0, Rational{1, 2}}, {1, Rational{1, 2}}};
    ExactDistribution skewed{{0, Rational{3, 4}}, {1, Rational{1, 4}}};
    ExactDistribution point0{{0, Rational{1}}};
    ExactDistribution point1{{1, Rational{1}}};

    CHECK(statistical_distance(uniform, uniform) == Rational{0});
    CHECK(statistical_distance(point0, point1) == Rational{1});
    CHECK(statistical_distance(uniform, skewed) == Rational{1, 4});
    CHECK(statistical_distance(uniform, point0) == Rational{1, 2});
}

TEST_CASE("statistical distance is a metric on random triples") {
    RngStream rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        ExactDistribution dists[3];
        for (auto& d : dists) {
            Rational total{0};
            std::vector<Rational> weights;
            for (int k = 0; k < 4; ++k) {
                weights.emplace_back(1 + rng.uniform_below(9));
                total += weights.back();
            }
            for (int k = 0; k < 4; ++k) {
                d[static_cast<uint64_t>(k)] = weights[k] / total;
            }
        }
        const auto ab = statistical_distance(dists[0], dists[1]);
        const auto ba = statistical_distance(dists[1], dists[0]);
        const auto bc = statistical_distance(dists[1], dists[2]);
        const auto ac = statistical_distance(dists[0], dists[2]);
        CHECK(ab == ba);
        CHECK(ab >= 0);
        CHECK(ac <= ab + bc);
    }
}

TEST_CASE("empirical distance matches its exact counterpart and checks trials") {
    EmpiricalDistribution a, b;
    CHECK_THROWS_AS(statistical_distance(a, b), std::invalid_argument);
    for (int k = 0; k < 6; ++k) {
        a.add(k % 2);
        b.add(k % 3 == 0 ? 0 : 1);
    }
    // a = {0:1/2, 1:1/2}, b = {0:1/3, 1:2/3}
    CHECK(statistical_distance(a, b) == Rational{1, 6});
    ExactDistribution exact_b{{0, Rational{1, 3}}, {1, Rational{2, 3}}};
    CHECK(statistical_distance(a, exact_b) == Rational{1, 6});
}

TEST_CASE("substituted distribution against a brute-force oracle") {
    const auto spec = FunctionalitySpec::xor_n(4);
    const std::vector<Value> inputs{1, 0, 1, 1};

    SUBCASE("no substitution: a point mass at f(x)") {
        const auto d = substituted_distribution(spec, inputs, 0);
        REQUIRE(d.size() == 1);
        CHECK(d.at(1) == Rational{1});
    }
    SUBCASE("substituting any position of a parity gives a fair coin") {
        const auto d = substituted_distribution(spec, inputs, subset_add(0, 2));
        CHECK(d.at(0) == Rational{1, 2});
        CHECK(d.at(1) == Rational{1, 2});
    }
    SUBCASE("brute force over all pairs of substituted positions") {
        for (int a = 1; a <= 4; ++a) {
            for (int b = a + 1; b <= 4; ++b) {
                const Subset s = subset_add(subset_add(0, a), b);
                const auto got = substituted_distribution(spec, inputs, s);
                std::map<uint64_t, int> counts;
                for (Value va = 0; va < 2; ++va) {
                    for (Value vb = 0; vb < 2; ++vb) {
                        auto x = inputs;
                        x[a - 1] = va;
                        x[b - 1] = vb;
                        ++counts[spec.evaluate(x)];
                    }
                }
                for (const auto& [w, c] : counts) {
                    CHECK(got.at(w) == Rational{c, 4});
                }
            }
        }
    }
}

TEST_CASE("alpha on worked examples") {
    SUBCASE("parity with two corrupt parties") {
        auto cfg = xor4_config(16, subset_add(subset_add(0, 1), 2));
        CHECK(alpha_exact(cfg, {1, 0, 1, 1}, Variant::Domain) == Rational{1, 2});
    }
    SUBCASE("no fully corrupt qualifying set means nothing is visible") {
        auto cfg = xor4_config(16, subset_add(0, 1));
        CHECK(alpha_exact(cfg, {1, 0, 1, 1}, Variant::Domain) == Rational{1});
    }
    SUBCASE("a constant functionality is always guessed") {
        ProtocolConfig cfg;
        cfg.functionality =
            FunctionalitySpec::deterministic(3, 1, 1, std::vector<Value>(8, 0));
        cfg.corruption_bound = 2;
        cfg.round_count = 8;
        cfg.corrupt_indices = subset_add(subset_add(0, 1), 2);
        CHECK(alpha_exact(cfg, {0, 0, 0}, Variant::Domain) == Rational{1});
    }
    SUBCASE("lower bound (1/d^m)^(2^t - 1) holds for the deterministic case") {
        auto cfg = xor4_config(16, subset_add(subset_add(0, 1), 2));
        const auto alpha = alpha_exact(cfg, {0, 1, 0, 0}, Variant::Domain);
        const Rational lower{1, BigInt{1} << (4 * 3)}; // (1/2^4)^(2^2-1)
        CHECK(alpha >= lower);
    }
    SUBCASE("state spaces beyond the cap raise CapacityError") {
        ProtocolConfig cfg;
        // 16 input tuples times 2^18 coin strings blows the enumeration budget
        std::vector<std::vector<OutputWeight>> rows(
            16, {{0, uint64_t{1} << 17}, {1, uint64_t{1} << 17}});
        cfg.functionality = FunctionalitySpec::randomized(2, 2, 1, 18, rows);
        cfg.corruption_bound = 1;
        cfg.round_count = 4;
        cfg.corrupt_indices = subset_add(0, 1);
        CHECK_THROWS_AS(alpha_exact(cfg, {0, 0}, Variant::Domain), CapacityError);
    }
}

TEST_CASE("bound formulas on worked substitutions") {
    SUBCASE("deterministic: d=2 g=2 m=4 t=2, r = 2^17 gives 1/2") {
        const auto b =
            bound_formulas(2, 2, 4, 2, BigInt{1} << 17, Rational{2}, Variant::Domain, true);
        CHECK(b.deterministic_bound == Rational{1, 2});
        CHECK(b.sd_bound_value() == doctest::Approx(0.5));
    }
    SUBCASE("guessing bound: alpha=1/2, r=16 gives 1/8") {
        const auto b = bound_formulas(2, 2, 4, 2, BigInt{16}, Rational{2}, Variant::Domain,
                                      true, Rational{1, 2});
        REQUIRE(b.guessing_bound.has_value());
        CHECK(*b.guessing_bound == Rational{1, 8});
    }
    SUBCASE("range: p=2 g=2 t=2, r = (2p)^(2^t+1) g^(2^t) = 16384") {
        const auto b = bound_formulas(2, 2, 4, 2, BigInt{16384}, Rational{2},
                                      Variant::Range, true);
        // (2pg)^(2^t)/r + 1/(2p) = 4096/16384 + 1/4 = 1/2
        CHECK(b.range_bound == Rational{1, 2});
        CHECK(rounds_for_range(Rational{2}, 2, 2) == BigInt{16384});
    }
    SUBCASE("randomized: stated and proof-derived expressions both reported") {
        const auto b = bound_formulas(2, 2, 4, 2, BigInt{65536}, Rational{2},
                                      Variant::Domain, false);
        CHECK(b.randomized_stated == Rational{2 * 2 * 16, BigInt{65536} * 65536 * 65536 * 65536});
        // 2 g d^m / r^(1/4) = 64/16 = 4
        CHECK(b.randomized_proof == doctest::Approx(4.0));
        // r^(1/2^t) / (g d^m) = 16/32
        CHECK(b.p0 == doctest::Approx(0.5));
    }
    SUBCASE("to_line mentions the key figures") {
        const auto b = bound_formulas(2, 2, 4, 2, BigInt{16}, Rational{2}, Variant::Domain,
                                      true, Rational{1, 2});
        const auto line = b.to_line();
        CHECK(line.find("m=4") != std::string::npos);
        CHECK(line.find("t=2") != std::string::npos);
    }
}

TEST_CASE("summary keys separate class, output, and failure") {
    CHECK(summary_key(0, 0, false) != summary_key(1, 0, false));
    CHECK(summary_key(2, 0, false) != summary_key(2, 1, false));
    CHECK(summary_key(2, 1, false) != summary_key(2, 1, true));

    RunResult r;
    r.termination = Termination::Normal;
    r.termination_round = 8;
    r.special_round = 3;
    r.honest_output = Value{1};
    CHECK(summarize(r) == summary_key(2, 1, false));
    r.termination = Termination::Premature;
    r.termination_round = 2;
    CHECK(summarize(r) == summary_key(0, 1, false));
    r.termination_round = 3;
    CHECK(summarize(r) == summary_key(1, 1, false));
    r.termination_round = 4;
    CHECK(summarize(r) == summary_key(2, 1, false));
}

TEST_CASE("ideal execution with the honest strategy always outputs f(x)") {
    for (uint64_t seed = 0; seed < 30; ++seed) {
        auto cfg = xor4_config(8, 0, seed);
        auto adv = honest_strategy();
        const auto res = simulate_ideal_dealer(cfg, {1, 1, 0, 1}, *adv, Variant::Domain);
        CHECK(res.termination == Termination::Normal);
        CHECK(res.honest_output == Value{1});
        CHECK_FALSE(res.simulator_failed);
    }
}

TEST_CASE("exact summaries: closed forms match Monte Carlo estimates") {
    const Subset corrupt = subset_add(subset_add(0, 1), 2);
    const std::vector<Value> inputs{1, 0, 1, 0};
    auto cfg = xor4_config(8, corrupt, 2026);

    SUBCASE("honest summary is a point distribution on the normal class") {
        const auto exact = exact_honest_summary(cfg, inputs);
        REQUIRE(exact.size() == 1);
        CHECK(exact.at(summary_key(2, 0, false)) == Rational{1});
    }
    SUBCASE("real aborter runs land on the exact real-world summary") {
        const auto exact = exact_aborter_summary(cfg, inputs, 4, corrupt, false);
        auto adv = fixed_round_aborter(4, {1, 2});
        EmpiricalDistribution emp;
        for (uint64_t k = 0; k < 4000; ++k) {
            auto trial = cfg;
            trial.master_seed = derive_seed(9000, "trial", k);
            auto fresh = fixed_round_aborter(4, {1, 2});
            emp.add(summarize(run_dealer_protocol(trial, inputs, *fresh, Variant::Domain)));
        }
        const auto sd = statistical_distance(emp, exact);
        CHECK(static_cast<double>(sd.convert_to<double>()) < 0.05);
    }
    SUBCASE("ideal aborter runs land on the exact ideal-world summary") {
        const auto exact = exact_aborter_summary(cfg, inputs, 4, corrupt, true);
        EmpiricalDistribution emp;
        for (uint64_t k = 0; k < 4000; ++k) {
            auto trial = cfg;
            trial.master_seed = derive_seed(9001, "trial", k);
            auto fresh = fixed_round_aborter(4, {1, 2});
            emp.add(summarize(simulate_ideal_dealer(trial, inputs, *fresh, Variant::Domain)));
        }
        const auto sd = statistical_distance(emp, exact);
        CHECK(static_cast<double>(sd.convert_to<double>()) < 0.05);
    }
    SUBCASE("the two worlds differ only at i* = k, by (1/r) * SD(sub, point)") {
        const auto real = exact_aborter_summary(cfg, inputs, 4, corrupt, false);
        const auto ideal = exact_aborter_summary(cfg, inputs, 4, corrupt, true);
        const auto sub = substituted_distribution(cfg.functionality, inputs, corrupt);
        ExactDistribution normal{{cfg.functionality.evaluate(inputs), Rational{1}}};
        const auto expected = statistical_distance(sub, normal) / 8;
        CHECK(statistical_distance(real, ideal) == expected);
    }
    SUBCASE("an out-of-range abort round or small coalition degenerates to honest") {
        CHECK(exact_aborter_summary(cfg, inputs, 9, corrupt, false) ==
              exact_honest_summary(cfg, inputs));
        CHECK(exact_aborter_summary(cfg, inputs, 4, subset_add(0, 1), false) ==
              exact_honest_summary(cfg, inputs));
    }
}

TEST_CASE("real-vs-ideal comparison is reproducible and small for honest play") {
    auto cfg = xor4_config(8, 0, 31);
    auto adv = honest_strategy();
    const auto rep =
        compare_real_ideal(cfg, {0, 1, 1, 1}, *adv, 500, Variant::Domain, Engine::Dealer);
    CHECK(rep.real.trials == 500);
    CHECK(rep.ideal.trials == 500);
    CHECK(rep.estimated_sd == Rational{0});

    auto adv2 = honest_strategy();
    const auto rep2 =
        compare_real_ideal(cfg, {0, 1, 1, 1}, *adv2, 500, Variant::Domain, Engine::Dealer);
    CHECK(rep2.real.counts == rep.real.counts);
    CHECK(rep2.ideal.counts == rep.ideal.counts);
}

TEST_CASE("guessing probability of the honest strategy is zero") {
    auto cfg = xor4_config(8, 0, 5);
    auto adv = honest_strategy();
    CHECK(guessing_probability(cfg, {1, 1, 1, 1}, *adv, 200, Variant::Domain) == 0.0);
}

TEST_CASE("rational parser accepts integers and fractions") {
    CHECK(parse_rational("3") == Rational{3});
    CHECK(parse_rational("7/2") == Rational{7, 2});
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

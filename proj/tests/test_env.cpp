#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spbm/env.hpp"

using namespace spbm;

namespace {

EnvSpec stochastic_mab(std::vector<double> means) {
    EnvSpec s;
    s.regime = Regime::stochastic;
    s.phases.push_back({0, std::move(means)});
    return s;
}

} // namespace

TEST_CASE("stochastic losses: empirical means within the binomial CI") {
    EnvSpec spec = stochastic_mab({0.1, 0.6});
    Environment env(spec, 9, 0);
    const long N = 100000;
    double sum0 = 0.0, sum1 = 0.0;
    for (long t = 1; t <= N; ++t) {
        auto l = env.next_losses(t);
        sum0 += l[0];
        sum1 += l[1];
    }
    CHECK(sum0 / N == doctest::Approx(0.1).epsilon(0.1));
    CHECK(std::abs(sum0 / N - 0.1) <= 0.01);
    CHECK(std::abs(sum1 / N - 0.6) <= 0.01);
}

TEST_CASE("pm outcomes: point mass is deterministic, distributions sample correctly") {
    EnvSpec spec;
    spec.regime = Regime::stochastic;
    spec.pm_outcomes = true;
    spec.phases.push_back({0, {0.0, 1.0, 0.0}});
    Environment env(spec, 1, 0);
    for (long t = 1; t <= 100; ++t) CHECK(env.next_outcome(t) == 1);

    EnvSpec spec2;
    spec2.regime = Regime::stochastic;
    spec2.pm_outcomes = true;
    spec2.phases.push_back({0, {0.3, 0.7}});
    Environment env2(spec2, 2, 0);
    long c0 = 0;
    const long N = 100000;
    for (long t = 1; t <= N; ++t) c0 += env2.next_outcome(t) == 0;
    CHECK(std::abs(static_cast<double>(c0) / N - 0.3) <= 0.01);
}

TEST_CASE("same seed and replicate reproduce identical streams") {
    EnvSpec spec = stochastic_mab({0.4, 0.5, 0.6});
    Environment a(spec, 77, 3), b(spec, 77, 3);
    for (long t = 1; t <= 2000; ++t) CHECK(a.next_losses(t) == b.next_losses(t));

    Environment c(spec, 77, 4);
    bool differs = false;
    Environment a2(spec, 77, 3);
    for (long t = 1; t <= 2000 && !differs; ++t) differs = a2.next_losses(t) != c.next_losses(t);
    CHECK(differs);  // replicates get independent sub-streams
}

TEST_CASE("switching phases cycle and select the active profile") {
    EnvSpec spec;
    spec.regime = Regime::adversarial_switching;
    spec.phases.push_back({2, {0.0, 1.0}});
    spec.phases.push_back({3, {1.0, 0.0}});
    spec.validate();
    // deterministic means (0/1 probabilities make draws deterministic)
    Environment env(spec, 5, 0);
    std::vector<int> best;
    for (long t = 1; t <= 10; ++t) {
        auto l = env.next_losses(t);
        best.push_back(l[0] < l[1] ? 0 : 1);
    }
    // phase pattern: t=1,2 -> arm 0 best; t=3..5 -> arm 1; cycle repeats
    std::vector<int> want{0, 0, 1, 1, 1, 0, 0, 1, 1, 1};
    CHECK(best == want);
}

TEST_CASE("corruption: flips optimum and decoy for the first C rounds only") {
    EnvSpec spec = stochastic_mab({0.1, 0.6, 0.4});
    spec.regime = Regime::corrupted;
    spec.corruption_budget = 5;
    spec.validate();
    CHECK(spec.base_optimal_arm() == 0);
    CHECK(spec.decoy_arm() == 2);  // second-best by base means

    Environment env(spec, 11, 0);
    for (long t = 1; t <= 5; ++t) {
        auto l = env.next_losses(t);
        CHECK(l[0] == 1.0);
        CHECK(l[2] == 0.0);
        auto m = spec.mean_profile(t);
        CHECK(m[0] == 1.0);
        CHECK(m[2] == 0.0);
        CHECK(m[1] == 0.6);
    }
    CHECK(spec.mean_profile(6) == std::vector<double>{0.1, 0.6, 0.4});
}

TEST_CASE("zero corruption budget leaves the stream byte-identical") {
    EnvSpec base = stochastic_mab({0.3, 0.7});
    EnvSpec corrupted = base;
    corrupted.regime = Regime::corrupted;
    corrupted.corruption_budget = 0;
    Environment a(base, 123, 0), b(corrupted, 123, 0);
    for (long t = 1; t <= 5000; ++t) CHECK(a.next_losses(t) == b.next_losses(t));
}

TEST_CASE("corrupted streams differ from the base in at most C rounds") {
    EnvSpec base = stochastic_mab({0.3, 0.7});
    EnvSpec corrupted = base;
    corrupted.regime = Regime::corrupted;
    corrupted.corruption_budget = 17;
    Environment a(base, 9, 0), b(corrupted, 9, 0);
    int diffs = 0;
    for (long t = 1; t <= 5000; ++t) diffs += a.next_losses(t) != b.next_losses(t);
    CHECK(diffs <= 17);
}

TEST_CASE("comparator: best fixed action, ties to the smallest index") {
    auto cmp = comparator_loss(stochastic_mab({0.1, 0.6}), 100);
    CHECK(cmp.best_action == 0);
    for (double v : cmp.per_round) CHECK(v == doctest::Approx(0.1).epsilon(1e-12));

    // symmetric switching spec with equal totals: tie broken to arm 0
    EnvSpec sym;
    sym.regime = Regime::adversarial_switching;
    sym.phases.push_back({5, {0.2, 0.8}});
    sym.phases.push_back({5, {0.8, 0.2}});
    auto cmp2 = comparator_loss(sym, 10);
    CHECK(cmp2.best_action == 0);

    // pm: expected losses go through the loss matrix exactly
    EnvSpec pm;
    pm.regime = Regime::stochastic;
    pm.pm_outcomes = true;
    pm.phases.push_back({0, {0.25, 0.75}});
    Matrix L(2, 2);
    L(0, 0) = 0.0;
    L(0, 1) = 1.0;
    L(1, 0) = 1.0;
    L(1, 1) = 0.0;
    auto cmp3 = comparator_loss(pm, 4, &L);
    CHECK(cmp3.best_action == 1);  // E[L_2] = 0.25 < E[L_1] = 0.75
    CHECK(cmp3.per_round[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("spec validation rejects malformed environments") {
    EnvSpec bad = stochastic_mab({0.1, 1.4});
    CHECK_THROWS_AS(bad.validate(), DomainError);

    EnvSpec pm_corrupted;
    pm_corrupted.regime = Regime::corrupted;
    pm_corrupted.pm_outcomes = true;
    pm_corrupted.phases.push_back({0, {0.5, 0.5}});
    CHECK_THROWS_AS(pm_corrupted.validate(), DomainError);

    EnvSpec badphase;
    badphase.regime = Regime::adversarial_switching;
    badphase.phases.push_back({0, {0.5, 0.5}});
    CHECK_THROWS_AS(badphase.validate(), DomainError);
}

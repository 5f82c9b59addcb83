#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spbm/paid.hpp"
#include "spbm/rng.hpp"

using namespace spbm;

TEST_CASE("observation rate and its 1/2 contract") {
    CHECK(paid_rate(1.0, 0.0, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(paid_rate(0.0, 0.0, 4.0) == 0.0);  // no observations purchased
    CHECK_THROWS_AS(paid_rate(1.0, 1.0, 1.0), RTooLarge);  // 2 > 1/2
}

TEST_CASE("observation sets: degenerate rates and Bernoulli frequencies") {
    Rng rng(601);
    CHECK(draw_observation_set(1.0, 5, rng).size() == 5);
    CHECK(draw_observation_set(0.0, 5, rng).empty());

    // per-arm inclusion frequency over 1e5 draws stays within the binomial CI
    const int k = 4, N = 100000;
    std::vector<long> counts(k, 0);
    Rng rng2(602);
    for (int n = 0; n < N; ++n)
        for (int i : draw_observation_set(0.5, k, rng2)) counts[static_cast<std::size_t>(i)] += 1;
    for (int i = 0; i < k; ++i) {
        double freq = static_cast<double>(counts[static_cast<std::size_t>(i)]) / N;
        CHECK(freq >= 0.495);
        CHECK(freq <= 0.505);
    }
}

TEST_CASE("loss estimate: identity at r=1, importance weighting, exact expectation") {
    std::vector<double> losses{0.2, 0.5, 0.9};
    std::vector<int> all{0, 1, 2};
    auto est = paid_loss_estimate(1.0, all, losses, 3);
    for (int i = 0; i < 3; ++i) CHECK(est[static_cast<std::size_t>(i)] == losses[static_cast<std::size_t>(i)]);

    auto est2 = paid_loss_estimate(0.25, {1}, losses, 3);
    CHECK(est2[0] == 0.0);
    CHECK(est2[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(est2[2] == 0.0);

    // two-point expectation: r * (l/r) + (1-r) * 0 = l, exactly
    for (double r : {0.125, 0.25, 0.5}) {
        double included = paid_loss_estimate(r, {1}, losses, 3)[1];
        CHECK(r * included == doctest::Approx(losses[1]).epsilon(1e-15));
    }

    CHECK(paid_loss_estimate(0.0, {}, losses, 3) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK_THROWS_AS(paid_loss_estimate(0.0, {1}, losses, 3), DomainError);
}

TEST_CASE("paid z/u components") {
    PaidConfig cfg{2, 1.0, 0.5, 64.0, 0.0};
    std::vector<double> e1{1.0, 0.0};
    auto [z0, u0] = paid_zu(e1, 0.5, cfg);
    CHECK(z0 == 0.0);
    CHECK(u0 == 0.0);

    std::vector<double> uni{0.5, 0.5};
    auto [z, u] = paid_zu(uni, 0.5, cfg);
    CHECK(z == doctest::Approx(11.3137).epsilon(1e-4));   // ck = 2 doubles the pm value
    CHECK(u == doctest::Approx(11.31371).epsilon(1e-5));

    // c -> 0: z vanishes, u keeps the max{c,1} floor
    PaidConfig free_obs{2, 0.0, 0.5, 64.0, 0.0};
    auto [zf, uf] = paid_zu(uni, 0.5, free_obs);
    CHECK(zf == 0.0);
    CHECK(uf == doctest::Approx(8.0 / 0.5 * std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("round cost bookkeeping") {
    CHECK(paid_round_cost({}, 0.2) == 0.0);
    CHECK(paid_round_cost({0, 2, 3}, 0.2) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(paid_round_cost({0, 1}, 0.0) == 0.0);
}

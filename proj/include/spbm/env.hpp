#pragma once
// Loss/outcome generators: i.i.d. stochastic, oblivious phase-switching, and
// corrupted (a stochastic base whose first C rounds flip the optimal arm's
// loss to 1 and a decoy arm's to 0). Streams are bit-reproducible from
// (seed, replicate): replaying the same spec gives identical draws.

#include <cstdint>
#include <optional>
#include <vector>

#include "spbm/linalg.hpp"
#include "spbm/rng.hpp"

namespace spbm {

enum class Regime { stochastic, adversarial_switching, corrupted };

struct EnvPhase {
    long length = 0;             // ignored (infinite) for single-phase stochastic specs
    std::vector<double> means;   // arm means, or an outcome distribution for PM
};

struct EnvSpec {
    Regime regime = Regime::stochastic;
    bool pm_outcomes = false;    // means are a distribution over outcomes
    std::vector<EnvPhase> phases;
    long corruption_budget = 0;  // corrupted only
    std::optional<int> decoy;    // corrupted; defaults to the second-best arm

    void validate() const;

    // Per-round expected losses (arm means; for PM the outcome distribution),
    // including corruption effects. t is 1-based. Phases repeat cyclically.
    std::vector<double> mean_profile(long t) const;

    // base-optimal arm and the effective decoy (corrupted regime)
    int base_optimal_arm() const;
    int decoy_arm() const;
};

class Environment {
public:
    Environment(EnvSpec spec, std::uint64_t seed, std::uint64_t replicate);

    // Bernoulli loss vector of round t (MAB/graph specs). One uniform draw
    // per arm, in arm order, every round.
    std::vector<double> next_losses(long t);

    // Outcome index of round t (PM specs). One uniform draw per round.
    int next_outcome(long t);

    const EnvSpec& spec() const { return spec_; }

private:
    EnvSpec spec_;
    Rng rng_;
};

struct Comparator {
    int best_action;                    // 0-based, ties to the smallest index
    std::vector<double> per_round;      // expected loss of the best action per round, size T
};

// Best fixed action in hindsight against expected losses over horizon T.
// For PM specs pass the loss matrix to map outcome distributions through it.
Comparator comparator_loss(const EnvSpec& spec, long T, const Matrix* pm_loss = nullptr);

} // namespace spbm

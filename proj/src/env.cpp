#include "spbm/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spbm/errors.hpp"

namespace spbm {
namespace {

const EnvPhase& phase_at(const std::vector<EnvPhase>& phases, long t) {
    if (phases.size() == 1) return phases.front();
    long total = 0;
    for (const auto& ph : phases) total += ph.length;
    long pos = (t - 1) % total;  // phases repeat beyond their combined length
    for (const auto& ph : phases) {
        if (pos < ph.length) return ph;
        pos -= ph.length;
    }
    return phases.back();
}

} // namespace

void EnvSpec::validate() const {
    if (phases.empty()) throw DomainError("environment needs at least one phase");
    std::size_t dim = phases.front().means.size();
    if (dim < 2) throw DomainError("need at least two arms/outcomes");
    for (const auto& ph : phases) {
        if (ph.means.size() != dim) throw DomainError("phase dimension mismatch");
        double sum = 0.0;
        for (double m : ph.means) {
            if (!(m >= 0.0 && m <= 1.0)) throw DomainError("means must lie in [0,1]");
            sum += m;
        }
        if (pm_outcomes && std::abs(sum - 1.0) > 1e-9)
            throw DomainError("outcome distribution must sum to 1");
    }
    switch (regime) {
        case Regime::stochastic:
            if (phases.size() != 1) throw DomainError("stochastic spec has a single phase");
            break;
        case Regime::adversarial_switching:
            for (const auto& ph : phases)
                if (ph.length <= 0) throw DomainError("phase lengths must be positive");
            break;
        case Regime::corrupted:
            if (phases.size() != 1) throw DomainError("corrupted spec has a single base phase");
            if (corruption_budget < 0) throw DomainError("corruption budget must be >= 0");
            if (pm_outcomes)
                throw DomainError("the corruption rule is defined on loss vectors, not outcomes");
            if (decoy && (*decoy < 0 || *decoy >= static_cast<int>(dim)))
                throw DomainError("decoy arm out of range");
            break;
    }
}

int EnvSpec::base_optimal_arm() const {
    const auto& m = phases.front().means;
    return static_cast<int>(std::min_element(m.begin(), m.end()) - m.begin());
}

int EnvSpec::decoy_arm() const {
    if (decoy) return *decoy;
    const auto& m = phases.front().means;
    int best = base_optimal_arm();
    int second = -1;
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
        if (i == best) continue;
        if (second < 0 || m[static_cast<std::size_t>(i)] < m[static_cast<std::size_t>(second)]) second = i;
    }
    return second;
}

std::vector<double> EnvSpec::mean_profile(long t) const {
    std::vector<double> m = phase_at(phases, t).means;
    if (regime == Regime::corrupted && t <= corruption_budget) {
        m[static_cast<std::size_t>(base_optimal_arm())] = 1.0;
        m[static_cast<std::size_t>(decoy_arm())] = 0.0;
    }
    return m;
}

Environment::Environment(EnvSpec spec, std::uint64_t seed, std::uint64_t replicate)
    : spec_(std::move(spec)), rng_(seed, replicate, StreamRole::environment) {
    spec_.validate();
}

std::vector<double> Environment::next_losses(long t) {
    if (spec_.pm_outcomes) throw DomainError("PM spec emits outcomes, not loss vectors");
    const auto& means = phase_at(spec_.phases, t).means;
    std::vector<double> loss(means.size());
    for (std::size_t i = 0; i < means.size(); ++i)
        loss[i] = rng_.bernoulli(means[i]) ? 1.0 : 0.0;
    if (spec_.regime == Regime::corrupted && t <= spec_.corruption_budget) {
        loss[static_cast<std::size_t>(spec_.base_optimal_arm())] = 1.0;
        loss[static_cast<std::size_t>(spec_.decoy_arm())] = 0.0;
    }
    return loss;
}

int Environment::next_outcome(long t) {
    if (!spec_.pm_outcomes) throw DomainError("loss-vector spec emits losses, not outcomes");
    const auto& dist = phase_at(spec_.phases, t).means;
    return rng_.categorical(dist.data(), static_cast<int>(dist.size()));
}

Comparator comparator_loss(const EnvSpec& spec, long T, const Matrix* pm_loss) {
    spec.validate();
    if (spec.pm_outcomes && !pm_loss)
        throw DomainError("PM comparator needs the loss matrix");

    const int k = spec.pm_outcomes ? pm_loss->rows
                                   : static_cast<int>(spec.phases.front().means.size());
    std::vector<double> totals(static_cast<std::size_t>(k), 0.0);
    std::vector<std::vector<double>> mean_rows;
    mean_rows.reserve(static_cast<std::size_t>(T));
    for (long t = 1; t <= T; ++t) {
        std::vector<double> profile = spec.mean_profile(t);
        std::vector<double> row(static_cast<std::size_t>(k), 0.0);
        if (spec.pm_outcomes) {
            for (int a = 0; a < k; ++a)
                for (int x = 0; x < pm_loss->cols; ++x)
                    row[static_cast<std::size_t>(a)] += (*pm_loss)(a, x) * profile[static_cast<std::size_t>(x)];
        } else {
            row = profile;
        }
        for (int a = 0; a < k; ++a) totals[static_cast<std::size_t>(a)] += row[static_cast<std::size_t>(a)];
        mean_rows.push_back(std::move(row));
    }

    Comparator cmp;
    cmp.best_action = 0;
    for (int a = 1; a < k; ++a)
        if (totals[static_cast<std::size_t>(a)] < totals[static_cast<std::size_t>(cmp.best_action)] - 0.0)
            cmp.best_action = a;  // strict comparison ties to the smallest index
    cmp.per_round.resize(static_cast<std::size_t>(T));
    for (long t = 0; t < T; ++t)
        cmp.per_round[static_cast<std::size_t>(t)] =
            mean_rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(cmp.best_action)];
    return cmp;
}

} // namespace spbm

#pragma once
#include <cstddef>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "spbm/errors.hpp"

namespace spbm {

// A point of the (k-1)-simplex: entries >= 0, summing to 1 within 1e-9.
struct ProbVector {
    std::vector<double> w;

    ProbVector() = default;
    explicit ProbVector(std::vector<double> weights) : w(std::move(weights)) { validate(); }

    static ProbVector uniform(int k) {
        return ProbVector(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
    }
    static ProbVector point_mass(int k, int i) {
        std::vector<double> v(static_cast<std::size_t>(k), 0.0);
        v[static_cast<std::size_t>(i)] = 1.0;
        return ProbVector(std::move(v));
    }

    int size() const { return static_cast<int>(w.size()); }
    double operator[](int i) const { return w[static_cast<std::size_t>(i)]; }
    std::span<const double> span() const { return {w.data(), w.size()}; }

    void validate() const {
        double s = 0.0;
        for (double x : w) {
            if (!(x >= 0.0)) throw DomainError("probability entry negative or NaN");
            s += x;
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw DomainError("probabilities sum to " + std::to_string(s));
    }
};

// (leader index, gap): leader is the smallest index attaining max_i q_i,
// gap = min{q_leader, 1 - q_leader} in [0, 1/2]. Ties break to the smallest
// index so replays are reproducible.
inline std::pair<int, double> leader_and_gap(std::span<const double> q) {
    int lead = 0;
    for (int i = 1; i < static_cast<int>(q.size()); ++i)
        if (q[static_cast<std::size_t>(i)] > q[static_cast<std::size_t>(lead)]) lead = i;
    double ql = q[static_cast<std::size_t>(lead)];
    return {lead, std::min(ql, 1.0 - ql)};
}

inline std::pair<int, double> leader_and_gap(const ProbVector& q) {
    return leader_and_gap(q.span());
}

} // namespace spbm

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fpwalk/errors.hpp"

namespace fpwalk {

// One finite state chain of the product.  State 0 is the root; the walk on
// the product pushes a fresh letter by stepping out of the root and pops a
// letter when the top letter steps back into it.
struct FactorChain {
    std::string name;
    std::vector<std::string> states;  // states[0] is the root
    Eigen::MatrixXd p;                // row-stochastic, zero diagonal

    int size() const { return static_cast<int>(states.size()); }
};

struct FactorValidation {
    int states = 0;
    // Smallest horizon K such that every positive one-step transition has a
    // K-step witness probability of at least min_positive.  One step is its
    // own witness, so K is always 1 and min_positive is the smallest
    // positive entry of the matrix.
    int uniform_horizon = 1;
    double min_positive = 0.0;
    double max_row_sum_error = 0.0;
};

namespace detail {

inline std::vector<bool> reachable_from(const Eigen::MatrixXd& p, int start) {
    const int n = static_cast<int>(p.rows());
    std::vector<bool> seen(n, false);
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y = 0; y < n; ++y) {
            if (p(x, y) > 0.0 && !seen[y]) {
                seen[y] = true;
                stack.push_back(y);
            }
        }
    }
    return seen;
}

}  // namespace detail

// Directed graph distance from the root to every state along positive
// transitions.  Validation guarantees these are finite.
inline std::vector<int> root_distances(const FactorChain& chain) {
    const int n = chain.size();
    std::vector<int> dist(n, -1);
    std::vector<int> frontier{0};
    dist[0] = 0;
    int d = 0;
    while (!frontier.empty()) {
        ++d;
        std::vector<int> next;
        for (int x : frontier)
            for (int y = 0; y < n; ++y)
                if (chain.p(x, y) > 0.0 && dist[y] < 0) {
                    dist[y] = d;
                    next.push_back(y);
                }
        frontier = std::move(next);
    }
    return dist;
}

// Checks the chain is usable as a factor: at least two states, rows sum to
// one within 1e-12, no self loops, no negative entries, and the chain is
// irreducible (every state reachable from the root and vice versa).
// Throws ValidationError naming the offending state or row.
inline FactorValidation validate_factor(const FactorChain& chain) {
    const int n = chain.size();
    if (n < 2)
        throw ValidationError("factor '" + chain.name + "' needs at least 2 states");
    if (chain.p.rows() != n || chain.p.cols() != n)
        throw ValidationError("factor '" + chain.name + "' matrix shape does not match state count");

    FactorValidation out;
    out.states = n;
    out.min_positive = 1.0;
    for (int x = 0; x < n; ++x) {
        double row = 0.0;
        for (int y = 0; y < n; ++y) {
            const double v = chain.p(x, y);
            if (v < 0.0)
                throw ValidationError("factor '" + chain.name + "': negative probability at (" +
                                      chain.states[x] + ", " + chain.states[y] + ")");
            if (x == y && v != 0.0)
                throw ValidationError("factor '" + chain.name + "': self loop at state " +
                                      chain.states[x]);
            if (v > 0.0 && v < out.min_positive) out.min_positive = v;
            row += v;
        }
        const double err = std::abs(row - 1.0);
        out.max_row_sum_error = std::max(out.max_row_sum_error, err);
        if (err > 1e-12)
            throw ValidationError("factor '" + chain.name + "': row for state " +
                                  chain.states[x] + " sums to " + std::to_string(row));
    }

    const auto down = detail::reachable_from(chain.p, 0);
    for (int x = 0; x < n; ++x)
        if (!down[x])
            throw ValidationError("factor '" + chain.name + "': state " + chain.states[x] +
                                  " not reachable from the root");
    // Reachability of the root from everywhere, checked on the transpose.
    const auto up = detail::reachable_from(chain.p.transpose(), 0);
    for (int x = 0; x < n; ++x)
        if (!up[x])
            throw ValidationError("factor '" + chain.name + "': root not reachable from state " +
                                  chain.states[x]);
    return out;
}

}  // namespace fpwalk

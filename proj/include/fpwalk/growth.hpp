#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fpwalk/errors.hpp"
#include "fpwalk/power_iteration.hpp"
#include "fpwalk/product_spec.hpp"

namespace fpwalk {

// Growth of the word space is measured twice: in the block metric (number of
// letters) and in the step metric (least number of walk steps needed to
// reach a word).  Both growth rates come from Perron values of small
// nonnegative matrices; sphere cardinalities provide independent counts.

// Letter-count transition matrix: entry (i, j) is the number of possible
// type-j letters that can follow a type-i letter, i.e. |V_j| - 1 off the
// diagonal and 0 on it.
inline Eigen::MatrixXd block_growth_matrix(const FreeProductSpec& spec) {
    const int r = spec.num_factors();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (i != j) d(i, j) = spec.letters_of(j);
    return d;
}

inline DominantEigen lambda_block(const FreeProductSpec& spec) {
    return dominant_eigen(block_growth_matrix(spec));
}

// Number of words with exactly n letters: ones^T diag(c) D^{n-1} ones where
// c_i = |V_i| - 1.  Exact integer counts.
inline std::vector<std::uint64_t> sphere_counts_block(const FreeProductSpec& spec, int n_max) {
    const int r = spec.num_factors();
    std::vector<std::uint64_t> counts;
    // u[i] = number of words of the current length whose last letter has type i
    std::vector<std::uint64_t> u(r);
    for (int i = 0; i < r; ++i) u[i] = static_cast<std::uint64_t>(spec.letters_of(i));
    for (int n = 1; n <= n_max; ++n) {
        std::uint64_t total = 0;
        for (int i = 0; i < r; ++i) total += u[i];
        counts.push_back(total);
        std::vector<std::uint64_t> next(r, 0);
        for (int j = 0; j < r; ++j) {
            std::uint64_t sum = 0;
            for (int i = 0; i < r; ++i)
                if (i != j) sum += u[i];
            next[j] = sum * static_cast<std::uint64_t>(spec.letters_of(j));
        }
        u = next;
    }
    return counts;
}

// Deterministic spanning trees of the factors (parent = lowest-index
// predecessor one BFS layer up) glued at a common root, plus, for every
// non-root vertex, copies of the other factors' first-layer tree edges.
// Distances from the root in this graph equal the step metric.
struct ConeGraph {
    std::vector<std::string> names;     // names[0] is the shared root
    Eigen::MatrixXd adjacency;
    std::vector<std::vector<int>> tree_parent;  // per factor, per state (-1 for root)
};

inline ConeGraph build_cone_graph(const FreeProductSpec& spec) {
    const LetterIndex letters(spec);
    const int r = spec.num_factors();
    const int n = letters.total() + 1;
    ConeGraph g;
    g.names.resize(n);
    g.names[0] = "o";
    g.adjacency = Eigen::MatrixXd::Zero(n, n);
    g.tree_parent.resize(r);

    for (int i = 0; i < r; ++i) {
        const FactorChain& f = spec.factors[i];
        const auto dist = root_distances(f);
        auto& parent = g.tree_parent[i];
        parent.assign(f.size(), -1);
        for (int s = 1; s < f.size(); ++s) {
            g.names[1 + letters.id(i, s)] = f.name + ":" + f.states[s];
            for (int x = 0; x < f.size(); ++x)
                if (f.p(x, s) > 0.0 && dist[x] + 1 == dist[s]) {
                    parent[s] = x;
                    break;  // states scanned in ascending index order
                }
        }
        for (int s = 1; s < f.size(); ++s) {
            const int tgt = 1 + letters.id(i, s);
            if (parent[s] == 0) {
                // First-layer edge: from the shared root and from every
                // vertex of every other factor.
                g.adjacency(0, tgt) = 1.0;
                for (int j = 0; j < r; ++j) {
                    if (j == i) continue;
                    for (int t = 1; t < spec.factors[j].size(); ++t)
                        g.adjacency(1 + letters.id(j, t), tgt) = 1.0;
                }
            } else {
                g.adjacency(1 + letters.id(i, parent[s]), tgt) = 1.0;
            }
        }
    }
    return g;
}

inline DominantEigen lambda_metric(const ConeGraph& g) { return dominant_eigen(g.adjacency); }

// Number of words at step distance exactly n, by dynamic programming over
// (last letter type, remaining distance) with the per-factor counts of
// states at each BFS depth.
inline std::vector<std::uint64_t> sphere_counts_metric(const FreeProductSpec& spec, int n_max) {
    const int r = spec.num_factors();
    // layer_counts[i][d] = number of non-root states of factor i at distance d
    std::vector<std::vector<std::uint64_t>> layer_counts(r);
    for (int i = 0; i < r; ++i) {
        const auto dist = root_distances(spec.factors[i]);
        int dmax = 0;
        for (int s = 1; s < spec.factors[i].size(); ++s) dmax = std::max(dmax, dist[s]);
        layer_counts[i].assign(dmax + 1, 0);
        for (int s = 1; s < spec.factors[i].size(); ++s) ++layer_counts[i][dist[s]];
    }
    // f[n][i] = words of total distance n whose last letter has type i
    std::vector<std::vector<std::uint64_t>> f(n_max + 1, std::vector<std::uint64_t>(r, 0));
    for (int n = 1; n <= n_max; ++n)
        for (int i = 0; i < r; ++i) {
            std::uint64_t total = 0;
            const auto& layers = layer_counts[i];
            for (int d = 1; d < static_cast<int>(layers.size()) && d <= n; ++d) {
                if (layers[d] == 0) continue;
                std::uint64_t prefix = 0;
                if (d == n) {
                    prefix = 1;  // single-letter word
                } else {
                    for (int j = 0; j < r; ++j)
                        if (j != i) prefix += f[n - d][j];
                }
                total += layers[d] * prefix;
            }
            f[n][i] = total;
        }
    std::vector<std::uint64_t> counts;
    for (int n = 1; n <= n_max; ++n) {
        std::uint64_t total = 0;
        for (int i = 0; i < r; ++i) total += f[n][i];
        counts.push_back(total);
    }
    return counts;
}

struct GrowthReport {
    DominantEigen block;   // growth of block spheres
    DominantEigen metric;  // growth of step-metric spheres
    double g_block = 0.0;  // log of the block Perron value
    double g_metric = 0.0;
    std::vector<std::uint64_t> spheres_block;
    std::vector<std::uint64_t> spheres_metric;
};

inline GrowthReport growth_report(const FreeProductSpec& spec, int n_max = 12) {
    GrowthReport rep;
    rep.block = lambda_block(spec);
    rep.metric = lambda_metric(build_cone_graph(spec));
    rep.g_block = std::log(rep.block.value);
    rep.g_metric = std::log(rep.metric.value);
    rep.spheres_block = sphere_counts_block(spec, n_max);
    rep.spheres_metric = sphere_counts_metric(spec, n_max);
    return rep;
}

// Fundamental inequalities between entropy, speeds and growth rates.  The
// step-metric speed is only available as a Monte Carlo estimate, so its
// inequality is checked with a three-standard-error allowance.
struct GrowthInequalities {
    double block_bound = 0.0;   // g_block * block_speed
    double block_slack = 0.0;   // bound - entropy (should be >= -1e-9)
    bool block_ok = false;
    double metric_bound = 0.0;  // g_metric * (metric_speed + 3 stderr)
    double metric_slack = 0.0;
    bool metric_ok = false;
    bool metric_checked = false;
};

inline GrowthInequalities check_inequalities(double entropy, double block_speed,
                                             const GrowthReport& growth,
                                             double metric_speed = -1.0,
                                             double metric_speed_stderr = 0.0) {
    GrowthInequalities out;
    out.block_bound = growth.g_block * block_speed;
    out.block_slack = out.block_bound - entropy;
    out.block_ok = out.block_slack >= -1e-9;
    if (metric_speed >= 0.0) {
        out.metric_checked = true;
        out.metric_bound = growth.g_metric * (metric_speed + 3.0 * metric_speed_stderr);
        out.metric_slack = out.metric_bound - entropy;
        out.metric_ok = out.metric_slack >= -1e-9;
    }
    return out;
}

}  // namespace fpwalk

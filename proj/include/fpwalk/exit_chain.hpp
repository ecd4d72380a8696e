#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "fpwalk/errors.hpp"
#include "fpwalk/product_spec.hpp"
#include "fpwalk/weights.hpp"

namespace fpwalk {

// Markov chain of the factor types of successively frozen letters.  Entry
// (i, j) is the probability that a letter of type i is followed by one of
// type j; the diagonal is zero because consecutive letters alternate.
struct TypeChain {
    Eigen::MatrixXd kernel;
    Eigen::VectorXd stationary;        // closed-form stationary vector
    Eigen::VectorXd stationary_eigen;  // same vector from a dense linear solve
    double stationary_residual = 0.0;  // max |stationary^T kernel - stationary^T|
    double route_gap = 0.0;            // max |closed form - eigen solve|
};

inline TypeChain build_type_chain(const FreeProductSpec& spec, const WeightSolution& sol) {
    const int r = spec.num_factors();
    TypeChain chain;
    chain.kernel = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            if (j == i) continue;
            chain.kernel(i, j) = spec.alphas[j] / spec.alphas[i] * sol.weights(i) /
                                 sol.weights(j) * (1.0 - sol.weights(j)) /
                                 (1.0 - sol.weights(i)) * last_visit_total(sol.caches[j]);
        }

    chain.stationary.resize(r);
    for (int i = 0; i < r; ++i) {
        const double xi = sol.weights(i);
        chain.stationary(i) = spec.alphas[i] * (1.0 - xi) / xi *
                              (1.0 - (1.0 - xi) * sol.caches[i].green(0, 0));
    }
    const double norm = chain.stationary.sum();
    if (norm < 1e-14) throw DivisionNearZero("type chain normalisation", norm);
    chain.stationary /= norm;

    chain.stationary_residual =
        (chain.stationary.transpose() * chain.kernel - chain.stationary.transpose())
            .cwiseAbs()
            .maxCoeff();
    if (chain.stationary_residual > 1e-10)
        throw StationarityResidual("type chain stationary vector", chain.stationary_residual);

    // Independent route: solve (kernel^T - I) x = 0 with the normalisation
    // sum x = 1 in the last row.
    Eigen::MatrixXd a = chain.kernel.transpose() - Eigen::MatrixXd::Identity(r, r);
    a.row(r - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(r);
    b(r - 1) = 1.0;
    chain.stationary_eigen = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(b);
    chain.route_gap = (chain.stationary_eigen - chain.stationary).cwiseAbs().maxCoeff();
    return chain;
}

// Chain of the frozen letters themselves.  A row is indexed by the type of
// the current letter only (the kernel does not depend on the letter value);
// columns run over all letters via LetterIndex.
struct ExitChainKernel {
    LetterIndex letters;
    Eigen::MatrixXd type_kernel;
    Eigen::VectorXd type_stationary;
    Eigen::MatrixXd letter_kernel;      // (source type) x (target letter id)
    Eigen::VectorXd letter_stationary;  // over letter ids
    std::vector<double> letter_length;            // -log L(root, g | w)
    std::vector<double> letter_first_visit_length;  // -log F(root, g | w)
    std::vector<int> letter_root_distance;

    double q(int source_type, int target_letter) const {
        return letter_kernel(source_type, target_letter);
    }
};

inline ExitChainKernel build_exit_chain(const FreeProductSpec& spec, const WeightSolution& sol,
                                        const TypeChain& types) {
    ExitChainKernel k{LetterIndex(spec),
                      types.kernel,
                      types.stationary,
                      {},
                      {},
                      {},
                      {},
                      {}};
    const int r = spec.num_factors();
    const int nl = k.letters.total();
    k.letter_kernel = Eigen::MatrixXd::Zero(r, nl);
    for (int i = 0; i < r; ++i)
        for (int a = 0; a < nl; ++a) {
            const int j = k.letters.factor_of(a);
            if (j == i) continue;
            const int h = k.letters.state_of(a);
            k.letter_kernel(i, a) = spec.alphas[j] / spec.alphas[i] * sol.weights(i) /
                                    sol.weights(j) * (1.0 - sol.weights(j)) /
                                    (1.0 - sol.weights(i)) * sol.caches[j].last_visit(0, h);
        }

    k.letter_stationary = Eigen::VectorXd::Zero(nl);
    for (int a = 0; a < nl; ++a)
        for (int i = 0; i < r; ++i)
            k.letter_stationary(a) += types.stationary(i) * k.letter_kernel(i, a);

    k.letter_length.resize(nl);
    k.letter_first_visit_length.resize(nl);
    k.letter_root_distance.resize(nl);
    for (int i = 0; i < r; ++i) {
        const auto dist = root_distances(spec.factors[i]);
        for (int s = 1; s < spec.factors[i].size(); ++s) {
            const int a = k.letters.id(i, s);
            k.letter_length[a] = -std::log(sol.caches[i].last_visit(0, s));
            k.letter_first_visit_length[a] = -std::log(sol.caches[i].first_visit(0, s));
            k.letter_root_distance[a] = dist[s];
        }
    }
    return k;
}

// Rate of escape in the block metric: the number of frozen letters grows
// like ell0 * n.  Needs weight derivatives at z = 1.
inline double escape_rate_block(const FreeProductSpec& spec, const WeightSolution& sol,
                                const TypeChain& types) {
    const int r = spec.num_factors();
    double denom = 0.0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            if (j == i) continue;
            denom += types.stationary(i) * spec.alphas[j] * (1.0 - sol.weights(j)) /
                     (1.0 - sol.weights(i)) * exit_step_gf_deriv(spec, sol, i, j);
        }
    if (std::abs(denom) < 1e-14) throw DivisionNearZero("escape rate denominator", denom);
    return 1.0 / denom;
}

// Length of a word given as a sequence of letter ids; letters must alternate
// between factors.
inline double word_length(const ExitChainKernel& k, const std::vector<int>& word) {
    double total = 0.0;
    int prev_factor = -1;
    for (int a : word) {
        if (a < 0 || a >= k.letters.total()) throw MalformedWord("letter id out of range");
        const int f = k.letters.factor_of(a);
        if (f == prev_factor) throw MalformedWord("consecutive letters share a factor");
        prev_factor = f;
        total += k.letter_length[a];
    }
    return total;
}

struct MeanLetterLength {
    double direct = 0.0;    // triple sum over (source type, target letter)
    double via_pi = 0.0;    // sum of length * letter_stationary
    double route_gap = 0.0;
};

// Stationary mean letter length of the exit chain.  Computed twice: once by
// the explicit sum with last-visit values re-read from the factor caches,
// once through the stored stationary letter distribution.
inline MeanLetterLength mean_letter_length(const FreeProductSpec& spec,
                                           const WeightSolution& sol,
                                           const TypeChain& types,
                                           const ExitChainKernel& k) {
    MeanLetterLength out;
    const int r = spec.num_factors();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            if (j == i) continue;
            const double pref = types.stationary(i) * spec.alphas[j] / spec.alphas[i] *
                                sol.weights(i) / sol.weights(j) * (1.0 - sol.weights(j)) /
                                (1.0 - sol.weights(i));
            for (int h = 1; h < spec.factors[j].size(); ++h) {
                const double lv = sol.caches[j].last_visit(0, h);
                out.direct += pref * lv * (-std::log(lv));
            }
        }
    for (int a = 0; a < k.letters.total(); ++a)
        out.via_pi += k.letter_stationary(a) * k.letter_length[a];
    out.route_gap = std::abs(out.direct - out.via_pi);
    return out;
}

}  // namespace fpwalk

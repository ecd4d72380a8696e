#pragma once

#include <cmath>

#include "fpwalk/errors.hpp"
#include "fpwalk/exit_chain.hpp"
#include "fpwalk/product_spec.hpp"
#include "fpwalk/weights.hpp"

namespace fpwalk {

// The asymptotic entropy is computed along three independent routes; their
// agreement is the central correctness check of the whole pipeline.
//   v1: rate of escape times stationary mean letter length
//   v2: rate of escape times entropy rate of the exit chain
//   v3: ratio of two derivative sums of the product Green function
struct EntropyTriple {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
    double exit_chain_rate = 0.0;  // entropy rate of the exit chain (used by v2)
    double spread = 0.0;           // max pairwise gap
};

inline double entropy_v1(double escape_rate, const MeanLetterLength& mean_length) {
    return escape_rate * mean_length.direct;
}

// Entropy rate of the exit chain: -sum pi(a) sum_b q(a -> b) log q(a -> b),
// with 0 log 0 = 0.
inline double exit_chain_entropy_rate(const ExitChainKernel& k) {
    const int r = k.type_kernel.rows();
    std::vector<double> row_entropy(r, 0.0);
    for (int i = 0; i < r; ++i)
        for (int b = 0; b < k.letters.total(); ++b) {
            const double q = k.letter_kernel(i, b);
            if (q > 0.0) row_entropy[i] -= q * std::log(q);
        }
    double h = 0.0;
    for (int a = 0; a < k.letters.total(); ++a)
        h += k.letter_stationary(a) * row_entropy[k.letters.factor_of(a)];
    return h;
}

inline double entropy_v2(double escape_rate, const ExitChainKernel& k) {
    return escape_rate * exit_chain_entropy_rate(k);
}

// The two derivative sums whose ratio gives the entropy.  Both are sums over
// factors of Green values at the solved weights; sum_time also needs the
// weight derivatives at z = 1.
struct GreenDerivativeSums {
    double sum_entropy = 0.0;
    double sum_time = 0.0;
};

inline GreenDerivativeSums green_derivative_sums(const FreeProductSpec& spec,
                                                const WeightSolution& sol) {
    GreenDerivativeSums out;
    for (int i = 0; i < spec.num_factors(); ++i) {
        const auto& c = sol.caches[i];
        const double xi = sol.weights(i);
        const double g00 = c.green(0, 0);
        double glog = 0.0;
        for (int x = 0; x < spec.factors[i].size(); ++x)
            glog += c.green(0, x) * std::log(c.green(0, x));
        out.sum_entropy -= g00 * (1.0 - xi) * (1.0 - xi) * (glog - std::log(g00) / (1.0 - xi));
        out.sum_time += sol.weight_derivs(i) * (g00 - (1.0 - xi) * c.green_dz(0, 0));
    }
    return out;
}

inline double entropy_v3(const GreenDerivativeSums& sums) {
    if (std::abs(sums.sum_time) < 1e-14)
        throw DivisionNearZero("entropy denominator sum", sums.sum_time);
    return sums.sum_entropy / sums.sum_time;
}

inline EntropyTriple entropy_triple(const ExitChainKernel& kernel, double escape_rate,
                                    const MeanLetterLength& mean_length,
                                    const GreenDerivativeSums& sums) {
    EntropyTriple t;
    t.v1 = entropy_v1(escape_rate, mean_length);
    t.exit_chain_rate = exit_chain_entropy_rate(kernel);
    t.v2 = escape_rate * t.exit_chain_rate;
    t.v3 = entropy_v3(sums);
    t.spread = std::max({std::abs(t.v1 - t.v2), std::abs(t.v1 - t.v3), std::abs(t.v2 - t.v3)});
    return t;
}

}  // namespace fpwalk

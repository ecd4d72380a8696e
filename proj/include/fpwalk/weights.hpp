#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "fpwalk/errors.hpp"
#include "fpwalk/product_spec.hpp"
#include "fpwalk/resolvent.hpp"

namespace fpwalk {

// Solution of the coupled weight system at evaluation point z.  weight[i] is
// the point at which factor i's generating functions are evaluated inside
// the product walk; it satisfies
//   weight[i] = alpha[i] * z / (1 - sum_{j != i} alpha[j] * z * R_j(weight[j]))
// where R_j(w) = sum_s p_j(root, s) * F_j(s, root | w) is the return sum of
// factor j.
struct WeightSolution {
    double z = 1.0;
    Eigen::VectorXd weights;
    Eigen::VectorXd weight_derivs;  // d weight / dz, filled by weight_derivatives
    std::vector<ResolventCache> caches;  // factor i evaluated at weights[i]
    double residual = 0.0;
    long iterations = 0;
    bool monotone = true;
    bool has_derivs = false;
};

namespace detail {

// Return sum R(w) of one factor via a single linear solve for the root
// column of the Green matrix.
inline double factor_return_sum(const FactorChain& f, int factor_id, double w) {
    const int n = f.size();
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - w * f.p;
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(n);
    e0(0) = 1.0;
    const Eigen::VectorXd col = Eigen::PartialPivLU<Eigen::MatrixXd>(m).solve(e0);
    if (!col.allFinite() || std::abs(col(0)) < 1e-14) throw SingularResolvent(factor_id, w);
    double sum = 0.0;
    for (int s = 0; s < n; ++s) sum += f.p(0, s) * col(s) / col(0);
    return sum;
}

}  // namespace detail

// Solves the weight system by monotone fixed-point iteration from
// weight[i] = alpha[i] * z (or from a warm start when given).  Throws
// NoConvergence when the iteration caps out or leaves the unit interval,
// which for z > 1 signals that no solution exists at that z.
inline WeightSolution solve_weights(const FreeProductSpec& spec, double z,
                                    const Eigen::VectorXd* warm_start = nullptr,
                                    double tol = 1e-14, long max_iterations = 1000000) {
    const int r = spec.num_factors();
    Eigen::VectorXd xi(r);
    for (int i = 0; i < r; ++i) xi(i) = warm_start ? (*warm_start)(i) : spec.alphas[i] * z;

    WeightSolution sol;
    sol.z = z;
    Eigen::VectorXd ret(r), next(r);
    for (long iter = 1; iter <= max_iterations; ++iter) {
        double change = 0.0;
        try {
            for (int i = 0; i < r; ++i)
                ret(i) = detail::factor_return_sum(spec.factors[i], i, xi(i));
        } catch (const SingularResolvent&) {
            throw NoConvergence("weight iteration hit a singular factor resolvent", iter,
                                1.0);
        }
        double weighted = 0.0;
        for (int j = 0; j < r; ++j) weighted += spec.alphas[j] * ret(j);
        for (int i = 0; i < r; ++i) {
            const double denom = 1.0 - z * (weighted - spec.alphas[i] * ret(i));
            if (denom < 1e-12)
                throw NoConvergence("weight iteration denominator collapsed", iter, denom);
            next(i) = spec.alphas[i] * z / denom;
            if (next(i) >= 1.0 - 1e-12)
                throw NoConvergence("weight left the unit interval", iter, next(i));
            if (next(i) < xi(i) - 1e-13) sol.monotone = false;
            change = std::max(change, std::abs(next(i) - xi(i)));
        }
        xi = next;
        sol.iterations = iter;
        if (change < tol) break;
        if (iter == max_iterations)
            throw NoConvergence("weight iteration did not converge", iter, change);
    }

    sol.weights = xi;
    sol.caches.reserve(r);
    for (int i = 0; i < r; ++i)
        sol.caches.push_back(factor_resolvent(spec.factors[i], i, xi(i)));

    // Residual of the fixed point, recomputed from the final caches.
    double weighted = 0.0;
    Eigen::VectorXd rsum(r);
    for (int j = 0; j < r; ++j) {
        double s = 0.0;
        for (int t = 0; t < spec.factors[j].size(); ++t)
            s += spec.factors[j].p(0, t) * sol.caches[j].first_visit(t, 0);
        rsum(j) = s;
        weighted += spec.alphas[j] * s;
    }
    for (int i = 0; i < r; ++i) {
        const double denom = 1.0 - z * (weighted - spec.alphas[i] * rsum(i));
        sol.residual = std::max(sol.residual, std::abs(xi(i) - spec.alphas[i] * z / denom));
    }
    return sol;
}

// Fills weight_derivs by implicit differentiation of the fixed point:
// with Phi_i(z, w) = alpha_i z / D_i and D_i = 1 - z sum_{j!=i} alpha_j R_j(w_j),
// solve (I - dPhi/dw) w' = dPhi/dz.
inline void weight_derivatives(const FreeProductSpec& spec, WeightSolution& sol) {
    const int r = spec.num_factors();
    Eigen::VectorXd rsum(r), rsum_dw(r);
    for (int j = 0; j < r; ++j) {
        double s = 0.0, sd = 0.0;
        for (int t = 0; t < spec.factors[j].size(); ++t) {
            s += spec.factors[j].p(0, t) * sol.caches[j].first_visit(t, 0);
            sd += spec.factors[j].p(0, t) * sol.caches[j].first_visit_dz(t, 0);
        }
        rsum(j) = s;
        rsum_dw(j) = sd;
    }
    double weighted = 0.0;
    for (int j = 0; j < r; ++j) weighted += spec.alphas[j] * rsum(j);

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(r, r);
    Eigen::VectorXd rhs(r);
    const double z = sol.z;
    for (int i = 0; i < r; ++i) {
        const double others = weighted - spec.alphas[i] * rsum(i);
        const double d = 1.0 - z * others;
        if (std::abs(d) < 1e-12) throw DivisionNearZero("weight system denominator", d);
        const double d2 = d * d;
        for (int j = 0; j < r; ++j)
            if (j != i) jac(i, j) = spec.alphas[i] * z * z * spec.alphas[j] * rsum_dw(j) / d2;
        rhs(i) = spec.alphas[i] / d + spec.alphas[i] * z * others / d2;
    }

    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(r, r) - jac;
    const Eigen::VectorXd deriv = Eigen::PartialPivLU<Eigen::MatrixXd>(lhs).solve(rhs);
    if (!deriv.allFinite() || (lhs * deriv - rhs).cwiseAbs().maxCoeff() > 1e-10)
        throw SingularJacobian("implicit differentiation of the weight system failed");
    sol.weight_derivs = deriv;
    sol.has_derivs = true;
}

// Total last-visit weight of the non-root states of one factor,
//   B(w) = sum_{h != root} L(root, h | w) = 1 / ((1 - w) G(root, root | w)) - 1,
// and its derivative in w.
inline double last_visit_total(const ResolventCache& cache) {
    const double d = (1.0 - cache.z) * cache.green(0, 0);
    if (std::abs(d) < 1e-14) throw DivisionNearZero("last visit total denominator", d);
    return 1.0 / d - 1.0;
}

inline double last_visit_total_dz(const ResolventCache& cache) {
    const double g = cache.green(0, 0);
    const double d = (1.0 - cache.z) * g;
    if (std::abs(d) < 1e-14) throw DivisionNearZero("last visit total denominator", d);
    return (g - (1.0 - cache.z) * cache.green_dz(0, 0)) / (d * d);
}

// Per-type-pair exit step generating function
//   gamma_{i,j}(z) = (1 / alpha_i) * (w_i(z) / w_j(z)) * B_j(w_j(z))
// evaluated at the solution's z.
inline double exit_step_gf(const FreeProductSpec& spec, const WeightSolution& sol, int i,
                           int j) {
    return sol.weights(i) / sol.weights(j) * last_visit_total(sol.caches[j]) /
           spec.alphas[i];
}

// d/dz of gamma_{i,j} at the solution's z; needs weight_derivs.
inline double exit_step_gf_deriv(const FreeProductSpec& spec, const WeightSolution& sol,
                                 int i, int j) {
    const double wi = sol.weights(i), wj = sol.weights(j);
    const double wi_p = sol.weight_derivs(i), wj_p = sol.weight_derivs(j);
    const double b = last_visit_total(sol.caches[j]);
    const double b_dw = last_visit_total_dz(sol.caches[j]);
    return ((wi_p * wj - wi * wj_p) / (wj * wj) * b + wi / wj * b_dw * wj_p) /
           spec.alphas[i];
}

// Certifies that the weight system still has a solution slightly beyond
// z = 1 (the analytic formulas need this margin).  Walks z from 1 to
// 1 + delta in ten continuation steps with warm starts; returns 1 + delta on
// success and throws TransienceGateFailed otherwise.
inline double certify_transience(const FreeProductSpec& spec, double delta = 1e-3) {
    try {
        WeightSolution sol = solve_weights(spec, 1.0);
        for (int step = 1; step <= 10; ++step) {
            const double z = 1.0 + delta * step / 10.0;
            sol = solve_weights(spec, z, &sol.weights);
        }
    } catch (const NoConvergence& e) {
        throw TransienceGateFailed(std::string("no weight solution beyond z = 1: ") +
                                   e.what());
    } catch (const SingularResolvent& e) {
        throw TransienceGateFailed(std::string("no weight solution beyond z = 1: ") +
                                   e.what());
    }
    return 1.0 + delta;
}

// First-return generating value of the whole product walk at the root,
//   U(z) = sum_i alpha_i z R_i(w_i(z)),
// and the product Green value G(root, root | z) = 1 / (1 - U(z)).
inline double product_green_origin(const FreeProductSpec& spec, const WeightSolution& sol) {
    double u = 0.0;
    for (int i = 0; i < spec.num_factors(); ++i) {
        double s = 0.0;
        for (int t = 0; t < spec.factors[i].size(); ++t)
            s += spec.factors[i].p(0, t) * sol.caches[i].first_visit(t, 0);
        u += spec.alphas[i] * sol.z * s;
    }
    if (u >= 1.0 - 1e-14) throw DivisionNearZero("product Green denominator", 1.0 - u);
    return 1.0 / (1.0 - u);
}

}  // namespace fpwalk

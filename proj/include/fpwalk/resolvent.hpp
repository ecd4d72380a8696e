#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "fpwalk/errors.hpp"
#include "fpwalk/factor_chain.hpp"

namespace fpwalk {

// Green matrix of one factor at a fixed evaluation point z:
//   green(x,y)  = sum_n p^(n)(x,y) z^n  (entries of (I - zP)^{-1})
//   green_dz    = d/dz green = green * P * green
// All derived quantities (first visit, last visit, first return) are ratios
// of these entries.
class ResolventCache {
public:
    int factor_id = -1;
    double z = 0.0;
    Eigen::MatrixXd green;
    Eigen::MatrixXd green_dz;
    double residual = 0.0;  // max |(I - zP) green - I|

    double first_visit(int x, int y) const {
        return green(x, y) / checked(green(y, y), "first visit denominator");
    }
    double last_visit(int x, int y) const {
        return green(x, y) / checked(green(x, x), "last visit denominator");
    }
    double first_return(int x) const {
        return 1.0 - 1.0 / checked(green(x, x), "first return denominator");
    }

    // d/dz of the ratios above, by the quotient rule.
    double first_visit_dz(int x, int y) const {
        const double d = checked(green(y, y), "first visit denominator");
        return (green_dz(x, y) * d - green(x, y) * green_dz(y, y)) / (d * d);
    }
    double last_visit_dz(int x, int y) const {
        const double d = checked(green(x, x), "last visit denominator");
        return (green_dz(x, y) * d - green(x, y) * green_dz(x, x)) / (d * d);
    }

private:
    static double checked(double v, const char* what) {
        if (std::abs(v) < 1e-14) throw DivisionNearZero(what, v);
        return v;
    }
};

// Builds the cache for one factor.  Throws SingularResolvent when I - zP is
// numerically singular at z (for row-stochastic P this happens at z = 1 and
// beyond; factors are normally evaluated strictly inside the unit interval).
inline ResolventCache factor_resolvent(const FactorChain& chain, int factor_id, double z) {
    const int n = chain.size();
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - z * chain.p;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    ResolventCache cache;
    cache.factor_id = factor_id;
    cache.z = z;
    cache.green = lu.solve(Eigen::MatrixXd::Identity(n, n));
    if (!cache.green.allFinite()) throw SingularResolvent(factor_id, z);
    cache.residual = (m * cache.green - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (cache.residual > 1e-10) throw SingularResolvent(factor_id, z);
    cache.green_dz = cache.green * chain.p * cache.green;
    return cache;
}

}  // namespace fpwalk

#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "fpwalk/errors.hpp"

namespace fpwalk {

struct DominantEigen {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;  // max |A v - value * v| on the returned vector
    long iterations = 0;
};

// Perron value of a nonnegative matrix by power iteration.  The iteration
// runs on A^2 so that period-2 structure (alternating type graphs) does not
// make the Rayleigh quotient oscillate; the eigenvector of A itself is then
// recovered as A v + value * v, which projects onto the dominant mode.
inline DominantEigen dominant_eigen(const Eigen::MatrixXd& a, double rel_tol = 1e-12,
                                    long max_iterations = 100000) {
    const int n = static_cast<int>(a.rows());
    const Eigen::MatrixXd b = a * a;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double m_prev = -1.0;
    DominantEigen out;
    for (long iter = 1; iter <= max_iterations; ++iter) {
        Eigen::VectorXd bv = b * v;
        const double norm = bv.norm();
        if (norm < 1e-300) {  // nilpotent: spectral radius zero
            out.value = 0.0;
            out.vector = v;
            out.iterations = iter;
            return out;
        }
        v = bv / norm;
        const double m = v.dot(b * v);
        out.iterations = iter;
        if (std::abs(m - m_prev) <= rel_tol * std::max(1.0, std::abs(m)) &&
            (b * v - m * v).cwiseAbs().maxCoeff() <= 1e-11 * std::max(1.0, std::abs(m))) {
            m_prev = m;
            break;
        }
        m_prev = m;
        if (iter == max_iterations)
            throw NoConvergence("power iteration did not settle", iter, std::abs(m - m_prev));
    }
    out.value = std::sqrt(std::max(0.0, m_prev));
    Eigen::VectorXd w = a * v + out.value * v;
    const double wn = w.norm();
    if (wn > 1e-300) w /= wn; else w = v;
    out.vector = w;
    out.residual = (a * w - out.value * w).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace fpwalk

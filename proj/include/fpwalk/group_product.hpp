#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fpwalk/errors.hpp"
#include "fpwalk/factor_chain.hpp"
#include "fpwalk/resolvent.hpp"

namespace fpwalk {

// Free products of groups: factors are described by their first-visit
// generating functions instead of explicit state matrices, which admits
// infinite groups whose functions have closed forms.

struct GroupElem {
    long long a = 0;
    long long b = 0;
    bool operator==(const GroupElem&) const = default;
};

class GroupFactor {
public:
    virtual ~GroupFactor() = default;
    virtual std::string name() const = 0;
    // Step distribution: support with probabilities; never contains the identity.
    virtual std::vector<std::pair<GroupElem, double>> step_support() const = 0;
    virtual GroupElem compose(const GroupElem& x, const GroupElem& y) const = 0;
    virtual GroupElem inverse(const GroupElem& x) const = 0;
    virtual bool is_identity(const GroupElem& x) const = 0;
    // F(identity -> g | w): first-visit generating function of the factor walk.
    virtual double first_visit(const GroupElem& g, double w) const = 0;
    // G(identity, identity | w).
    virtual double green_origin(double w) const = 0;
    // Non-identity elements grouped into shells 0, 1, 2, ...; truncating after
    // shell N leaves a tail certified by tail_bound(N, w).
    virtual std::vector<GroupElem> shell(int level) const = 0;
    virtual int shell_count() const = 0;  // 0 when the group is infinite
    virtual double tail_bound(int last_level, double w) const = 0;

    // Return sum feeding the weight system: sum_s mu(s) F(identity -> s^{-1} | w).
    double return_sum(double w) const {
        double r = 0.0;
        for (const auto& [g, mu] : step_support()) r += mu * first_visit(inverse(g), w);
        return r;
    }
};

// ---------------------------------------------------------------------------
// The group Z x (Z/2Z) with steps +-(1,0) and (0,1), each with probability
// 1/3.  Writing a = (1,0), b = (1,1), c = (0,1), the ascending first-visit
// functions Fhat(a), Fhat(b) solve the coupled quadratics
//   Fhat(a) = (w/3)(1 + Fhat(b) + Fhat(a)^2 + Fhat(b)^2)
//   Fhat(b) = (w/3)(Fhat(a) + 2 Fhat(a) Fhat(b))
// and every F(e -> (n, j) | w) is a binomial sum in them.

struct ZZ2Values {
    double fhat_a = 0.0, fhat_b = 0.0;  // ascending first visits of a and b
    double fa = 0.0, fb = 0.0, fc = 0.0;  // F(e -> a), F(e -> b), F(e -> c)
    double quad_residual = 0.0;         // max residual of the two quadratics
};

// Independent route for the coupled quadratics: eliminate Fhat(b) through the
// second equation and bisect for the smallest positive root of the first.
inline std::pair<double, double> zz2_fhat_by_elimination(double w) {
    const auto fb_of = [w](double t) { return (w / 3.0) * t / (1.0 - (2.0 * w / 3.0) * t); };
    const auto g = [&](double t) {
        const double fb = fb_of(t);
        return (w / 3.0) * (1.0 + fb + t * t + fb * fb) - t;
    };
    double lo = 0.0, hi = 0.0;
    for (double t = 1e-3; t <= 1.0; t += 1e-3) {
        if (g(t) < 0.0) {
            hi = t;
            break;
        }
        lo = t;
    }
    if (hi == 0.0) throw NoConvergence("no sign change for the ascending first visits", 0, 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 0.0 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    return {t, fb_of(t)};
}

class ZZ2Factor : public GroupFactor {
public:
    std::string name() const override { return "ZxZ2"; }

    std::vector<std::pair<GroupElem, double>> step_support() const override {
        return {{{1, 0}, 1.0 / 3.0}, {{-1, 0}, 1.0 / 3.0}, {{0, 1}, 1.0 / 3.0}};
    }
    GroupElem compose(const GroupElem& x, const GroupElem& y) const override {
        return {x.a + y.a, (x.b + y.b) & 1};
    }
    GroupElem inverse(const GroupElem& x) const override { return {-x.a, x.b}; }
    bool is_identity(const GroupElem& x) const override { return x.a == 0 && x.b == 0; }

    const ZZ2Values& values(double w) const {
        long long key;
        static_assert(sizeof(key) == sizeof(w));
        std::memcpy(&key, &w, sizeof(key));
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(key, solve_at(w)).first->second;
    }

    double first_visit(const GroupElem& g, double w) const override {
        const ZZ2Values& v = values(w);
        const long long m = std::llabs(g.a);
        if (m == 0) return g.b == 0 ? 1.0 : v.fc;
        // Binomial sum over the number k of b-type ascents; parity k matches
        // g.b directly, otherwise one extra c-step is needed.
        double coeff = 1.0;
        double pa = std::pow(v.fhat_a, static_cast<double>(m));
        double sum = 0.0;
        for (long long k = 0; k <= m; ++k) {
            const double term = coeff * pa;
            sum += ((k & 1) == g.b) ? term : term * v.fc;
            coeff *= static_cast<double>(m - k) / static_cast<double>(k + 1);
            pa *= v.fhat_b / v.fhat_a;
        }
        return sum;
    }

    double green_origin(double w) const override {
        const double u = w * return_sum(w);
        if (u >= 1.0 - 1e-14) throw DivisionNearZero("group Green denominator", 1.0 - u);
        return 1.0 / (1.0 - u);
    }

    std::vector<GroupElem> shell(int level) const override {
        if (level == 0) return {{0, 1}};
        const long long n = level;
        return {{n, 0}, {n, 1}, {-n, 0}, {-n, 1}};
    }
    int shell_count() const override { return 0; }

    // Tail of sum_{g' beyond shell N} F(g') (|log F(g g')| + |log F(g')|),
    // uniform over g in the step support.  Uses F <= fhat^m on shell m and
    // F >= fc fhat^m, giving a closed geometric-arithmetic series.
    double tail_bound(int last_level, double w) const override {
        const ZZ2Values& v = values(w);
        const double fh = v.fhat_a + v.fhat_b;
        if (fh >= 1.0) return std::numeric_limits<double>::infinity();
        const double lh = -std::log(fh), lc = -std::log(v.fc);
        const double n1 = last_level + 1;
        const double b = std::pow(fh, n1) / (1.0 - fh);
        const double a = std::pow(fh, n1) * (n1 - last_level * fh) / ((1.0 - fh) * (1.0 - fh));
        return 4.0 * (lh * (2.0 * a + b) + 2.0 * lc * b);
    }

private:
    static ZZ2Values solve_at(double w) {
        ZZ2Values v;
        double fa = 0.0, fb = 0.0;
        bool converged = false;
        for (long iter = 0; iter < 1000000; ++iter) {
            const double na = (w / 3.0) * (1.0 + fb + fa * fa + fb * fb);
            const double nb = (w / 3.0) * (fa + 2.0 * fa * fb);
            const double change = std::max(std::abs(na - fa), std::abs(nb - fb));
            fa = na;
            fb = nb;
            if (change < 1e-15) {
                converged = true;
                break;
            }
            if (fa + fb >= 1.0) break;  // no solution below 1 at this w
        }
        if (!converged) std::tie(fa, fb) = zz2_fhat_by_elimination(w);
        v.fhat_a = fa;
        v.fhat_b = fb;
        v.quad_residual =
            std::max(std::abs((w / 3.0) * (1.0 + fb + fa * fa + fb * fb) - fa),
                     std::abs((w / 3.0) * (fa + 2.0 * fa * fb) - fb));

        // The remaining first visits solve a linear 3x3 system.
        Eigen::Matrix3d m;
        Eigen::Vector3d rhs;
        const double t = w / 3.0;
        m << 1.0 - t * fa, -t * (1.0 + fb), 0.0,
             -t * (1.0 + fb), 1.0 - t * fa, -t,
             0.0, -2.0 * t, 1.0;
        rhs << t, 0.0, t;
        const Eigen::Vector3d sol = m.partialPivLu().solve(rhs);
        v.fa = sol(0);
        v.fb = sol(1);
        v.fc = sol(2);
        return v;
    }

    mutable std::map<long long, ZZ2Values> cache_;
};

// ---------------------------------------------------------------------------
// Finite groups given by a multiplication table (index 0 = identity).  The
// factor doubles as an ordinary chain via p(x, y) = mu(x^{-1} y), so the same
// group can be run through the chain pipeline for cross-checks.

class FiniteGroupFactor : public GroupFactor {
public:
    FiniteGroupFactor(std::string name, std::vector<std::vector<int>> table,
                      std::vector<double> mu)
        : name_(std::move(name)), table_(std::move(table)), mu_(std::move(mu)) {
        const int n = static_cast<int>(table_.size());
        if (n < 2) throw ValidationError("finite group factor needs at least 2 elements");
        if (static_cast<int>(mu_.size()) != n || mu_[0] != 0.0)
            throw ValidationError("step distribution must assign 0 to the identity");
        inverse_.assign(n, -1);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (table_[x][y] == 0) inverse_[x] = y;
        for (int x = 0; x < n; ++x)
            if (inverse_[x] < 0) throw ValidationError("multiplication table has no inverse");

        chain_.name = name_;
        chain_.states.resize(n);
        for (int x = 0; x < n; ++x) chain_.states[x] = "g" + std::to_string(x);
        chain_.states[0] = "e";
        chain_.p = Eigen::MatrixXd::Zero(n, n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) chain_.p(x, y) = mu_[table_[inverse_[x]][y]];
        validate_factor(chain_);
    }

    std::string name() const override { return name_; }
    const FactorChain& chain() const { return chain_; }

    std::vector<std::pair<GroupElem, double>> step_support() const override {
        std::vector<std::pair<GroupElem, double>> out;
        for (int x = 1; x < static_cast<int>(mu_.size()); ++x)
            if (mu_[x] > 0.0) out.push_back({{x, 0}, mu_[x]});
        return out;
    }
    GroupElem compose(const GroupElem& x, const GroupElem& y) const override {
        return {table_[x.a][y.a], 0};
    }
    GroupElem inverse(const GroupElem& x) const override { return {inverse_[x.a], 0}; }
    bool is_identity(const GroupElem& x) const override { return x.a == 0; }

    double first_visit(const GroupElem& g, double w) const override {
        return resolvent_at(w).first_visit(0, static_cast<int>(g.a));
    }
    double green_origin(double w) const override { return resolvent_at(w).green(0, 0); }

    std::vector<GroupElem> shell(int level) const override {
        std::vector<GroupElem> out;
        if (level == 0)
            for (int x = 1; x < static_cast<int>(mu_.size()); ++x) out.push_back({x, 0});
        return out;
    }
    int shell_count() const override { return 1; }
    double tail_bound(int, double) const override { return 0.0; }

private:
    const ResolventCache& resolvent_at(double w) const {
        long long key;
        std::memcpy(&key, &w, sizeof(key));
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(key, factor_resolvent(chain_, 0, w)).first->second;
    }

    std::string name_;
    std::vector<std::vector<int>> table_;
    std::vector<double> mu_;
    std::vector<int> inverse_;
    FactorChain chain_;
    mutable std::map<long long, ResolventCache> cache_;
};

// ---------------------------------------------------------------------------
// Weight system and entropy for group products.

struct GroupWeightSolution {
    double z = 1.0;
    std::vector<double> weights;
    double residual = 0.0;
    long iterations = 0;
};

inline GroupWeightSolution solve_group_weights(const std::vector<const GroupFactor*>& factors,
                                               const std::vector<double>& alphas, double z,
                                               double tol = 1e-14,
                                               long max_iterations = 1000000) {
    const int r = static_cast<int>(factors.size());
    std::vector<double> xi(r), ret(r), next(r);
    for (int i = 0; i < r; ++i) xi[i] = alphas[i] * z;
    GroupWeightSolution sol;
    sol.z = z;
    for (long iter = 1; iter <= max_iterations; ++iter) {
        for (int i = 0; i < r; ++i) ret[i] = factors[i]->return_sum(xi[i]);
        double weighted = 0.0;
        for (int j = 0; j < r; ++j) weighted += alphas[j] * ret[j];
        double change = 0.0;
        for (int i = 0; i < r; ++i) {
            const double denom = 1.0 - z * (weighted - alphas[i] * ret[i]);
            if (denom < 1e-12)
                throw NoConvergence("group weight iteration denominator collapsed", iter, denom);
            next[i] = alphas[i] * z / denom;
            if (next[i] >= 1.0 - 1e-12)
                throw NoConvergence("group weight left the unit interval", iter, next[i]);
            change = std::max(change, std::abs(next[i] - xi[i]));
        }
        xi = next;
        sol.iterations = iter;
        if (change < tol) break;
        if (iter == max_iterations)
            throw NoConvergence("group weight iteration did not converge", iter, change);
    }
    sol.weights = xi;
    for (int i = 0; i < r; ++i) ret[i] = factors[i]->return_sum(xi[i]);
    double weighted = 0.0;
    for (int j = 0; j < r; ++j) weighted += alphas[j] * ret[j];
    for (int i = 0; i < r; ++i) {
        const double denom = 1.0 - z * (weighted - alphas[i] * ret[i]);
        sol.residual = std::max(sol.residual, std::abs(xi[i] - alphas[i] * z / denom));
    }
    return sol;
}

// Weight of the symmetric two-factor Z x Z/2 product by bisection: the fixed
// point condition collapses to one equation in one unknown,
//   2 - 2 xi = 1 - (2/3) xi F(a | xi) - (1/3) xi F(c | xi).
inline double solve_zz2_xi(const ZZ2Factor& factor, double tol = 1e-12) {
    const auto psi = [&](double xi) {
        const ZZ2Values& v = factor.values(xi);
        return 1.0 - 2.0 * xi + (2.0 / 3.0) * xi * v.fa + (1.0 / 3.0) * xi * v.fc;
    };
    double lo = 1e-6, hi = 1.0 - 1e-9;
    if (psi(lo) <= 0.0 || psi(hi) >= 0.0)
        throw NoConvergence("bisection bracket failed for the group weight", 0, 0.0);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (psi(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct GroupEntropyReport {
    double h = 0.0;
    std::vector<double> weights;
    std::vector<double> rho;  // probability that the sticking letter sequence starts in factor i
    std::vector<int> truncation_level;
    std::vector<double> tail;  // certified remainder bound per factor
};

// Entropy of the group product from the limit-boundary formula.  The inner
// sums over each group are truncated at a shell whose certified tail is below
// rel_tol of the running total (finite groups are summed exactly).
inline GroupEntropyReport entropy_groups(const std::vector<const GroupFactor*>& factors,
                                         const std::vector<double>& alphas,
                                         const std::vector<double>& weights,
                                         double rel_tol = 1e-6, int max_level = 200) {
    const int r = static_cast<int>(factors.size());
    GroupEntropyReport rep;
    rep.weights = weights;
    rep.rho.resize(r);
    rep.truncation_level.assign(r, 0);
    rep.tail.assign(r, 0.0);

    for (int i = 0; i < r; ++i) {
        const GroupFactor& f = *factors[i];
        const double xi = weights[i];
        const double green = f.green_origin(xi);
        const double rho = 1.0 - (1.0 - xi) * green;
        rep.rho[i] = rho;

        const auto support = f.step_support();
        std::vector<double> inner(support.size(), 0.0);  // the sums F(g') log(F(g g')/F(g'))
        int level = 0;
        double tail = 0.0;
        for (;; ++level) {
            if (f.shell_count() > 0 && level >= f.shell_count()) {
                tail = 0.0;
                break;
            }
            if (level > max_level)
                throw TailBoundTooLoose("group sum truncation", rel_tol, tail);
            for (const GroupElem& gp : f.shell(level)) {
                const double fgp = f.first_visit(gp, xi);
                if (fgp <= 0.0) continue;
                for (std::size_t s = 0; s < support.size(); ++s) {
                    const double fcomp = f.first_visit(f.compose(support[s].first, gp), xi);
                    inner[s] += fgp * std::log(fcomp / fgp);
                }
            }
            if (f.shell_count() == 0) {
                tail = f.tail_bound(level, xi);
                double floor_ = 0.0;
                for (double v : inner) floor_ = std::max(floor_, std::abs(v));
                if (level >= 1 && tail <= rel_tol * std::max(floor_, 1e-12)) break;
            }
        }
        rep.truncation_level[i] = level;
        rep.tail[i] = tail;

        for (std::size_t s = 0; s < support.size(); ++s) {
            const double fg = f.first_visit(support[s].first, xi);
            const double term =
                (1.0 - rho) * std::log(fg) + (1.0 - xi) * green * inner[s];
            rep.h -= alphas[i] * support[s].second * term;
        }
    }
    return rep;
}

// Truncated mass of the first sticking letter in factor i; converges to
// rho_i as shells are added.
inline double first_letter_mass(const GroupFactor& f, double xi, int levels) {
    const double green = f.green_origin(xi);
    double sum = 0.0;
    for (int level = 0; level <= levels; ++level) {
        if (f.shell_count() > 0 && level >= f.shell_count()) break;
        for (const GroupElem& g : f.shell(level))
            sum += (1.0 - xi) * green * f.first_visit(g, xi);
    }
    return sum;
}

}  // namespace fpwalk

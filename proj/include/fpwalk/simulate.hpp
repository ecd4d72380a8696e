#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "fpwalk/exit_chain.hpp"
#include "fpwalk/product_spec.hpp"
#include "fpwalk/rng.hpp"

namespace fpwalk {

struct SimConfig {
    long walkers = 10000;
    long horizon = 10000;
    std::uint64_t seed = 1;
    int threads = 1;        // any value yields bit-identical aggregates
    int exit_burn_in = 10;  // leading frozen letters skipped by the entropy estimator
    int exit_end_trim = 10; // trailing letters skipped (they may not be final yet)
    bool keep_words = false;  // retain final-word counts (small horizons only)
};

struct SimEstimate {
    double value = 0.0;
    double se = 0.0;
    long n = 0;
};

struct Letter {
    std::int16_t factor;
    std::int16_t state;
};

// One walker's full history; only recorded on demand for small runs.
struct Trajectory {
    std::vector<std::vector<Letter>> words;  // word after step 0..horizon
    std::vector<long> exit_times;            // last step that changed a letter at depth <= k
};

struct SimResult {
    SimConfig config;
    bool has_lengths = false;   // true when an exit kernel was supplied
    SimEstimate block_speed;        // mean depth / n
    SimEstimate length_speed;       // mean word length / n (last-visit lengths)
    SimEstimate first_visit_speed;  // same with first-visit lengths
    SimEstimate metric_speed;       // mean step-metric length / n
    SimEstimate exit_entropy;       // per-walker mean -log q over exit transitions
    std::vector<std::uint64_t> transition_counts;  // [source type * L + target letter]
    std::vector<std::uint64_t> type_totals;        // transitions per source type
    std::vector<double> block_rate_per_walker;
    std::vector<double> length_rate_per_walker;  // empty without kernel
    std::map<std::string, std::uint64_t> word_counts;  // when keep_words
};

namespace detail {

// Sampling tables: cumulative rows for the factor choice and for every
// (factor, state) transition row.
struct Sampler {
    std::vector<double> alpha_cdf;
    // rows[f][s] = list of (cumulative probability, target state)
    std::vector<std::vector<std::vector<std::pair<double, int>>>> rows;

    explicit Sampler(const FreeProductSpec& spec) {
        double acc = 0.0;
        for (double a : spec.alphas) {
            acc += a;
            alpha_cdf.push_back(acc);
        }
        alpha_cdf.back() = 1.0;
        rows.resize(spec.num_factors());
        for (int f = 0; f < spec.num_factors(); ++f) {
            const auto& p = spec.factors[f].p;
            rows[f].resize(p.rows());
            for (int s = 0; s < p.rows(); ++s) {
                double c = 0.0;
                for (int t = 0; t < p.cols(); ++t)
                    if (p(s, t) > 0.0) {
                        c += p(s, t);
                        rows[f][s].emplace_back(c, t);
                    }
                if (!rows[f][s].empty()) rows[f][s].back().first = 1.0;
            }
        }
    }

    int pick_factor(double u) const {
        for (std::size_t i = 0; i + 1 < alpha_cdf.size(); ++i)
            if (u < alpha_cdf[i]) return static_cast<int>(i);
        return static_cast<int>(alpha_cdf.size()) - 1;
    }
    int pick_target(int f, int s, double u) const {
        const auto& row = rows[f][s];
        for (std::size_t i = 0; i + 1 < row.size(); ++i)
            if (u < row[i].first) return row[i].second;
        return row.back().second;
    }
};

struct ChunkAccum {
    long n = 0;
    double s_block = 0, s2_block = 0;
    double s_len = 0, s2_len = 0;
    double s_fv = 0, s2_fv = 0;
    double s_metric = 0, s2_metric = 0;
    double s_hq = 0, s2_hq = 0;
    long n_hq = 0;
    std::vector<std::uint64_t> counts;
    std::map<std::string, std::uint64_t> words;
};

inline SimEstimate finish(double s, double s2, long n) {
    SimEstimate e;
    e.n = n;
    if (n == 0) return e;
    e.value = s / n;
    if (n > 1) {
        const double var = std::max(0.0, (s2 - n * e.value * e.value) / (n - 1));
        e.se = std::sqrt(var / n);
    }
    return e;
}

}  // namespace detail

// Runs independent walkers of the product chain.  Results are identical for
// any thread count and for repeated runs with the same seed: every walker
// has its own counter-derived stream, and floating point accumulation
// happens per fixed-size chunk, reduced in chunk order at the end.
//
// When an exit kernel is given, word-length and exit-entropy estimators are
// filled; otherwise only the metric-free aggregates are produced.
inline SimResult run_walkers(const FreeProductSpec& spec, const SimConfig& cfg,
                             const ExitChainKernel* kernel = nullptr,
                             std::vector<Trajectory>* trajectories = nullptr) {
    const detail::Sampler sampler(spec);
    const LetterIndex letters(spec);
    const int r = spec.num_factors();
    const int nl = letters.total();
    if (cfg.keep_words && nl > 255)
        throw ValidationError("final-word tracking needs fewer than 256 letters");

    // Per-letter lookup tables indexed by letter id.
    std::vector<int> metric_of(nl);
    for (int i = 0; i < r; ++i) {
        const auto dist = root_distances(spec.factors[i]);
        for (int s = 1; s < spec.factors[i].size(); ++s)
            metric_of[letters.id(i, s)] = dist[s];
    }
    std::vector<double> len_of, fv_of, neg_log_q;  // neg_log_q: [type * nl + letter]
    if (kernel) {
        len_of = kernel->letter_length;
        fv_of = kernel->letter_first_visit_length;
        neg_log_q.assign(static_cast<std::size_t>(r) * nl, 0.0);
        for (int i = 0; i < r; ++i)
            for (int a = 0; a < nl; ++a) {
                const double q = kernel->q(i, a);
                neg_log_q[static_cast<std::size_t>(i) * nl + a] =
                    q > 0.0 ? -std::log(q) : std::numeric_limits<double>::infinity();
            }
    }

    const long chunk_size = 256;
    const long num_chunks = (cfg.walkers + chunk_size - 1) / chunk_size;
    std::vector<detail::ChunkAccum> accums(num_chunks);

    SimResult result;
    result.config = cfg;
    result.has_lengths = kernel != nullptr;
    result.block_rate_per_walker.resize(cfg.walkers);
    if (kernel) result.length_rate_per_walker.resize(cfg.walkers);
    if (trajectories) trajectories->resize(cfg.walkers);

    auto run_chunk = [&](long chunk) {
        detail::ChunkAccum& acc = accums[chunk];
        if (kernel) acc.counts.assign(static_cast<std::size_t>(r) * nl, 0);
        const long begin = chunk * chunk_size;
        const long end = std::min(cfg.walkers, begin + chunk_size);

        std::vector<Letter> stack;
        stack.reserve(static_cast<std::size_t>(std::min<long>(cfg.horizon, 1 << 20)) + 1);
        std::vector<long> last_touch;

        for (long w = begin; w < end; ++w) {
            RngStream rng(cfg.seed, static_cast<std::uint64_t>(w));
            stack.clear();
            last_touch.assign(static_cast<std::size_t>(cfg.horizon) + 2, 0);
            Trajectory* traj = trajectories ? &(*trajectories)[w] : nullptr;
            if (traj) {
                traj->words.clear();
                traj->words.push_back(stack);
            }

            for (long n = 1; n <= cfg.horizon; ++n) {
                const int f = sampler.pick_factor(rng.next_double());
                std::size_t touched;
                if (!stack.empty() && stack.back().factor == f) {
                    const int t = sampler.pick_target(f, stack.back().state, rng.next_double());
                    touched = stack.size();
                    if (t == 0)
                        stack.pop_back();
                    else
                        stack.back().state = static_cast<std::int16_t>(t);
                } else {
                    const int t = sampler.pick_target(f, 0, rng.next_double());
                    stack.push_back({static_cast<std::int16_t>(f), static_cast<std::int16_t>(t)});
                    touched = stack.size();
                }
                last_touch[touched] = n;
                if (traj) traj->words.push_back(stack);
            }

            const long depth = static_cast<long>(stack.size());
            const double n = static_cast<double>(cfg.horizon);
            const double block_rate = depth / n;
            acc.n += 1;
            acc.s_block += block_rate;
            acc.s2_block += block_rate * block_rate;
            result.block_rate_per_walker[w] = block_rate;

            long metric = 0;
            double len = 0.0, fv = 0.0;
            std::vector<int> ids(depth);
            for (long k = 0; k < depth; ++k) {
                ids[k] = letters.id(stack[k].factor, stack[k].state);
                metric += metric_of[ids[k]];
            }
            const double metric_rate = metric / n;
            acc.s_metric += metric_rate;
            acc.s2_metric += metric_rate * metric_rate;

            if (traj) {
                traj->exit_times.assign(depth + 1, 0);
                long run = 0;
                for (long k = 1; k <= depth; ++k) {
                    run = std::max(run, last_touch[k]);
                    traj->exit_times[k] = run;
                }
            }

            if (kernel) {
                for (long k = 0; k < depth; ++k) {
                    len += len_of[ids[k]];
                    fv += fv_of[ids[k]];
                }
                const double len_rate = len / n, fv_rate = fv / n;
                acc.s_len += len_rate;
                acc.s2_len += len_rate * len_rate;
                acc.s_fv += fv_rate;
                acc.s2_fv += fv_rate * fv_rate;
                result.length_rate_per_walker[w] = len_rate;

                // Exit transitions: letters are final from the bottom up, so
                // skip a burn-in at the start and a safety trim at the end.
                const long first = cfg.exit_burn_in + 1;   // 0-based index of first target
                const long last = depth - cfg.exit_end_trim - 1;
                double hq = 0.0;
                long terms = 0;
                for (long k = first; k <= last; ++k) {
                    const int src_type = letters.factor_of(ids[k - 1]);
                    hq += neg_log_q[static_cast<std::size_t>(src_type) * nl + ids[k]];
                    ++acc.counts[static_cast<std::size_t>(src_type) * nl + ids[k]];
                    ++terms;
                }
                if (terms > 0 && std::isfinite(hq)) {
                    const double v = hq / terms;
                    acc.s_hq += v;
                    acc.s2_hq += v * v;
                    acc.n_hq += 1;
                }
            }

            if (cfg.keep_words) {
                std::string key(static_cast<std::size_t>(depth), '\0');
                for (long k = 0; k < depth; ++k) key[k] = static_cast<char>(ids[k]);
                ++acc.words[key];
            }
        }
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (long c = 0; c < num_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (long c = t; c < num_chunks; c += threads) run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction in chunk order.
    double s_block = 0, s2_block = 0, s_len = 0, s2_len = 0, s_fv = 0, s2_fv = 0;
    double s_metric = 0, s2_metric = 0, s_hq = 0, s2_hq = 0;
    long n = 0, n_hq = 0;
    if (kernel) {
        result.transition_counts.assign(static_cast<std::size_t>(r) * nl, 0);
        result.type_totals.assign(r, 0);
    }
    for (const auto& acc : accums) {
        n += acc.n;
        s_block += acc.s_block;
        s2_block += acc.s2_block;
        s_len += acc.s_len;
        s2_len += acc.s2_len;
        s_fv += acc.s_fv;
        s2_fv += acc.s2_fv;
        s_metric += acc.s_metric;
        s2_metric += acc.s2_metric;
        s_hq += acc.s_hq;
        s2_hq += acc.s2_hq;
        n_hq += acc.n_hq;
        if (kernel)
            for (std::size_t idx = 0; idx < acc.counts.size(); ++idx)
                result.transition_counts[idx] += acc.counts[idx];
        for (const auto& [word, count] : acc.words) result.word_counts[word] += count;
    }
    if (kernel)
        for (int i = 0; i < r; ++i)
            for (int a = 0; a < nl; ++a)
                result.type_totals[i] += result.transition_counts[static_cast<std::size_t>(i) * nl + a];

    result.block_speed = detail::finish(s_block, s2_block, n);
    result.metric_speed = detail::finish(s_metric, s2_metric, n);
    if (kernel) {
        result.length_speed = detail::finish(s_len, s2_len, n);
        result.first_visit_speed = detail::finish(s_fv, s2_fv, n);
        result.exit_entropy = detail::finish(s_hq, s2_hq, n_hq);
    }
    return result;
}

struct ConcentrationRow {
    double epsilon = 0.0;
    double fraction = 0.0;  // share of walkers with |rate - target| <= epsilon
    double se = 0.0;
};

inline std::vector<ConcentrationRow> concentration_check(const std::vector<double>& rates,
                                                         double target,
                                                         std::vector<double> epsilons = {
                                                             0.05, 0.02, 0.01}) {
    std::vector<ConcentrationRow> rows;
    const double n = static_cast<double>(rates.size());
    for (double eps : epsilons) {
        long within = 0;
        for (double v : rates)
            if (std::abs(v - target) <= eps) ++within;
        ConcentrationRow row;
        row.epsilon = eps;
        row.fraction = n > 0 ? within / n : 0.0;
        row.se = n > 0 ? std::sqrt(std::max(0.0, row.fraction * (1.0 - row.fraction) / n)) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fpwalk

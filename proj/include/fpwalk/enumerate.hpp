#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "fpwalk/errors.hpp"
#include "fpwalk/product_spec.hpp"

namespace fpwalk {

// Exact evolution of the product walk's distribution for small horizons.
// Words are encoded as strings of letter ids (LetterIndex order), so the
// empty string is the root.

struct EnumerationResult {
    std::map<std::string, double> distribution;   // at the final horizon
    std::vector<double> shannon;                  // entropy of X_n, n = 0..horizon
    std::vector<std::uint64_t> new_words;         // words first reachable at step n
    std::vector<double> return_probability;      // mass at the root after n steps
};

namespace detail {

inline void enumerate_step(const FreeProductSpec& spec, const LetterIndex& letters,
                           const std::map<std::string, double>& cur,
                           std::map<std::string, double>& next) {
    next.clear();
    for (const auto& [word, prob] : cur) {
        const int top_factor =
            word.empty() ? -1 : letters.factor_of(static_cast<unsigned char>(word.back()));
        for (int f = 0; f < spec.num_factors(); ++f) {
            const double alpha = spec.alphas[f];
            const int from =
                (f == top_factor) ? letters.state_of(static_cast<unsigned char>(word.back())) : 0;
            const auto& row = spec.factors[f].p;
            for (int t = 0; t < spec.factors[f].size(); ++t) {
                const double p = row(from, t);
                if (p <= 0.0) continue;
                std::string target = word;
                if (f == top_factor) {
                    if (t == 0)
                        target.pop_back();
                    else
                        target.back() = static_cast<char>(letters.id(f, t));
                } else {
                    target.push_back(static_cast<char>(letters.id(f, t)));
                }
                next[target] += prob * alpha * p;
            }
        }
    }
}

}  // namespace detail

// Full distribution of X_n by exact forward evolution.  Aborts with
// StateSpaceExplosion when the support exceeds max_words.
inline EnumerationResult exact_distribution(const FreeProductSpec& spec, int horizon,
                                            std::size_t max_words = 10000000) {
    const LetterIndex letters(spec);
    if (letters.total() > 255)
        throw ValidationError("exact enumeration needs fewer than 256 letters");
    EnumerationResult out;
    std::map<std::string, double> cur, next;
    cur[""] = 1.0;
    std::map<std::string, int> first_seen;
    first_seen[""] = 0;
    out.shannon.push_back(0.0);
    out.new_words.push_back(1);
    out.return_probability.push_back(1.0);
    for (int n = 1; n <= horizon; ++n) {
        detail::enumerate_step(spec, letters, cur, next);
        cur.swap(next);
        if (cur.size() > max_words) throw StateSpaceExplosion(max_words);
        double h = 0.0;
        std::uint64_t fresh = 0;
        for (const auto& [word, prob] : cur) {
            if (prob > 0.0) h -= prob * std::log(prob);
            if (first_seen.emplace(word, n).second) ++fresh;
        }
        out.shannon.push_back(h);
        out.new_words.push_back(fresh);
        const auto it = cur.find("");
        out.return_probability.push_back(it == cur.end() ? 0.0 : it->second);
    }
    out.distribution = std::move(cur);
    return out;
}

// Exact return probabilities p^(n)(root, root) for n = 0..horizon, computed
// on the ball of step-metric radius floor(horizon / 2).  Any path returning
// within the horizon stays inside that ball, so dropping transitions that
// leave it is exact for the root entry.
inline std::vector<double> exact_return_probabilities(const FreeProductSpec& spec, int horizon,
                                                      std::size_t max_words = 10000000) {
    const LetterIndex letters(spec);
    if (letters.total() > 255)
        throw ValidationError("exact enumeration needs fewer than 256 letters");
    const int radius = horizon / 2;

    // Enumerate the ball by breadth-first search over walk steps.
    std::unordered_map<std::string, int> index;
    std::vector<std::string> words;
    index[""] = 0;
    words.push_back("");
    std::size_t frontier_begin = 0;
    for (int d = 0; d < radius; ++d) {
        const std::size_t frontier_end = words.size();
        std::map<std::string, double> cur, next;
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) cur[words[i]] = 1.0;
        detail::enumerate_step(spec, letters, cur, next);
        for (const auto& [word, prob] : next)
            if (index.emplace(word, static_cast<int>(words.size())).second) {
                words.push_back(word);
                if (words.size() > max_words) throw StateSpaceExplosion(max_words);
            }
        frontier_begin = frontier_end;
    }

    // Sparse transition lists restricted to the ball.
    std::vector<std::vector<std::pair<int, double>>> edges(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::map<std::string, double> cur{{words[i], 1.0}}, next;
        detail::enumerate_step(spec, letters, cur, next);
        for (const auto& [word, prob] : next) {
            const auto it = index.find(word);
            if (it != index.end()) edges[i].emplace_back(it->second, prob);
        }
    }

    std::vector<double> mass(words.size(), 0.0), fresh(words.size());
    mass[0] = 1.0;
    std::vector<double> returns{1.0};
    for (int n = 1; n <= horizon; ++n) {
        std::fill(fresh.begin(), fresh.end(), 0.0);
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (mass[i] == 0.0) continue;
            for (const auto& [j, p] : edges[i]) fresh[j] += mass[i] * p;
        }
        mass.swap(fresh);
        returns.push_back(mass[0]);
    }
    return returns;
}

}  // namespace fpwalk

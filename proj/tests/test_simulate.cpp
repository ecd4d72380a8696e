#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "fpwalk/pipeline.hpp"
#include "fpwalk/simulate.hpp"
#include "test_helpers.hpp"

using Catch::Approx;
using fpwalk::SimConfig;

namespace {

const fpwalk::ChainAnalysis& two_chain_analysis() {
    static const fpwalk::ChainAnalysis a =
        fpwalk::analyze_chain(testutil::two_chain_product());
    return a;
}

const fpwalk::SimResult& big_run() {
    static const fpwalk::SimResult r = [] {
        SimConfig cfg;
        cfg.walkers = 2000;
        cfg.horizon = 2000;
        cfg.seed = 3;
        return fpwalk::run_walkers(two_chain_analysis().spec, cfg,
                                   &two_chain_analysis().kernel);
    }();
    return r;
}

}  // namespace

TEST_CASE("runs are bit-identical across reruns and thread counts", "[simulate]") {
    const auto spec = testutil::two_chain_product();
    const auto analysis = fpwalk::analyze_chain(spec);
    SimConfig cfg;
    cfg.walkers = 64;
    cfg.horizon = 200;
    cfg.seed = 9;

    const auto a = fpwalk::run_walkers(spec, cfg, &analysis.kernel);
    const auto b = fpwalk::run_walkers(spec, cfg, &analysis.kernel);
    CHECK(a.block_speed.value == b.block_speed.value);
    CHECK(a.block_speed.se == b.block_speed.se);
    CHECK(a.length_speed.value == b.length_speed.value);
    CHECK(a.exit_entropy.value == b.exit_entropy.value);
    CHECK(a.transition_counts == b.transition_counts);
    CHECK(a.block_rate_per_walker == b.block_rate_per_walker);

    SimConfig threaded = cfg;
    threaded.threads = 3;
    const auto c = fpwalk::run_walkers(spec, threaded, &analysis.kernel);
    CHECK(a.block_speed.value == c.block_speed.value);
    CHECK(a.length_speed.value == c.length_speed.value);
    CHECK(a.exit_entropy.value == c.exit_entropy.value);
    CHECK(a.transition_counts == c.transition_counts);
    CHECK(a.block_rate_per_walker == c.block_rate_per_walker);

    SimConfig other = cfg;
    other.seed = 10;
    const auto d = fpwalk::run_walkers(spec, other, &analysis.kernel);
    CHECK(a.block_rate_per_walker != d.block_rate_per_walker);
}

TEST_CASE("trajectories satisfy the word and exit-time definitions", "[simulate]") {
    const auto spec = testutil::two_chain_product();
    SimConfig cfg;
    cfg.walkers = 8;
    cfg.horizon = 60;
    cfg.seed = 17;
    cfg.keep_words = true;
    std::vector<fpwalk::Trajectory> trajectories;
    fpwalk::run_walkers(spec, cfg, nullptr, &trajectories);
    REQUIRE(trajectories.size() == cfg.walkers);

    for (const auto& t : trajectories) {
        REQUIRE(t.words.size() == cfg.horizon + 1);
        CHECK(t.words.front().empty());
        // Every recorded word is a valid alternating normal form.
        for (const auto& w : t.words) {
            for (std::size_t k = 0; k < w.size(); ++k) {
                REQUIRE(w[k].factor >= 0);
                REQUIRE(w[k].factor < static_cast<int>(spec.num_factors()));
                REQUIRE(w[k].state >= 1);
                REQUIRE(w[k].state < spec.factors[w[k].factor].size());
                if (k > 0) CHECK(w[k - 1].factor != w[k].factor);
            }
        }
        // Consecutive words differ by one push, one pop, or a top change.
        for (std::size_t n = 1; n < t.words.size(); ++n) {
            const auto& prev = t.words[n - 1];
            const auto& cur = t.words[n];
            const std::size_t d =
                static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                    0, static_cast<std::ptrdiff_t>(prev.size()) -
                           static_cast<std::ptrdiff_t>(cur.size())));
            CHECK((cur.size() == prev.size() || cur.size() == prev.size() + 1 ||
                   d == 1));
            const std::size_t shared = std::min(prev.size(), cur.size());
            for (std::size_t k = 0; k + 1 < shared; ++k) {
                CHECK(prev[k].factor == cur[k].factor);
                CHECK(prev[k].state == cur[k].state);
            }
        }
        // exit_times[k] is the last step that changed a letter at depth <= k.
        // Each step changes exactly one letter, at depth max(|w_{n-1}|, |w_n|):
        // a push writes the new top, a pop erases the old top, and an in-place
        // move rewrites the top (never to the same state, since factors have
        // no self loops).
        const std::size_t depth = t.words.back().size();
        REQUIRE(t.exit_times.size() == depth + 1);
        for (std::size_t k = 0; k <= depth; ++k) {
            long last = 0;
            for (std::size_t n = 1; n < t.words.size(); ++n) {
                const std::size_t changed =
                    std::max(t.words[n - 1].size(), t.words[n].size());
                if (changed <= k) last = static_cast<long>(n);
            }
            CHECK(t.exit_times[k] == last);
            // From that step on the walk stays at depth >= k and the first k
            // letters are frozen at their final values.
            for (std::size_t n = t.exit_times[k]; n < t.words.size(); ++n) {
                CHECK(t.words[n].size() >= k);
                for (std::size_t j = 0; j < k && j < t.words[n].size(); ++j) {
                    CHECK(t.words[n][j].factor == t.words.back()[j].factor);
                    CHECK(t.words[n][j].state == t.words.back()[j].state);
                }
            }
        }
        for (std::size_t k = 1; k <= depth; ++k)
            CHECK(t.exit_times[k] >= t.exit_times[k - 1]);
    }
}

TEST_CASE("estimators agree with the analytic values within error", "[simulate]") {
    const auto& analysis = two_chain_analysis();
    const auto& r = big_run();

    CHECK(r.has_lengths);
    CHECK(std::abs(r.block_speed.value - analysis.escape_rate) <=
          3.0 * r.block_speed.se);
    CHECK(std::abs(r.length_speed.value - analysis.entropy.v1) <=
          3.0 * r.length_speed.se);
    CHECK(std::abs(r.exit_entropy.value - analysis.mean_length.direct) <=
          3.0 * r.exit_entropy.se);

    // Frozen digits for this exact configuration; any drift in the generator
    // or the reduction order shows up here.
    CHECK(r.block_speed.value == Approx(0.41575225).margin(1e-8));
    CHECK(r.length_speed.value == Approx(0.320125196724).margin(1e-9));
    CHECK(r.exit_entropy.value == Approx(0.770151477731).margin(1e-9));

    // Metric drift: letters advance by their root distance.
    const auto& kernel = analysis.kernel;
    double mean_dist = 0.0;
    for (std::size_t a = 0; a < kernel.letter_stationary.size(); ++a)
        mean_dist += kernel.letter_stationary[a] * kernel.letter_root_distance[a];
    const double metric_target = analysis.escape_rate * mean_dist;
    CHECK(std::abs(r.metric_speed.value - metric_target) <=
          3.0 * (r.metric_speed.se + r.block_speed.se));
    CHECK(r.metric_speed.value >= r.block_speed.value);

    // Observed exit-chain transitions match the analytic kernel row by row.
    const std::size_t letters = kernel.letters.total();
    for (std::size_t i = 0; i < static_cast<std::size_t>(analysis.spec.num_factors()); ++i) {
        double row_total = 0.0;
        for (std::size_t a = 0; a < letters; ++a)
            row_total += r.transition_counts[i * letters + a];
        if (row_total < 1e5) continue;
        double tv = 0.0;
        for (std::size_t a = 0; a < letters; ++a)
            tv += std::abs(r.transition_counts[i * letters + a] / row_total -
                           kernel.q(i, a));
        CHECK(tv / 2.0 <= 1e-2);
    }
}

TEST_CASE("per-walker rates concentrate around the mean", "[simulate]") {
    const auto& r = big_run();
    const auto rows =
        fpwalk::concentration_check(r.block_rate_per_walker, r.block_speed.value);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].epsilon > rows[1].epsilon);
    CHECK(rows[1].epsilon > rows[2].epsilon);
    CHECK(rows[0].fraction >= rows[1].fraction);
    CHECK(rows[1].fraction >= rows[2].fraction);
    CHECK(rows[0].fraction >= 0.99);
    CHECK(rows[2].fraction >= 0.4);

    const auto all = fpwalk::concentration_check(r.block_rate_per_walker,
                                                 r.block_speed.value, {1.0});
    CHECK(all[0].fraction == 1.0);
}

TEST_CASE("running without an exit kernel still yields the block speed", "[simulate]") {
    const auto spec = testutil::symmetric_cycles(3);
    SimConfig cfg;
    cfg.walkers = 200;
    cfg.horizon = 400;
    cfg.seed = 5;
    const auto r = fpwalk::run_walkers(spec, cfg);
    CHECK_FALSE(r.has_lengths);
    CHECK(std::abs(r.block_speed.value - 1.0 / 3.0) <= 3.0 * r.block_speed.se);
}

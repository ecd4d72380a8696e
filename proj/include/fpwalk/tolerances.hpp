#pragma once

// Numerical tolerances used by the analysis pipeline and the test suite.
// Everything user-facing is scaled by the --tol factor; the constants here
// are the scale-1 values.

namespace fpwalk::tol {

inline constexpr double row_stochastic = 1e-12;      // row sums of kernels
inline constexpr double resolvent_residual = 1e-10;  // ‖(I-zP)G - I‖
inline constexpr double weight_residual = 1e-12;     // fixed-point system residual
inline constexpr double stationarity = 1e-10;        // ‖πQ - π‖
inline constexpr double route_gap = 1e-12;           // two-route internal identities
inline constexpr double three_way_spread = 1e-6;     // entropy via three formulas
inline constexpr double green_cross = 1e-8;          // product Green function, two routes
inline constexpr double growth_slack = 1e-9;         // entropy-vs-growth inequalities
inline constexpr double finite_difference = 1e-6;    // relative, for derivative checks
inline constexpr double preset_rate = 1e-4;          // published escape-rate digits
inline constexpr double preset_entropy_chain = 1e-4; // published entropy digits (chain preset)
inline constexpr double preset_weight = 1e-4;        // published fixed-point weight digits
inline constexpr double preset_entropy_group = 1e-3; // published entropy digits (group preset)
inline constexpr double oracle_green_gap = 1e-8;     // truncated vs analytic Green sums
inline constexpr double oracle_tv = 5e-3;            // total variation, exact vs sampled
inline constexpr double sim_kernel_tv = 1e-2;        // empirical exit kernel rows

}  // namespace fpwalk::tol

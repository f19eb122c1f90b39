#pragma once

namespace anosov::tol {

// Validation tolerances for value types.
inline constexpr double sym = 1e-9;        // symmetry residual
inline constexpr double det = 1e-9;        // unit-determinant residual
inline constexpr double sum = 1e-9;        // zero-trace residual of vector-valued distances
inline constexpr double basis = 1e-8;      // orthonormality residual of flag bases

// Geometric decision tolerances.
inline constexpr double antipodal = 1e-6;  // minimum transversality margin
inline constexpr double gap = 1e-6;        // minimum eigenvalue gap at pattern dimensions
inline constexpr double flag = 1e-6;       // principal-angle tolerance for flag equality
inline constexpr double degenerate = 1e-12;  // below this, a segment has no direction

// Solver tolerances.
inline constexpr double proj = 1e-7;       // projection gradient tolerance
inline constexpr int proj_max_iter = 500;  // projection iteration cap
inline constexpr double diamond = 1e-6;    // diamond feasibility slack
inline constexpr double qg_slack = 1e-9;   // slack on quasigeodesic inequality checks

// Statistical and certificate tolerances.
inline constexpr double stat = 1e-6;       // slack on sampled-vs-bound comparisons
inline constexpr double id = 1e-8;         // identity detection for group elements
inline constexpr double c_thick = 0.25;    // thickening fraction of the antipodality margin

// Fitting convention: additive allowance used when fitting multiplicative
// quasigeodesic constants to a sampled path (see morse.hpp).
inline constexpr double fit_offset = 0.25;

inline constexpr int pair_budget = 2000;   // default knot-pair budget for path checks

}  // namespace anosov::tol

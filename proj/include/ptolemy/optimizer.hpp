#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptolemy/curves.hpp"
#include "ptolemy/ratio.hpp"

namespace ptolemy {

struct OptimizeOptions {
  int grid_points = 48;          // uniform grid resolution per curve, >= 8
  int starts = 16;               // refined seeds from the grid, and as many random ones
  int max_iterations = 2000;     // per simplex run
  double value_tolerance = 1e-12;  // simplex value-spread convergence threshold
  double gap_floor = 1e-9;       // minimum cyclic gap in t units, > 0
  std::uint64_t rng_seed = 1;
};

enum class EstimateStatus { InteriorMaximum, DegenerateLimit, GridOnly };

const char* to_string(EstimateStatus status);

/// Diagnostics of a degenerate-supremum extrapolation: the objective sampled
/// along the shrinking-gap ray, and the linear fit value(delta) = L - m*delta
/// over the smallest samples.
struct ExtrapolationDetail {
  std::vector<double> gap_sequence;  // delta values, decreasing
  std::vector<double> values;        // objective along the ray
  double extrapolated = 0.0;         // L
  double slope = 0.0;                // m
  double fit_residual = 0.0;         // max deviation of the fitted points
};

struct EstimateResult {
  double value = 0.0;
  QuadParams argmax{};
  EstimateStatus status = EstimateStatus::GridOnly;
  double grid_best = 0.0;
  int refinements_run = 0;
  std::optional<ExtrapolationDetail> extrapolation_detail;
};

struct GridCandidate {
  double value = 0.0;
  QuadParams q{};
};

struct GridResult {
  double value = 0.0;
  QuadParams argmax{};
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;  // degenerate evaluations, skipped
};

/// Exhaustive scan of all C(n,4) ordered grid tuples (i<j<k<l)/n; returns the
/// maximum value and its tuple. Deterministic: ties break toward the
/// lexicographically smallest tuple. OpenMP-parallel kernel.
GridResult grid_search(const CurveSpec& curve, int n);

/// Straightforward serial implementation of grid_search, kept as the
/// reference the parallel kernel is tested against. Identical output.
GridResult grid_search_serial(const CurveSpec& curve, int n);

/// The `keep` best grid tuples in decreasing order under the same total
/// order as grid_search. OpenMP-parallel kernel plus its serial reference.
std::vector<GridCandidate> grid_top_candidates(const CurveSpec& curve, int n,
                                               std::size_t keep);
std::vector<GridCandidate> grid_top_candidates_serial(const CurveSpec& curve,
                                                      int n, std::size_t keep);

/// Derivative-free simplex ascent from one seed, on the reduced coordinates
/// (t1, g1, g2, g3) with every cyclic gap clamped to >= gap_floor. When the
/// search terminates pressed against the gap floor with the objective still
/// improving toward the boundary, the supremum is reported as the linear
/// extrapolation of the objective along the shrinking-gap ray and the status
/// is DegenerateLimit. Throws InvalidSeed unless the seed is strictly ordered.
EstimateResult refine_local(const CurveSpec& curve, const QuadParams& seed,
                            const OptimizeOptions& opts);

/// Global estimate of the Ptolemy constant: grid scan, multi-start local
/// refinement from the best distinct grid tuples plus seeded random tuples,
/// deterministic merge (max value, ties by lexicographically smallest
/// argmax). Bit-identical output for fixed inputs regardless of thread count.
EstimateResult estimate_ptolemy_constant(const CurveSpec& curve,
                                         const OptimizeOptions& opts = {});

}  // namespace ptolemy

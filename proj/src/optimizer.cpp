#include "ptolemy/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "ptolemy/errors.hpp"
#include "ptolemy/rng.hpp"
#include "optimizer_detail.hpp"

namespace ptolemy {

namespace {

using detail::better_candidate;

// Bounded best-so-far set: a heap whose front is the worst retained
// candidate under the total order.
class TopSet {
 public:
  explicit TopSet(std::size_t keep) : keep_(keep) { items_.reserve(keep); }

  void offer(const GridCandidate& cand) {
    if (items_.size() < keep_) {
      items_.push_back(cand);
      std::push_heap(items_.begin(), items_.end(), better_candidate);
      return;
    }
    if (better_candidate(cand, items_.front())) {
      std::pop_heap(items_.begin(), items_.end(), better_candidate);
      items_.back() = cand;
      std::push_heap(items_.begin(), items_.end(), better_candidate);
    }
  }

  std::vector<GridCandidate> take() { return std::move(items_); }

 private:
  std::size_t keep_;
  std::vector<GridCandidate> items_;
};

struct GridScan {
  std::vector<GridCandidate> top;  // decreasing under the total order
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
};

GridScan grid_scan_parallel(const CurveSpec& curve, int n, std::size_t keep) {
  detail::check_grid_resolution(n);
  const std::vector<Point2> pts = detail::grid_points(curve, n);
  const double inv_n = 1.0 / n;

  std::vector<GridCandidate> merged;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;

#pragma omp parallel
  {
    TopSet local(keep);
    std::uint64_t local_evaluated = 0;
    std::uint64_t local_skipped = 0;

#pragma omp for schedule(dynamic) nowait
    for (int i = 0; i < n - 3; ++i) {
      for (int j = i + 1; j < n - 2; ++j) {
        for (int k = j + 1; k < n - 1; ++k) {
          for (int l = k + 1; l < n; ++l) {
            ++local_evaluated;
            double value;
            try {
              value = ptolemy_ratio(pts[i], pts[j], pts[k], pts[l]);
            } catch (const DegenerateQuadrilateral&) {
              ++local_skipped;
              continue;
            }
            local.offer({value,
                         QuadParams{{i * inv_n, j * inv_n, k * inv_n, l * inv_n}}});
          }
        }
      }
    }

#pragma omp critical
    {
      auto items = local.take();
      merged.insert(merged.end(), items.begin(), items.end());
      evaluated += local_evaluated;
      skipped += local_skipped;
    }
  }

  // every global top-keep candidate survives in some thread-local top-keep,
  // so this sort-and-truncate is independent of the thread partition
  std::sort(merged.begin(), merged.end(), better_candidate);
  if (merged.size() > keep) merged.resize(keep);
  return {std::move(merged), evaluated, skipped};
}

GridResult scan_to_result(GridScan scan) {
  if (scan.top.empty()) {
    throw std::runtime_error("grid search produced no valid evaluation");
  }
  return {scan.top.front().value, scan.top.front().q, scan.evaluated,
          scan.skipped};
}

// ---------------------------------------------------------------------------
// Local refinement: Nelder-Mead on (t1, g1, g2, g3), gaps clamped to the
// feasible simplex {g_i >= gap_floor, g1+g2+g3 <= 1 - gap_floor}.

using Coord = std::array<double, 4>;

Coord clamp_gaps(Coord x, double floor_) {
  for (int i = 1; i < 4; ++i) x[i] = std::max(x[i], floor_);
  const double sum = x[1] + x[2] + x[3];
  const double limit = 1.0 - floor_;
  if (sum > limit) {
    const double alpha = (limit - 3.0 * floor_) / (sum - 3.0 * floor_);
    for (int i = 1; i < 4; ++i) x[i] = floor_ + alpha * (x[i] - floor_);
  }
  return x;
}

QuadParams coord_tuple(const Coord& x) {
  const double t1 = wrap_unit(x[0]);
  return QuadParams{{t1, wrap_unit(t1 + x[1]), wrap_unit(t1 + x[1] + x[2]),
                     wrap_unit(t1 + x[1] + x[2] + x[3])}};
}

double objective(const CurveSpec& curve, const Coord& x) {
  try {
    return ratio_on_curve(curve, coord_tuple(x));
  } catch (const DegenerateQuadrilateral&) {
    return -std::numeric_limits<double>::infinity();
  }
}

struct SimplexResult {
  Coord x{};
  double value = 0.0;
};

SimplexResult nelder_mead(const CurveSpec& curve, const Coord& start,
                          double scale, const OptimizeOptions& opts) {
  std::array<Coord, 5> xs;
  std::array<double, 5> fs;

  xs[0] = clamp_gaps(start, opts.gap_floor);
  for (int j = 0; j < 4; ++j) {
    Coord v = xs[0];
    v[j] += scale;
    v = clamp_gaps(v, opts.gap_floor);
    if (v == xs[0]) {
      v = xs[0];
      v[j] -= scale;
      v = clamp_gaps(v, opts.gap_floor);
    }
    xs[j + 1] = v;
  }
  for (int i = 0; i < 5; ++i) fs[i] = objective(curve, xs[i]);

  std::array<int, 5> order{0, 1, 2, 3, 4};
  const auto sort_order = [&] {
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fs[a] > fs[b]; });
  };

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    sort_order();
    const int best = order[0];
    const int second_worst = order[3];
    const int worst = order[4];
    if (fs[best] - fs[worst] < opts.value_tolerance) break;

    Coord centroid{};
    for (int r = 0; r < 4; ++r) {
      for (int j = 0; j < 4; ++j) centroid[j] += xs[order[r]][j] * 0.25;
    }

    const auto along = [&](double coeff) {
      Coord v;
      for (int j = 0; j < 4; ++j) {
        v[j] = centroid[j] + coeff * (centroid[j] - xs[worst][j]);
      }
      return clamp_gaps(v, opts.gap_floor);
    };

    const Coord reflected = along(1.0);
    const double fr = objective(curve, reflected);
    if (fr > fs[best]) {
      const Coord expanded = along(2.0);
      const double fe = objective(curve, expanded);
      if (fe > fr) {
        xs[worst] = expanded;
        fs[worst] = fe;
      } else {
        xs[worst] = reflected;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr > fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = fr;
      continue;
    }
    const Coord contracted = fr > fs[worst] ? along(0.5) : along(-0.5);
    const double fc = objective(curve, contracted);
    if (fc > std::max(fr, fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = fc;
      continue;
    }
    // shrink toward the best vertex
    for (int r = 1; r < 5; ++r) {
      const int idx = order[r];
      for (int j = 0; j < 4; ++j) {
        xs[idx][j] = xs[best][j] + 0.5 * (xs[idx][j] - xs[best][j]);
      }
      xs[idx] = clamp_gaps(xs[idx], opts.gap_floor);
      fs[idx] = objective(curve, xs[idx]);
    }
  }

  sort_order();
  return {xs[order[0]], fs[order[0]]};
}

// ---------------------------------------------------------------------------
// Degenerate-supremum detection. When the refined tuple sits on the gap
// floor, the objective is sampled along the ray that widens the collapsed
// gaps to delta = gap_floor * 2^k, k = 10..0, keeping each coalescing cluster
// centered where it converged. A linear fit value(delta) = L - m*delta over
// the smallest samples recovers the limit L.

struct RaySample {
  double delta = 0.0;
  double value = 0.0;
};

// Geometry of the coalescing clusters (maximal runs of active gaps) of a
// refined tuple, in a walk order chosen so no cluster wraps. Each cluster is
// rebuilt with equal internal gaps delta about a movable center; everything
// else stays put.
class ShrinkingRay {
 public:
  ShrinkingRay(const CurveSpec& curve, const QuadParams& q,
               const std::array<bool, 4>& active)
      : curve_(curve) {
    const auto gaps = q.gaps();
    start_ = 0;
    for (int i = 0; i < 4; ++i) {
      if (!active[(i + 3) % 4]) {
        start_ = i;
        break;
      }
    }
    unwrapped_[0] = q.t[start_];
    for (int j = 1; j < 4; ++j) {
      unwrapped_[j] = unwrapped_[j - 1] + gaps[(start_ + j - 1) % 4];
    }
    int j = 0;
    while (j < 3) {
      if (!active[(start_ + j) % 4]) {
        ++j;
        continue;
      }
      int run_end = j;
      while (run_end < 3 && active[(start_ + run_end) % 4]) ++run_end;
      Cluster c;
      c.first = j;
      c.members = run_end - j + 1;
      c.center = 0.0;
      for (int r = j; r <= run_end; ++r) c.center += unwrapped_[r] / c.members;
      clusters_.push_back(c);
      j = run_end + 1;
    }
  }

  std::optional<QuadParams> tuple_at(double delta) const {
    std::array<double, 4> moved = unwrapped_;
    for (const Cluster& c : clusters_) {
      for (int r = 0; r < c.members; ++r) {
        moved[c.first + r] = c.center + delta * (r - 0.5 * (c.members - 1));
      }
    }
    QuadParams out;
    for (int r = 0; r < 4; ++r) out.t[(start_ + r) % 4] = wrap_unit(moved[r]);
    if (!out.strictly_ordered()) return std::nullopt;
    return out;
  }

  std::optional<double> value_at(double delta) const {
    const auto q = tuple_at(delta);
    if (!q) return std::nullopt;
    try {
      return ratio_on_curve(curve_, *q);
    } catch (const DegenerateQuadrilateral&) {
      return std::nullopt;
    }
  }

  // The refined tuple locates each cluster center only to within the
  // evaluation noise, an error that enters the objective as
  // O(center_error / delta) and would swamp the small-delta samples. Tracking
  // the ridge instead: re-maximize each center by golden section at the
  // current scale before sampling.
  void recenter(double delta) {
    constexpr double kGolden = 0.6180339887498949;
    for (int pass = 0; pass < 2; ++pass) {
      for (Cluster& c : clusters_) {
        double lo = -delta, hi = delta;
        const double base = c.center;
        const auto probe = [&](double s) {
          Cluster saved = c;
          c.center = base + s;
          const auto v = value_at(delta);
          c = saved;
          return v ? *v : -std::numeric_limits<double>::infinity();
        };
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        double f1 = probe(x1);
        double f2 = probe(x2);
        for (int it = 0; it < 24; ++it) {
          if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = probe(x2);
          } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = probe(x1);
          }
        }
        const double best = 0.5 * (lo + hi);
        if (probe(best) >= std::max(f1, f2)) {
          c.center = base + best;
        } else {
          c.center = base + (f1 > f2 ? x1 : x2);
        }
      }
    }
  }

 private:
  struct Cluster {
    int first = 0;    // walk index of the first member point
    int members = 0;  // number of coalescing points (active gaps + 1)
    double center = 0.0;
  };

  const CurveSpec& curve_;
  int start_ = 0;
  std::array<double, 4> unwrapped_{};
  std::vector<Cluster> clusters_;
};

struct RayTrace {
  std::vector<RaySample> samples;        // delta decreasing
  std::optional<QuadParams> floor_tuple; // recentered tuple at the gap floor
};

RayTrace trace_shrinking_ray(const CurveSpec& curve, const QuadParams& q,
                             const std::array<bool, 4>& active, double floor_) {
  ShrinkingRay ray(curve, q, active);
  RayTrace trace;
  trace.samples.reserve(11);
  for (int k = 10; k >= 0; --k) {
    const double delta = floor_ * static_cast<double>(1u << k);
    ray.recenter(delta);
    if (const auto v = ray.value_at(delta)) {
      trace.samples.push_back({delta, *v});
    }
    if (k == 0) trace.floor_tuple = ray.tuple_at(delta);
  }
  return trace;
}

struct RayFit {
  double intercept = 0.0;
  double slope = 0.0;  // m in value = L - m*delta
  double residual = 0.0;
};

RayFit fit_ray(const std::vector<RaySample>& samples, std::size_t first,
               std::size_t last) {
  // least squares value = A + B*delta over samples[first, last)
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    sx += samples[i].delta;
    sy += samples[i].value;
    sxx += samples[i].delta * samples[i].delta;
    sxy += samples[i].delta * samples[i].value;
  }
  const double n = static_cast<double>(last - first);
  const double denom = n * sxx - sx * sx;
  const double b = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  const double a = (sy - b * sx) / n;
  double residual = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    residual = std::max(residual,
                        std::fabs(samples[i].value - (a + b * samples[i].delta)));
  }
  return {a, -b, residual};
}

struct RefineOutcome {
  double value = 0.0;
  QuadParams argmax{};
  EstimateStatus status = EstimateStatus::InteriorMaximum;
  std::optional<ExtrapolationDetail> detail;
};

RefineOutcome refine_impl(const CurveSpec& curve, const QuadParams& seed,
                          const OptimizeOptions& opts) {
  if (!seed.strictly_ordered()) {
    throw InvalidSeed("seed tuple is not in strict cyclic order");
  }
  const auto seed_gaps = seed.gaps();
  const Coord x0{seed.t[0], seed_gaps[0], seed_gaps[1], seed_gaps[2]};

  const double scale = 0.5 / opts.grid_points;
  SimplexResult run = nelder_mead(curve, x0, scale, opts);
  // one restart with a small fresh simplex to escape premature collapse
  SimplexResult rerun = nelder_mead(curve, run.x, 1e-4, opts);
  if (rerun.value >= run.value) run = rerun;

  RefineOutcome out;
  out.argmax = coord_tuple(run.x);
  out.value = run.value;
  out.status = EstimateStatus::InteriorMaximum;

  // Gaps worth investigating for a boundary supremum: within the band where
  // shrinking further is dominated by evaluation noise, so the simplex may
  // have stalled short of the floor. The ray test below is the decider.
  const double active_band = std::max(1e-7, 4.0 * opts.gap_floor);
  const auto gaps = out.argmax.gaps();
  std::array<bool, 4> active{};
  bool any_active = false;
  for (int i = 0; i < 4; ++i) {
    active[i] = gaps[i] <= active_band;
    any_active = any_active || active[i];
  }
  if (!any_active) return out;

  const RayTrace trace =
      trace_shrinking_ray(curve, out.argmax, active, opts.gap_floor);
  const auto& samples = trace.samples;
  if (samples.size() < 3) return out;

  // Detection runs on the widest samples, where the linear trend towers over
  // evaluation noise: the supremum sits on the boundary only if the objective
  // keeps rising as the gaps shrink. 1e-10 separates genuine improvement from
  // flat-landscape noise.
  const std::size_t det = std::min<std::size_t>(5, samples.size());
  const RayFit trend = fit_ray(samples, 0, det);
  const double improvement = samples[det - 1].value - samples.front().value;
  if (trend.slope > 0.0 && improvement > 1e-10) {
    // The value fit prefers the smallest deltas but trusts only the
    // monotone-rising prefix (samples are ordered by decreasing delta):
    // once noise takes over, the samples start wandering.
    std::size_t usable = 1;
    while (usable < samples.size() &&
           samples[usable].value >= samples[usable - 1].value) {
      ++usable;
    }
    const std::size_t last = std::max(usable, det);
    const std::size_t first = last > 5 ? last - 5 : 0;
    const RayFit fit = fit_ray(samples, first, last);

    out.status = EstimateStatus::DegenerateLimit;
    out.value = fit.intercept;
    // report the recentered floor-gap configuration as the argmax
    if (trace.floor_tuple) out.argmax = *trace.floor_tuple;
    ExtrapolationDetail detail;
    detail.gap_sequence.reserve(samples.size());
    detail.values.reserve(samples.size());
    for (const RaySample& s : samples) {
      detail.gap_sequence.push_back(s.delta);
      detail.values.push_back(s.value);
    }
    detail.extrapolated = fit.intercept;
    detail.slope = fit.slope;
    detail.fit_residual = fit.residual;
    out.detail = std::move(detail);
  }
  return out;
}

bool outcome_better(const RefineOutcome& lhs, const RefineOutcome& rhs) {
  if (lhs.value != rhs.value) return lhs.value > rhs.value;
  return lhs.argmax.t < rhs.argmax.t;
}

void check_options(const OptimizeOptions& opts) {
  if (opts.grid_points < 8) {
    throw std::invalid_argument("grid_points must be at least 8");
  }
  if (opts.starts < 1) throw std::invalid_argument("starts must be at least 1");
  if (!(opts.gap_floor > 0.0)) {
    throw std::invalid_argument("gap_floor must be positive");
  }
}

}  // namespace

const char* to_string(EstimateStatus status) {
  switch (status) {
    case EstimateStatus::InteriorMaximum:
      return "InteriorMaximum";
    case EstimateStatus::DegenerateLimit:
      return "DegenerateLimit";
    case EstimateStatus::GridOnly:
      return "GridOnly";
  }
  return "GridOnly";
}

GridResult grid_search(const CurveSpec& curve, int n) {
  return scan_to_result(grid_scan_parallel(curve, n, 1));
}

std::vector<GridCandidate> grid_top_candidates(const CurveSpec& curve, int n,
                                               std::size_t keep) {
  return grid_scan_parallel(curve, n, keep).top;
}

EstimateResult refine_local(const CurveSpec& curve, const QuadParams& seed,
                            const OptimizeOptions& opts) {
  check_options(opts);
  const RefineOutcome out = refine_impl(curve, seed, opts);
  EstimateResult result;
  result.value = out.value;
  result.argmax = out.argmax;
  result.status = out.status;
  result.grid_best = ratio_on_curve(curve, seed);
  result.refinements_run = 1;
  result.extrapolation_detail = out.detail;
  return result;
}

EstimateResult estimate_ptolemy_constant(const CurveSpec& curve,
                                         const OptimizeOptions& opts) {
  check_options(opts);

  const std::size_t keep = std::min<std::size_t>(
      std::max<std::size_t>(64, static_cast<std::size_t>(opts.starts) *
                                    static_cast<std::size_t>(opts.grid_points)),
      8192);
  const GridScan scan = grid_scan_parallel(curve, opts.grid_points, keep);
  const GridResult grid = scan_to_result(scan);

  // best grid tuples, deduplicated in gap space
  std::vector<QuadParams> seeds;
  std::vector<std::array<double, 4>> seed_gaps;
  const double min_gap_distance = 2.0 / opts.grid_points;
  for (const GridCandidate& cand : scan.top) {
    if (seeds.size() >= static_cast<std::size_t>(opts.starts)) break;
    const auto gaps = cand.q.gaps();
    bool distinct = true;
    for (const auto& prior : seed_gaps) {
      double dist_inf = 0.0;
      for (int i = 0; i < 4; ++i) {
        dist_inf = std::max(dist_inf, std::fabs(gaps[i] - prior[i]));
      }
      if (dist_inf <= min_gap_distance) {
        distinct = false;
        break;
      }
    }
    if (distinct) {
      seeds.push_back(cand.q);
      seed_gaps.push_back(gaps);
    }
  }

  // plus as many random strictly ordered tuples from the seeded generator
  SplitMix64 rng(opts.rng_seed);
  for (int s = 0; s < opts.starts; ++s) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      std::array<double, 4> t{rng.next_unit(), rng.next_unit(),
                              rng.next_unit(), rng.next_unit()};
      std::sort(t.begin(), t.end());
      const QuadParams q{t};
      if (q.strictly_ordered()) {
        seeds.push_back(q);
        break;
      }
    }
  }

  const int total = static_cast<int>(seeds.size());
  std::vector<RefineOutcome> outcomes(seeds.size());
  std::vector<char> succeeded(seeds.size(), 0);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < total; ++i) {
    try {
      outcomes[static_cast<std::size_t>(i)] =
          refine_impl(curve, seeds[static_cast<std::size_t>(i)], opts);
      succeeded[static_cast<std::size_t>(i)] = 1;
    } catch (...) {
      succeeded[static_cast<std::size_t>(i)] = 0;
    }
  }

  EstimateResult result;
  result.grid_best = grid.value;

  int refinements = 0;
  const RefineOutcome* winner = nullptr;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!succeeded[i]) continue;
    ++refinements;
    if (winner == nullptr || outcome_better(outcomes[i], *winner)) {
      winner = &outcomes[i];
    }
  }
  result.refinements_run = refinements;

  if (winner == nullptr) {
    result.value = grid.value;
    result.argmax = grid.argmax;
    result.status = EstimateStatus::GridOnly;
    return result;
  }
  result.value = winner->value;
  result.argmax = winner->argmax;
  result.status = winner->status;
  result.extrapolation_detail = winner->detail;
  return result;
}

}  // namespace ptolemy

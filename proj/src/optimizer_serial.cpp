// Serial reference implementations of the grid-scan kernels. Deliberately
// plain: single loop nest, linear bookkeeping, no heaps. The parallel kernels
// in optimizer.cpp are tested against these for identical output.

#include <algorithm>
#include <vector>

#include "ptolemy/errors.hpp"
#include "ptolemy/optimizer.hpp"
#include "optimizer_detail.hpp"

namespace ptolemy {

namespace {

using detail::better_candidate;

template <typename Offer>
void scan_all(const CurveSpec& curve, int n, std::uint64_t& evaluated,
              std::uint64_t& skipped, Offer&& offer) {
  const std::vector<Point2> pts = detail::grid_points(curve, n);
  const double inv_n = 1.0 / n;
  for (int i = 0; i < n - 3; ++i) {
    for (int j = i + 1; j < n - 2; ++j) {
      for (int k = j + 1; k < n - 1; ++k) {
        for (int l = k + 1; l < n; ++l) {
          ++evaluated;
          double value;
          try {
            value = ptolemy_ratio(pts[i], pts[j], pts[k], pts[l]);
          } catch (const DegenerateQuadrilateral&) {
            ++skipped;
            continue;
          }
          offer(GridCandidate{
              value, QuadParams{{i * inv_n, j * inv_n, k * inv_n, l * inv_n}}});
        }
      }
    }
  }
}

}  // namespace

GridResult grid_search_serial(const CurveSpec& curve, int n) {
  detail::check_grid_resolution(n);
  GridResult result;
  bool found = false;
  scan_all(curve, n, result.evaluated, result.skipped,
           [&](const GridCandidate& cand) {
             if (!found ||
                 better_candidate(cand, {result.value, result.argmax})) {
               result.value = cand.value;
               result.argmax = cand.q;
               found = true;
             }
           });
  if (!found) throw std::runtime_error("grid search produced no valid evaluation");
  return result;
}

std::vector<GridCandidate> grid_top_candidates_serial(const CurveSpec& curve,
                                                      int n, std::size_t keep) {
  detail::check_grid_resolution(n);
  std::vector<GridCandidate> best;
  best.reserve(keep);
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  scan_all(curve, n, evaluated, skipped, [&](const GridCandidate& cand) {
    if (best.size() < keep) {
      best.push_back(cand);
      return;
    }
    auto worst = std::max_element(
        best.begin(), best.end(),
        [](const GridCandidate& a, const GridCandidate& b) {
          return better_candidate(a, b);  // max under "worse" = last in order
        });
    if (better_candidate(cand, *worst)) *worst = cand;
  });
  std::sort(best.begin(), best.end(), better_candidate);
  return best;
}

}  // namespace ptolemy

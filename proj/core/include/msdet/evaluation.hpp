#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msdet/annot_io.hpp"
#include "msdet/dataset.hpp"
#include "msdet/defaults.hpp"

namespace msdet {

struct EvalConfig {
  double match_iou = defaults::match_iou;
  double fppi_lo = defaults::fppi_lo;
  double fppi_hi = defaults::fppi_hi;
  int n_points = defaults::fppi_points;
  ReasonableConfig reasonable;
};

enum class DetOutcome { tp, fp, ignored };
enum class GtOutcome { matched, missed, ignored };

/// One frame's detection / ground-truth assignment. Outcomes are indexed in
/// input order; TP + FP + ignored equals the detection count, and
/// matched + missed equals the evaluate-class ground-truth count.
struct FrameMatch {
  std::vector<DetOutcome> det_outcomes;
  std::vector<int> det_gt;  // matched ground-truth index, -1 otherwise
  std::vector<GtOutcome> gt_outcomes;
};

/// Greedy benchmark matching: detections in descending score order (ties by
/// input position) each claim the highest-IoU unmatched evaluate-class
/// ground truth at IoU >= match_iou; otherwise they are absorbed by any
/// ignore-class ground truth at the same threshold (ignores absorb any
/// number); otherwise they are false positives.
FrameMatch match_frame(std::span<const Detection> dets, const FrameAnnotations& frame,
                       const EvalConfig& cfg = {});

struct CurvePoint {
  double threshold;
  double fppi;
  double miss_rate;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Score sweep, one point per distinct detection score, sorted by descending
/// threshold; fppi is non-decreasing and miss_rate non-increasing along the
/// list. An empty detection set yields the single point (inf, 0, 1).
struct EvalCurve {
  std::vector<CurvePoint> points;
  std::size_t frame_count = 0;
};

/// Builds the sweep incrementally from one full matching pass (the greedy
/// protocol is prefix-stable in score order, so this equals per-threshold
/// re-evaluation). Detections must reference frames present in `frames`.
/// Throws when the frame set has no evaluate-class ground truth.
EvalCurve mr_fppi_curve(std::span<const FrameAnnotations> frames,
                        std::span<const Detection> dets, const EvalConfig& cfg = {});

/// Log-average miss rate: n_points FPPI references evenly log-spaced over
/// [fppi_lo, fppi_hi]; each reference takes the miss rate at the largest
/// achieved FPPI <= reference (1 when none); the result is
/// exp(mean(ln(max(miss, 1e-10)))).
double log_average_mr(const EvalCurve& curve, const EvalConfig& cfg = {});

enum class Subset { all, day, night };

Subset subset_from_name(std::string_view name);
const char* to_string(Subset subset);

struct SubsetResult {
  EvalCurve curve;
  double mr = 0;
};

/// Restricts frames by time-of-day tag (detections on excluded frames are
/// dropped), then runs the sweep. Empty subsets are an error.
SubsetResult subset_eval(std::span<const FrameAnnotations> frames,
                         std::span<const Detection> dets, Subset subset,
                         const EvalConfig& cfg = {});

/// CSV dump with header "threshold,fppi,miss_rate"; numbers round-trip
/// exactly (frame_count is not part of the format).
std::string export_curve(const EvalCurve& curve);
EvalCurve parse_curve(std::string_view text);

}  // namespace msdet

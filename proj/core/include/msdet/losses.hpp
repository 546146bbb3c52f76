#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msdet/anchors.hpp"
#include "msdet/dataset.hpp"

namespace msdet {

/// Dense grid of foreground probabilities matching a SegMask's cell layout.
struct FloatGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major

  double at(int cx, int cy) const { return values[static_cast<std::size_t>(cy) * width + cx]; }
};

/// Weighted per-term breakdown of a joint loss; total is the exact weighted
/// sum of the components as computed.
struct LossReport {
  std::vector<std::string> names;
  std::vector<double> components;
  std::vector<double> weights;
  double total = 0;
};

/// Mean 2-class cross-entropy over non-ignore entries; 0 when nothing is
/// counted. Each probability pair must sum to 1 within 1e-6; probabilities
/// are clamped to [1e-12, 1-1e-12] before the log.
double cls_loss(std::span<const std::array<double, 2>> probs,
                std::span<const SampleLabel> labels);

/// Smooth-L1 (quadratic below 1, linear above) summed over the four delta
/// components and averaged over positive entries; 0 without positives.
double bbox_loss(std::span<const BoxDelta> pred, std::span<const BoxDelta> gt,
                 std::span<const SampleLabel> labels);

/// One smooth-L1 term.
double smooth_l1(double x);

struct SegLossOptions {
  /// The formula normalizes by H*W with ignore cells contributing zero;
  /// alternatively normalize by the number of counted cells.
  bool normalize_by_counted = false;
};

/// Per-cell cross-entropy of the predicted foreground probability against
/// the mask, summed over non-ignore cells.
double seg_loss(const FloatGrid& pred, const SegMask& gt, const SegLossOptions& opts = {});

/// The nine proposal-stage terms: classification, box regression and
/// segmentation for each of the color, thermal and merged streams.
struct MpnComponents {
  double cls_color = 0, cls_thermal = 0, cls_merged = 0;
  double bbox_color = 0, bbox_thermal = 0, bbox_merged = 0;
  double seg_color = 0, seg_thermal = 0, seg_merged = 0;
};

/// The six classification-stage terms: classification and segmentation per
/// stream.
struct McnComponents {
  double cls_color = 0, cls_thermal = 0, cls_merged = 0;
  double seg_color = 0, seg_thermal = 0, seg_merged = 0;
};

/// total = sum(lambda_i * component_i); all lambda default to 1.
LossReport mpn_loss(const MpnComponents& c, std::span<const double> weights = {});
LossReport mcn_loss(const McnComponents& c, std::span<const double> weights = {});

/// Library-level JSON interface: evaluates a bundle of prediction/target
/// records (schema in docs/formats.md) into loss reports.
struct LossBundleResult {
  std::optional<LossReport> mpn;
  std::optional<LossReport> mcn;
};
LossBundleResult evaluate_loss_bundle(std::string_view json_text);
std::string loss_report_json(const LossReport& report);

}  // namespace msdet

#pragma once

#include <span>
#include <vector>

#include "msdet/annot_io.hpp"
#include "msdet/defaults.hpp"
#include "msdet/geometry.hpp"

namespace msdet {

/// Scale set for the proposal stage: quantile-derived heights, one fixed
/// aspect ratio, one feature stride.
struct AnchorSpec {
  std::vector<double> heights;  // non-decreasing, bins+1 entries
  double aspect_ratio = defaults::aspect_ratio;
  double stride = defaults::feature_stride;
};

/// The bins+1 empirical quantiles of the height sample at probabilities
/// 0, 1/bins, ..., 1 (linear-interpolation "type 7" estimator, the common
/// default). Endpoints equal the sample min and max.
std::vector<double> quantile_scales(std::span<const double> heights,
                                    int bins = defaults::anchor_bins);

AnchorSpec derive_anchor_spec(std::span<const double> heights,
                              int bins = defaults::anchor_bins,
                              double aspect_ratio = defaults::aspect_ratio,
                              double stride = defaults::feature_stride);

/// One anchor per (cell, height), centered at ((i+0.5)*stride, (j+0.5)*stride)
/// with width aspect_ratio*height. Row-major over cells, heights innermost;
/// count is |heights| * feat_w * feat_h. Anchors may extend past the image.
std::vector<Box> generate_anchors(const AnchorSpec& spec, int feat_w, int feat_h);

struct AnchorLabel {
  enum class Kind { pos, neg, ignore } kind = Kind::neg;
  int gt_index = -1;  // argmax-IoU ground truth when pos

  friend bool operator==(const AnchorLabel&, const AnchorLabel&) = default;
};

struct LabelingOptions {
  double pos_iou = defaults::anchor_pos_iou;
  /// Literal rule: strictly above pos_iou with a ground truth, otherwise
  /// negative. The opt-in fallback additionally makes each ground truth's
  /// best-IoU anchor positive, preventing zero-positive frames.
  bool best_anchor_fallback = false;
};

/// pos(argmax gt) when the best IoU over non-ignore ground truths exceeds
/// pos_iou; ignore when only an ignore-flagged ground truth exceeds it;
/// neg otherwise. Argmax ties break to the lowest ground-truth index.
std::vector<AnchorLabel> label_anchors(std::span<const Box> anchors,
                                       std::span<const GtObject> gts,
                                       const LabelingOptions& opts = {});

/// Box regression parameterization: center offsets normalized by anchor
/// size, log size ratios. decode(anchor, encode(anchor, gt)) == gt up to
/// floating round-off.
struct BoxDelta {
  double tx = 0;
  double ty = 0;
  double tw = 0;
  double th = 0;
};

BoxDelta encode_delta(const Box& anchor, const Box& gt);
Box decode_delta(const Box& anchor, const BoxDelta& d);

}  // namespace msdet

#include "msdet/anchors.hpp"

#include <algorithm>
#include <cmath>

#include "msdet/errors.hpp"

namespace msdet {

std::vector<double> quantile_scales(std::span<const double> heights, int bins) {
  if (heights.empty()) throw InputError("quantile_scales: empty height sample");
  if (bins < 1) throw InputError("quantile_scales: bins must be >= 1");
  for (double h : heights)
    if (!(h > 0) || !std::isfinite(h)) throw InputError("quantile_scales: heights must be positive");

  std::vector<double> sorted(heights.begin(), heights.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  std::vector<double> scales;
  scales.reserve(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) {
    const double p = static_cast<double>(k) / bins;
    const double pos = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    const std::size_t hi = std::min(lo + 1, n - 1);
    scales.push_back(sorted[lo] + frac * (sorted[hi] - sorted[lo]));
  }
  return scales;
}

AnchorSpec derive_anchor_spec(std::span<const double> heights, int bins, double aspect_ratio,
                              double stride) {
  if (!(aspect_ratio > 0)) throw InputError("aspect ratio must be > 0");
  if (!(stride > 0)) throw InputError("stride must be > 0");
  return AnchorSpec{quantile_scales(heights, bins), aspect_ratio, stride};
}

std::vector<Box> generate_anchors(const AnchorSpec& spec, int feat_w, int feat_h) {
  if (feat_w < 1 || feat_h < 1) throw InputError("feature grid dimensions must be positive");
  std::vector<Box> anchors;
  anchors.reserve(spec.heights.size() * static_cast<std::size_t>(feat_w) * feat_h);
  for (int j = 0; j < feat_h; ++j) {
    for (int i = 0; i < feat_w; ++i) {
      const double cx = (i + 0.5) * spec.stride;
      const double cy = (j + 0.5) * spec.stride;
      for (const double h : spec.heights) {
        const double w = spec.aspect_ratio * h;
        anchors.emplace_back(cx - 0.5 * w, cy - 0.5 * h, w, h);
      }
    }
  }
  return anchors;
}

std::vector<AnchorLabel> label_anchors(std::span<const Box> anchors,
                                       std::span<const GtObject> gts,
                                       const LabelingOptions& opts) {
  std::vector<AnchorLabel> labels(anchors.size());
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    double best_eval = 0, best_ignore = 0;
    int best_eval_gt = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double overlap = iou(anchors[a], gts[g].box);
      if (effective_ignore(gts[g])) {
        best_ignore = std::max(best_ignore, overlap);
      } else if (overlap > best_eval) {  // ties keep the lowest gt index
        best_eval = overlap;
        best_eval_gt = static_cast<int>(g);
      }
    }
    if (best_eval > opts.pos_iou) {
      labels[a] = {AnchorLabel::Kind::pos, best_eval_gt};
    } else if (best_ignore > opts.pos_iou) {
      labels[a] = {AnchorLabel::Kind::ignore, -1};
    } else {
      labels[a] = {AnchorLabel::Kind::neg, -1};
    }
  }

  if (opts.best_anchor_fallback) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (effective_ignore(gts[g])) continue;
      double best = 0;
      std::ptrdiff_t best_anchor = -1;
      for (std::size_t a = 0; a < anchors.size(); ++a) {
        const double overlap = iou(anchors[a], gts[g].box);
        if (overlap > best) {
          best = overlap;
          best_anchor = static_cast<std::ptrdiff_t>(a);
        }
      }
      if (best_anchor >= 0 && labels[best_anchor].kind != AnchorLabel::Kind::pos)
        labels[best_anchor] = {AnchorLabel::Kind::pos, static_cast<int>(g)};
    }
  }
  return labels;
}

BoxDelta encode_delta(const Box& anchor, const Box& gt) {
  return BoxDelta{(gt.center_x() - anchor.center_x()) / anchor.w,
                  (gt.center_y() - anchor.center_y()) / anchor.h,
                  std::log(gt.w / anchor.w),
                  std::log(gt.h / anchor.h)};
}

Box decode_delta(const Box& anchor, const BoxDelta& d) {
  if (!(std::isfinite(d.tx) && std::isfinite(d.ty) && std::isfinite(d.tw) && std::isfinite(d.th)))
    throw InputError("decode_delta: deltas must be finite");
  const double w = anchor.w * std::exp(d.tw);
  const double h = anchor.h * std::exp(d.th);
  const double cx = anchor.center_x() + d.tx * anchor.w;
  const double cy = anchor.center_y() + d.ty * anchor.h;
  return Box(cx - 0.5 * w, cy - 0.5 * h, w, h);
}

}  // namespace msdet

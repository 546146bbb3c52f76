#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "msdet/annot_io.hpp"
#include "msdet/defaults.hpp"

namespace msdet {

/// Stream selection for ablation runs; fusion sums the logit pairs of
/// streams that are both enabled and present on the detection.
struct StreamSet {
  bool mpn = true;
  bool color = true;
  bool thermal = true;
  bool merged = true;

  /// Parses "mpn,color,thermal,merged" subsets.
  static StreamSet from_names(std::string_view csv);
};

/// Two-way softmax over summed per-stream logits:
/// exp(sum c1) / (exp(sum c0) + exp(sum c1)), computed with the max
/// subtracted before exponentiation. Sums run over present streams.
double fuse_scores(const StreamLogits& sl);
double fuse_scores(const StreamLogits& sl, const StreamSet& enabled);

/// Keeps detections with score strictly greater than the threshold; order
/// preserved; idempotent.
std::vector<Detection> filter_proposals(std::span<const Detection> dets,
                                        double threshold = defaults::proposal_score_threshold);

/// The k highest-scoring detections (all, when fewer exist), sorted by
/// descending score with ties broken by earlier input position.
std::vector<Detection> top_k(std::span<const Detection> dets,
                             std::size_t k = defaults::proposal_top_k);

/// Greedy suppression: repeatedly keep the highest-scoring remaining
/// detection and drop the rest whose IoU with it strictly exceeds the
/// threshold. Same tie-break as top_k; output in descending-score order.
std::vector<Detection> nms(std::span<const Detection> dets, double iou_threshold);

}  // namespace msdet

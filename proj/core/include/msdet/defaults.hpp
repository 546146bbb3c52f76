#pragma once

#include <string>

namespace msdet::defaults {

// Anchor design.
inline constexpr int anchor_bins = 8;            // quantile bins; 9 scale endpoints
inline constexpr int anchor_scale_count = anchor_bins + 1;
inline constexpr double aspect_ratio = 0.41;     // width / height
inline constexpr double feature_stride = 8.0;    // pixels per feature cell
inline constexpr double anchor_pos_iou = 0.5;    // anchor labeling threshold

// Proposal handling and classification stage.
inline constexpr double proposal_pos_iou = 0.7;          // proposal labeling threshold
inline constexpr double proposal_score_threshold = 0.01; // strict > filter
inline constexpr double proposal_pad_factor = 0.2;       // context padding per side
inline constexpr int proposal_top_k = 50;
inline constexpr int mpn_input_scale = 600;              // shorter image side, pixels

// Minibatch sampling.
inline constexpr int mpn_minibatch_total = 120;
inline constexpr double mpn_minibatch_pos_fraction = 1.0 / 6.0;  // 1:5 pos:neg
inline constexpr int mcn_minibatch_total = 60;
inline constexpr double mcn_minibatch_pos_fraction = 1.0 / 3.0;  // 1:2 pos:neg

// Loss weighting.
inline constexpr double loss_lambda = 1.0;  // every term

// Training-frame filtering.
inline constexpr int train_frame_step = 2;
inline constexpr double train_min_height = 50.0;
inline constexpr double truncation_clip_fraction = 0.3;

// Evaluation protocol.
inline constexpr double match_iou = 0.5;
inline constexpr double fppi_lo = 1e-2;
inline constexpr double fppi_hi = 1e0;
inline constexpr int fppi_points = 9;
inline constexpr double miss_rate_floor = 1e-10;
inline constexpr double reasonable_min_height = 55.0;

// Proposal post-processing conventions.
inline constexpr double nms_iou_mpn = 0.7;     // raw proposals, before top-K
inline constexpr double nms_iou_fused = 0.5;   // after score fusion

// Annotation sanitization.
inline constexpr double misalignment_iou = 0.5;
inline constexpr double diff_identity_iou = 0.3;

// File format versions.
inline constexpr int dataset_format_version = 1;
inline constexpr int curve_format_version = 1;

/// Canonical-JSON snapshot of every default above, suitable for golden
/// comparison and for `msdet --version --json`.
std::string config_snapshot();

}  // namespace msdet::defaults

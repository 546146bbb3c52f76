#include "msdet/defaults.hpp"

#include <nlohmann/json.hpp>

namespace msdet::defaults {

std::string config_snapshot() {
  nlohmann::ordered_json j;
  j["anchors"] = {{"quantile_bins", anchor_bins},
                  {"scale_count", anchor_scale_count},
                  {"aspect_ratio", aspect_ratio},
                  {"feature_stride", feature_stride},
                  {"positive_iou", anchor_pos_iou}};
  j["proposals"] = {{"positive_iou", proposal_pos_iou},
                    {"score_threshold", proposal_score_threshold},
                    {"pad_factor", proposal_pad_factor},
                    {"top_k", proposal_top_k},
                    {"input_scale", mpn_input_scale},
                    {"nms_iou_raw", nms_iou_mpn},
                    {"nms_iou_fused", nms_iou_fused}};
  j["minibatch"] = {{"mpn", {{"total", mpn_minibatch_total},
                             {"pos_fraction", mpn_minibatch_pos_fraction},
                             {"pos_to_neg", "1:5"}}},
                    {"mcn", {{"total", mcn_minibatch_total},
                             {"pos_fraction", mcn_minibatch_pos_fraction},
                             {"pos_to_neg", "1:2"}}}};
  j["losses"] = {{"lambda", loss_lambda}};
  j["training_filter"] = {{"frame_step", train_frame_step},
                          {"min_height", train_min_height},
                          {"truncation_clip_fraction", truncation_clip_fraction}};
  j["evaluation"] = {{"match_iou", match_iou},
                     {"fppi_range", {fppi_lo, fppi_hi}},
                     {"fppi_points", fppi_points},
                     {"miss_rate_floor", miss_rate_floor},
                     {"reasonable_min_height", reasonable_min_height}};
  j["sanitize"] = {{"misalignment_iou", misalignment_iou},
                   {"diff_identity_iou", diff_identity_iou}};
  j["formats"] = {{"dataset", dataset_format_version}, {"curve", curve_format_version}};
  return j.dump(2) + "\n";
}

}  // namespace msdet::defaults

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msdet/annot_io.hpp"
#include "msdet/dataset.hpp"

namespace msdet {

/// Synthetic dataset + detector generator. Everything is a pure function of
/// (config, seed): frame i draws from Rng(derive_seed(seed, i, salt)), with
/// distinct salts for ground truth, detections and logits, so per-frame
/// generation parallelizes without changing output.
struct SynthConfig {
  std::uint64_t seed = 1;
  int n_frames = 10;

  int persons_min = 1;  // uniform persons-per-frame range
  int persons_max = 3;
  double height_min = 60;  // uniform person height range, pixels
  double height_max = 180;
  double day_fraction = 0.5;  // frame i is day iff i < round(day_fraction * n_frames)
  ImageSize image_size;

  // Per-object state probabilities.
  double prob_occlusion_partial = 0.1;
  double prob_occlusion_heavy = 0.05;
  double prob_label_uncertain = 0.05;  // "person?"
  double prob_label_people = 0.05;
  double prob_label_ignore_aligned = 0.05;  // "person?a"

  struct Detector {
    double recall = 1.0;       // per evaluate-instance TP probability
    double fppi_target = 0.0;  // expected false positives per frame
    double localization_jitter = 0.0;  // TP center jitter, pixels std
    double score_noise = 0.05;         // score spread, std
    double tp_score_base = 0.75;       // TPs stochastically dominate FPs
    double fp_score_base = 0.25;
  } detector;

  /// Reasonable setting used to decide which instances the detector can hit.
  ReasonableConfig reasonable;
};

/// Ground-truth frames only; detections come from synth_detector. Heights
/// are drawn uniformly, widths fixed at 0.41 * height, boxes placed fully
/// inside the image.
Dataset synth_dataset(const SynthConfig& cfg);

/// For every evaluate-class instance emits a jittered true positive with
/// probability recall; adds floor(fppi_target) + Bernoulli(frac) background
/// false positives per frame. Scores carry stream logits consistent with the
/// fused score. Ignore-class ground truth never receives a true positive.
std::vector<Detection> synth_detector(std::span<const FrameAnnotations> frames,
                                      const SynthConfig& cfg);

/// Inverse fusion: four random stream pairs whose fused score equals the
/// given score to 1e-9. Scores of exactly 0 or 1 have no finite logits.
StreamLogits synth_logits(double score, std::uint64_t seed);

}  // namespace msdet

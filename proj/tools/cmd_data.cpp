// Data-side subcommands: synth, filter, masks, anchors.

#include <filesystem>
#include <memory>

#include "common.hpp"
#include "msdet/anchors.hpp"
#include "msdet/dataset.hpp"
#include "msdet/errors.hpp"
#include "msdet/harness.hpp"
#include "msdet/io_util.hpp"

namespace msdet::cli {

namespace fs = std::filesystem;

void register_synth(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand(
      "synth", "Generate a deterministic synthetic dataset tree with oracle detections");
  auto cfg = std::make_shared<SynthConfig>();
  auto out = std::make_shared<std::string>();

  cmd->add_option("--seed", cfg->seed, "Master seed");
  cmd->add_option("--frames", cfg->n_frames, "Number of frames")->required();
  cmd->add_option("--out", *out, "Output directory")->required();
  cmd->add_option("--persons-min", cfg->persons_min, "Minimum persons per frame");
  cmd->add_option("--persons-max", cfg->persons_max, "Maximum persons per frame");
  cmd->add_option("--height-min", cfg->height_min, "Minimum person height, px");
  cmd->add_option("--height-max", cfg->height_max, "Maximum person height, px");
  cmd->add_option("--day-fraction", cfg->day_fraction, "Fraction of day frames");
  cmd->add_option("--width", cfg->image_size.width, "Image width, px");
  cmd->add_option("--img-height", cfg->image_size.height, "Image height, px");
  cmd->add_option("--occl-partial", cfg->prob_occlusion_partial, "P(partial occlusion)");
  cmd->add_option("--occl-heavy", cfg->prob_occlusion_heavy, "P(heavy occlusion)");
  cmd->add_option("--label-uncertain", cfg->prob_label_uncertain, "P(person? label)");
  cmd->add_option("--label-people", cfg->prob_label_people, "P(people label)");
  cmd->add_option("--label-aligned", cfg->prob_label_ignore_aligned, "P(person?a label)");
  cmd->add_option("--recall", cfg->detector.recall, "Detector recall");
  cmd->add_option("--fppi", cfg->detector.fppi_target, "Expected false positives per frame");
  cmd->add_option("--jitter", cfg->detector.localization_jitter, "TP jitter std, px");
  cmd->add_option("--score-noise", cfg->detector.score_noise, "Score noise std");

  cmd->callback([cfg, out, &global] {
    Dataset ds = synth_dataset(*cfg);
    ds.detections = synth_detector(ds.frames, *cfg);

    const fs::path root = *out;
    save_bbgt_tree(root / "annotations", ds.frames);
    write_file_atomic(root / "frames.txt", write_frame_table(ds.frames));
    write_file_atomic(root / "detections.csv",
                      write_detections(ds.detections, frame_table_of(ds.frames)));
    write_file_atomic(root / "dataset.json", write_canonical(ds));

    emit_summary(global,
                 "wrote " + std::to_string(ds.frames.size()) + " frames and " +
                     std::to_string(ds.detections.size()) + " detections to " + root.string(),
                 {{"frames", ds.frames.size()},
                  {"detections", ds.detections.size()},
                  {"out", root.string()}});
  });
}

void register_filter(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand(
      "filter", "Apply the training-set protocol: frame stride, instance re-flagging");
  auto gt = std::make_shared<std::string>();
  auto frames_file = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto out_bbgt = std::make_shared<std::string>();
  auto cfg = std::make_shared<FilterConfig>();
  auto occl = std::make_shared<std::string>("heavy");
  auto keep_truncated = std::make_shared<bool>(false);

  cmd->add_option("--gt", *gt, "bbGt tree or canonical dataset")->required();
  cmd->add_option("--frames", *frames_file, "Frame table (order + day/night)");
  cmd->add_option("--out", *out, "Canonical-JSON output path");
  cmd->add_option("--out-bbgt", *out_bbgt, "bbGt tree output directory");
  cmd->add_option("--step", cfg->frame_step, "Keep every step-th frame per video");
  cmd->add_option("--min-height", cfg->min_height, "Instance height threshold, px");
  cmd->add_option("--exclude-occlusion", *occl, "Comma list of partial,heavy (default heavy)");
  cmd->add_flag("--keep-truncated", *keep_truncated, "Do not flag truncated instances");
  cmd->add_option("--truncation-fraction", cfg->truncation_clip_fraction,
                  "Clipped-area fraction that counts as truncated");

  cmd->callback([=, &global] {
    if (out->empty() && out_bbgt->empty())
      throw InputError("filter: give --out and/or --out-bbgt");
    cfg->exclude_occlusion.clear();
    for (const auto token : split(*occl, ',')) {
      if (token == "partial") cfg->exclude_occlusion.insert(Occlusion::partial);
      else if (token == "heavy") cfg->exclude_occlusion.insert(Occlusion::heavy);
      else if (token == "none" || token.empty()) continue;
      else throw InputError("filter: unknown occlusion state '" + std::string(token) + "'");
    }
    cfg->exclude_truncated = !*keep_truncated;

    const GtInput input = load_gt(*gt, *frames_file);
    Dataset filtered;
    filtered.frames = filter_training_frames(input.frames, *cfg);
    if (!out->empty()) write_file_atomic(*out, write_canonical(filtered));
    if (!out_bbgt->empty()) save_bbgt_tree(*out_bbgt, filtered.frames);

    emit_summary(global,
                 "kept " + std::to_string(filtered.frames.size()) + " of " +
                     std::to_string(input.frames.size()) + " frames",
                 {{"frames_in", input.frames.size()}, {"frames_kept", filtered.frames.size()}});
  });
}

void register_masks(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand("masks", "Rasterize weak segmentation masks to PGM files");
  auto gt = std::make_shared<std::string>();
  auto frames_file = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto stride = std::make_shared<double>(defaults::feature_stride);

  cmd->add_option("--gt", *gt, "bbGt tree or canonical dataset")->required();
  cmd->add_option("--frames", *frames_file, "Frame table");
  cmd->add_option("--out", *out, "Output directory")->required();
  cmd->add_option("--stride", *stride, "Pixels per mask cell");

  cmd->callback([=, &global] {
    const GtInput input = load_gt(*gt, *frames_file);
    for (const auto& fa : input.frames)
      write_file_atomic(fs::path(*out) / (fa.frame_id + ".pgm"),
                        write_pgm(rasterize_masks(fa, *stride)));
    emit_summary(global, "wrote " + std::to_string(input.frames.size()) + " masks to " + *out,
                 {{"masks", input.frames.size()}, {"out", *out}});
  });
}

void register_anchors(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand(
      "anchors", "Derive quantile anchor scales from training annotations");
  auto gt = std::make_shared<std::string>();
  auto frames_file = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto bins = std::make_shared<int>(defaults::anchor_bins);
  auto ratio = std::make_shared<double>(defaults::aspect_ratio);
  auto stride = std::make_shared<double>(defaults::feature_stride);

  cmd->add_option("--gt", *gt, "bbGt tree or canonical dataset")->required();
  cmd->add_option("--frames", *frames_file, "Frame table");
  cmd->add_option("--out", *out, "Write the spec as canonical JSON here");
  cmd->add_option("--bins", *bins, "Quantile bins (scales = bins + 1)");
  cmd->add_option("--ratio", *ratio, "Fixed aspect ratio, width/height");
  cmd->add_option("--stride", *stride, "Feature stride, px");

  cmd->callback([=, &global] {
    const GtInput input = load_gt(*gt, *frames_file);
    std::vector<double> heights;
    for (const auto& fa : input.frames)
      for (const auto& obj : fa.objects)
        if (obj.label.kind == LabelKind::person && !effective_ignore(obj))
          heights.push_back(obj.box.h);
    if (heights.empty()) throw InputError("anchors: no usable person instances in the input");

    const AnchorSpec spec = derive_anchor_spec(heights, *bins, *ratio, *stride);
    nlohmann::ordered_json j;
    j["heights"] = spec.heights;
    j["aspect_ratio"] = spec.aspect_ratio;
    j["stride"] = spec.stride;
    j["sample_count"] = heights.size();
    const std::string payload = j.dump(2) + "\n";
    if (!out->empty()) write_file_atomic(*out, payload);

    std::string human = "scales:";
    for (const double h : spec.heights) human += " " + format_double(h);
    human += "  (aspect " + format_double(spec.aspect_ratio) + ", stride " +
             format_double(spec.stride) + ", n=" + std::to_string(heights.size()) + ")";
    emit_summary(global, human, j);
  });
}

}  // namespace msdet::cli

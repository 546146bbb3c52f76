// Evaluation-side subcommands: eval, curve, fuse.

#include <cstdio>
#include <map>
#include <memory>

#include "common.hpp"
#include "msdet/errors.hpp"
#include "msdet/evaluation.hpp"
#include "msdet/fusion.hpp"
#include "msdet/io_util.hpp"

namespace msdet::cli {

namespace {

struct EvalArgs {
  std::string gt;
  std::string dets;
  std::string frames_file;
  std::string subset = "all";
  std::string out_curve;
  EvalConfig cfg;
};

void add_eval_options(CLI::App& cmd, EvalArgs& args) {
  cmd.add_option("--gt", args.gt, "bbGt tree or canonical dataset")->required();
  cmd.add_option("--dets", args.dets, "Detection CSV or canonical dataset")->required();
  cmd.add_option("--frames", args.frames_file, "Frame table (order + day/night)");
  cmd.add_option("--subset", args.subset, "all|day|night");
  cmd.add_option("--iou", args.cfg.match_iou, "Match IoU threshold");
  cmd.add_option("--fppi-lo", args.cfg.fppi_lo, "FPPI reference range low end");
  cmd.add_option("--fppi-hi", args.cfg.fppi_hi, "FPPI reference range high end");
  cmd.add_option("--points", args.cfg.n_points, "Log-spaced FPPI reference count");
  cmd.add_option("--reasonable-height", args.cfg.reasonable.min_height,
                 "Reasonable-setting height threshold, px");
}

SubsetResult run_eval(const EvalArgs& args) {
  const GtInput gt = load_gt(args.gt, args.frames_file);
  const auto dets = load_detections(args.dets, gt);
  return subset_eval(gt.frames, dets, subset_from_name(args.subset), args.cfg);
}

}  // namespace

void register_eval(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand("eval", "Score a detector: log-average miss rate");
  auto args = std::make_shared<EvalArgs>();
  add_eval_options(*cmd, *args);
  cmd->add_option("--out-curve", args->out_curve, "Also write the FPPI/miss sweep CSV");

  cmd->callback([args, &global] {
    const SubsetResult result = run_eval(*args);
    if (!args->out_curve.empty())
      write_file_atomic(args->out_curve, export_curve(result.curve));

    char line[64];
    std::snprintf(line, sizeof(line), "MR-%s: %.2f%%", args->subset.c_str(), result.mr * 100.0);
    emit_summary(global, line,
                 {{"subset", args->subset},
                  {"mr", result.mr},
                  {"frames", result.curve.frame_count},
                  {"points", result.curve.points.size()}});
  });
}

void register_curve(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand("curve", "Emit the FPPI/miss-rate sweep CSV only");
  auto args = std::make_shared<EvalArgs>();
  auto out = std::make_shared<std::string>();
  add_eval_options(*cmd, *args);
  cmd->add_option("--out", *out, "Curve CSV path")->required();

  cmd->callback([args, out, &global] {
    const SubsetResult result = run_eval(*args);
    write_file_atomic(*out, export_curve(result.curve));
    emit_summary(global,
                 "wrote " + std::to_string(result.curve.points.size()) + " sweep points to " +
                     *out,
                 {{"points", result.curve.points.size()}, {"out", *out}});
  });
}

void register_fuse(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand(
      "fuse", "Re-score detections by fusing per-stream logits; write detection CSV");
  auto dets_path = std::make_shared<std::string>();
  auto frames_file = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto streams = std::make_shared<std::string>("mpn,color,thermal,merged");
  auto nms_iou = std::make_shared<double>(defaults::nms_iou_fused);
  auto no_nms = std::make_shared<bool>(false);
  auto min_score = std::make_shared<double>(0.0);

  cmd->add_option("--dets", *dets_path, "Canonical dataset with stream logits")->required();
  cmd->add_option("--frames", *frames_file, "Frame table for CSV indices");
  cmd->add_option("--out", *out, "Fused detection CSV path")->required();
  cmd->add_option("--streams", *streams, "Comma subset of mpn,color,thermal,merged");
  cmd->add_option("--nms-iou", *nms_iou, "Per-frame NMS IoU after fusion");
  cmd->add_flag("--no-nms", *no_nms, "Skip NMS");
  cmd->add_option("--min-score", *min_score, "Drop fused detections at or below this score");

  cmd->callback([=, &global] {
    Dataset ds = read_canonical(read_file(*dets_path));
    std::vector<std::string> table;
    if (!frames_file->empty()) {
      for (const auto& entry : parse_frame_table(read_file(*frames_file)))
        table.push_back(entry.frame_id);
    } else {
      table = frame_table_of(ds.frames);
    }
    if (table.empty())
      throw InputError("fuse: no frame table (canonical file has no frames; pass --frames)");

    const StreamSet selected = StreamSet::from_names(*streams);
    for (std::size_t i = 0; i < ds.detections.size(); ++i) {
      auto& det = ds.detections[i];
      if (!det.stream_logits)
        throw InputError("fuse: detection " + std::to_string(i) + " carries no stream logits");
      det.score = fuse_scores(*det.stream_logits, selected);
    }

    std::vector<Detection> fused = filter_proposals(ds.detections, *min_score);
    if (!*no_nms) {
      // NMS runs per frame; frame order follows the table.
      std::map<std::string_view, std::vector<Detection>> per_frame;
      for (auto& det : fused) per_frame[det.frame_id].push_back(det);
      std::vector<Detection> kept;
      for (const auto& frame_id : table) {
        auto it = per_frame.find(frame_id);
        if (it == per_frame.end()) continue;
        for (auto& det : nms(it->second, *nms_iou)) kept.push_back(std::move(det));
      }
      fused = std::move(kept);
    }

    write_file_atomic(*out, write_detections(fused, table));
    emit_summary(global,
                 "fused " + std::to_string(ds.detections.size()) + " detections -> " +
                     std::to_string(fused.size()) + " rows in " + *out,
                 {{"in", ds.detections.size()}, {"out_rows", fused.size()}, {"out", *out}});
  });
}

}  // namespace msdet::cli

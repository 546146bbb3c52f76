// Annotation-quality subcommands: lint, diff, align.

#include <map>
#include <memory>

#include "common.hpp"
#include "msdet/errors.hpp"
#include "msdet/io_util.hpp"
#include "msdet/sanitize.hpp"

namespace msdet::cli {

void register_lint(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand("lint", "Flag suspicious annotations for human review");
  auto gt = std::make_shared<std::string>();
  auto frames_file = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();

  cmd->add_option("--gt", *gt, "bbGt tree or canonical dataset")->required();
  cmd->add_option("--frames", *frames_file, "Frame table");
  cmd->add_option("--out", *out, "Write the report as JSON here");

  cmd->callback([=, &global] {
    const GtInput input = load_gt(*gt, *frames_file);
    const LintReport report = lint_annotations(input.frames);
    if (!out->empty()) write_file_atomic(*out, lint_report_json(report));
    if (global.json) {
      emit_summary(global, "", nlohmann::ordered_json::parse(lint_report_json(report)));
    } else {
      emit_summary(global, lint_report_text(report), {});
    }
  });
}

void register_diff(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand(
      "diff", "Classify annotation changes between two versions of a dataset");
  auto old_path = std::make_shared<std::string>();
  auto new_path = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto exclude = std::make_shared<std::string>();
  auto out_annotations = std::make_shared<std::string>();
  auto opts = std::make_shared<DiffOptions>();

  cmd->add_option("--old", *old_path, "Original annotations (bbGt tree or canonical)")->required();
  cmd->add_option("--new", *new_path, "Revised annotations")->required();
  cmd->add_option("--out", *out, "Write the full diff as JSON here");
  cmd->add_option("--identity-iou", opts->identity_iou, "Same-instance IoU threshold");
  cmd->add_option("--exclude", *exclude,
                  "Revert one category (localization|classification|alignment)");
  cmd->add_option("--out-annotations", *out_annotations,
                  "Canonical-JSON path for the --exclude result");

  cmd->callback([=, &global] {
    const GtInput old_gt = load_gt(*old_path, "");
    const GtInput new_gt = load_gt(*new_path, "");
    const AnnotationDiff diff = diff_annotations(old_gt.frames, new_gt.frames, *opts);
    if (!out->empty()) write_file_atomic(*out, diff_json(diff));

    if (!exclude->empty()) {
      if (out_annotations->empty())
        throw InputError("diff: --exclude needs --out-annotations");
      Dataset semi;
      semi.frames =
          apply_exclusion(new_gt.frames, old_gt.frames, category_from_name(*exclude), *opts);
      write_file_atomic(*out_annotations, write_canonical(semi));
    }

    emit_summary(global, diff_summary_text(diff),
                 {{"unchanged", diff.summary.unchanged},
                  {"localization", diff.summary.localization},
                  {"classification", diff.summary.classification},
                  {"added", diff.summary.added},
                  {"removed", diff.summary.removed},
                  {"alignment", diff.summary.alignment}});
  });
}

void register_align(CLI::App& app, GlobalOptions& global) {
  auto* cmd = app.add_subcommand(
      "align", "Resolve color/thermal box pairs; misaligned pairs become person?a unions");
  auto color = std::make_shared<std::string>();
  auto thermal = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto reference = std::make_shared<std::string>("color");
  auto opts = std::make_shared<AlignOptions>();

  cmd->add_option("--color", *color, "Color-image bbGt tree")->required();
  cmd->add_option("--thermal", *thermal, "Thermal-image bbGt tree")->required();
  cmd->add_option("--out", *out, "Resolved bbGt tree directory")->required();
  cmd->add_option("--iou", opts->iou_threshold, "Alignment IoU threshold");
  cmd->add_option("--reference", *reference, "Aligned-branch box: color|thermal|average");

  cmd->callback([=, &global] {
    if (*reference == "color") opts->reference = AlignedReference::color;
    else if (*reference == "thermal") opts->reference = AlignedReference::thermal;
    else if (*reference == "average") opts->reference = AlignedReference::average;
    else throw InputError("align: unknown reference '" + *reference + "'");

    const GtInput color_gt = load_gt(*color, "");
    const GtInput thermal_gt = load_gt(*thermal, "");
    std::map<std::string, const FrameAnnotations*> thermal_by_id;
    for (const auto& fa : thermal_gt.frames) thermal_by_id.emplace(fa.frame_id, &fa);

    std::vector<FrameAnnotations> resolved;
    std::size_t misaligned = 0;
    for (const auto& fa : color_gt.frames) {
      auto it = thermal_by_id.find(fa.frame_id);
      if (it == thermal_by_id.end())
        throw InputError("align: frame '" + fa.frame_id + "' missing from the thermal tree");
      FrameAnnotations merged = align_frames(fa, *it->second, *opts);
      for (std::size_t i = 0; i < merged.objects.size(); ++i)
        misaligned += merged.objects[i].label.kind == LabelKind::person_ignore_aligned &&
                      fa.objects[i].label.kind != LabelKind::person_ignore_aligned;
      resolved.push_back(std::move(merged));
    }
    save_bbgt_tree(*out, resolved);

    emit_summary(global,
                 "resolved " + std::to_string(color_gt.frames.size()) + " frames, " +
                     std::to_string(misaligned) + " misaligned instance(s)",
                 {{"frames", color_gt.frames.size()}, {"misaligned", misaligned}});
  });
}

}  // namespace msdet::cli

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msdet/annot_io.hpp"
#include "msdet/defaults.hpp"

namespace msdet {

/// Which modality's box represents an instance whose color/thermal boxes
/// agree; the misaligned branch always produces the union.
enum class AlignedReference { color, thermal, average };

struct AlignOptions {
  double iou_threshold = defaults::misalignment_iou;
  AlignedReference reference = AlignedReference::color;
};

struct AlignResolution {
  Box box;
  bool misaligned;  // true: relabel person?a and ignore during training
};

/// The misaligned-region rule: when the separately labeled color and thermal
/// boxes have IoU strictly below the threshold, the instance becomes the
/// minimum box bounding both, labeled person?a; otherwise the reference box
/// stands with its original label.
AlignResolution resolve_misalignment(const Box& color_box, const Box& thermal_box,
                                     const AlignOptions& opts = {});

/// Applies resolve_misalignment to a frame pair; objects are paired by
/// position (the annotator labels the same instances in order), so the two
/// frames must carry equally many objects. Labels, occlusion and ignore
/// flags come from the color frame on the aligned branch.
FrameAnnotations align_frames(const FrameAnnotations& color, const FrameAnnotations& thermal,
                              const AlignOptions& opts = {});

// ---------------------------------------------------------------------------
// Annotation lints — advisory flags for the error classes a human reviewer
// then judges; thresholds are heuristics.
// ---------------------------------------------------------------------------

struct LintRecord {
  std::string frame_id;
  std::size_t object_index;
  std::string code;     // aspect | duplicate | bounds | tiny | ignore-flag
  std::string message;
};

struct LintReport {
  std::vector<LintRecord> records;  // sorted by (frame_id, object_index, code)
};

LintReport lint_annotations(std::span<const FrameAnnotations> frames);
std::string lint_report_text(const LintReport& report);
std::string lint_report_json(const LintReport& report);

// ---------------------------------------------------------------------------
// Annotation diffing between an original and a revised set.
// ---------------------------------------------------------------------------

enum class ChangeKind { localization, classification, added, removed, alignment };

const char* to_string(ChangeKind kind);

/// One classified difference. Alignment records keep the base class they
/// would otherwise have fallen into (localization, classification or added)
/// so that bookkeeping over old/new object counts stays exact.
struct Change {
  ChangeKind kind = ChangeKind::added;
  ChangeKind alignment_base = ChangeKind::added;
  std::vector<std::size_t> old_indices;  // consumed old objects, ascending
  std::vector<GtObject> old_objects;
  std::optional<std::size_t> new_index;
  std::optional<GtObject> new_object;
};

struct FrameDiff {
  std::string frame_id;
  std::vector<Change> changes;
  std::size_t unchanged = 0;
};

struct DiffSummary {
  std::size_t unchanged = 0;
  std::size_t localization = 0;
  std::size_t classification = 0;
  std::size_t added = 0;
  std::size_t removed = 0;
  std::size_t alignment = 0;
};

struct AnnotationDiff {
  std::vector<FrameDiff> frames;  // sorted by frame_id
  std::vector<std::string> frames_missing_in_new;
  std::vector<std::string> frames_missing_in_old;
  DiffSummary summary;
};

struct DiffOptions {
  /// Minimum IoU for an old/new pair to count as the same physical instance.
  double identity_iou = defaults::diff_identity_iou;
  double geometry_eps = 1e-6;
};

/// Greedy max-IoU identity matching per frame, then per-pair classification:
/// geometry changed -> localization; same geometry with a label or occlusion
/// flip -> classification; unmatched news -> added; unmatched olds ->
/// removed. A new person?a box equal to the union of the old boxes it
/// contains is an alignment change consuming those olds. Duplicate frame ids
/// are an input error; frames present on one side only are reported.
AnnotationDiff diff_annotations(std::span<const FrameAnnotations> old_set,
                                std::span<const FrameAnnotations> new_set,
                                const DiffOptions& opts = {});

std::string diff_json(const AnnotationDiff& diff);
std::string diff_summary_text(const AnnotationDiff& diff);

// ---------------------------------------------------------------------------
// Semi-sanitized sets: revert one error category.
// ---------------------------------------------------------------------------

/// The three corrected error categories. `classification` covers label and
/// occlusion flips plus missing/spurious annotations (added/removed), since
/// misclassification includes labeling a person as background.
enum class ErrorCategory { localization, classification, alignment };

ErrorCategory category_from_name(std::string_view name);
const char* to_string(ErrorCategory category);

/// Starts from the fully sanitized set and reverts every change of the named
/// category back to the original version. Reverting all three categories
/// composes back to the original set exactly.
std::vector<FrameAnnotations> apply_exclusion(std::span<const FrameAnnotations> full_sanitized,
                                              std::span<const FrameAnnotations> original,
                                              ErrorCategory category,
                                              const DiffOptions& opts = {});

}  // namespace msdet

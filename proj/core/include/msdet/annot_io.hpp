#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msdet/geometry.hpp"

namespace msdet {

enum class Occlusion { none, partial, heavy };

enum class LabelKind {
  person,
  person_uncertain,      // "person?"
  people,
  person_ignore_aligned, // "person?a" — misaligned-region ignore label
  cyclist,
  other,
};

/// Object category. `text` always holds the exact on-disk token, canonical
/// for the known kinds; equality is token equality.
struct Label {
  LabelKind kind = LabelKind::other;
  std::string text;

  static Label from_text(std::string_view token);
  static Label of(LabelKind kind);

  friend bool operator==(const Label& a, const Label& b) { return a.text == b.text; }
};

struct GtObject {
  Label label;
  Box box;
  Occlusion occlusion = Occlusion::none;
  bool ignore = false;
};

/// person?a regions are ignored regardless of the parsed flag; writers in
/// this toolkit always set the flag, but parsers preserve what the file says
/// so lint_annotations can flag the inconsistency.
inline bool effective_ignore(const GtObject& obj) {
  return obj.ignore || obj.label.kind == LabelKind::person_ignore_aligned;
}

enum class TimeOfDay { day, night };

struct ImageSize {
  double width = 640;
  double height = 512;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

struct FrameAnnotations {
  std::string frame_id;  // set/video/frame triple, unique within a dataset
  TimeOfDay time_of_day = TimeOfDay::day;
  ImageSize image_size;
  std::vector<GtObject> objects;
};

struct LogitPair {
  double c0 = 0;
  double c1 = 0;
};

/// Per-stream 2-class logits carried by a detection. The proposal-stage pair
/// is always present; the classification-stage streams may be absent under
/// ablation configurations.
struct StreamLogits {
  LogitPair mpn;
  std::optional<LogitPair> color;
  std::optional<LogitPair> thermal;
  std::optional<LogitPair> merged;
};

struct Detection {
  std::string frame_id;
  Box box;
  double score = 0;  // in [0, 1]
  std::optional<StreamLogits> stream_logits;
};

/// In-memory form of the canonical interchange document.
struct Dataset {
  std::vector<FrameAnnotations> frames;
  std::vector<Detection> detections;
};

// ---------------------------------------------------------------------------
// bbGt v3 ground-truth text format
//
// One file per frame: a "% bbGt version=3" header followed by one line per
// object, twelve whitespace-separated fields:
//   label x y w h occluded vx vy vw vh ignore angle
// The visible-region fields (vx..vh) and angle are parsed but not modeled;
// writes emit zeros there.
// ---------------------------------------------------------------------------

/// KAIST codes the occluded column 0/1/2 (none/partial/heavy); classic
/// Caltech uses 0/1. Ternary accepts both; binary makes a 2 a field error.
enum class OcclusionCoding { binary, ternary };

struct BbgtOptions {
  OcclusionCoding occlusion_coding = OcclusionCoding::ternary;
  ImageSize image_size;  // bbGt files carry no size; needed for lints
};

/// Non-fatal anomaly noticed while parsing (unknown label, box empty after
/// clipping, ...). Parsing never silently drops objects.
struct IoLint {
  std::string frame_id;
  std::size_t line = 0;
  std::string message;
};

FrameAnnotations parse_bbgt(std::string_view text, std::string frame_id,
                            const BbgtOptions& opts = {},
                            std::vector<IoLint>* lints = nullptr);

/// Inverse of parse_bbgt at the domain-type level (frame_id, time of day and
/// image size live outside the format). UTF-8, LF line endings.
std::string write_bbgt(const FrameAnnotations& fa);

// ---------------------------------------------------------------------------
// Detection CSV: one line per detection, "frame_index,x,y,w,h,score" with
// 1-based frame_index resolved through a frame table (frame ids in index
// order).
// ---------------------------------------------------------------------------

std::vector<Detection> parse_detections(std::string_view text,
                                        std::span<const std::string> frame_table);

std::string write_detections(std::span<const Detection> dets,
                             std::span<const std::string> frame_table);

/// frame_table[i] <-> CSV frame_index i+1, derived from a frame list.
std::vector<std::string> frame_table_of(std::span<const FrameAnnotations> frames);

// ---------------------------------------------------------------------------
// Canonical JSON interchange (schema in docs/formats.md). Lossless for every
// domain-type field; read(write(ds)) == ds.
// ---------------------------------------------------------------------------

std::string write_canonical(const Dataset& ds);
Dataset read_canonical(std::string_view json_text);

// ---------------------------------------------------------------------------
// bbGt trees: one file per frame, <root>/<frame_id>.txt.
// ---------------------------------------------------------------------------

/// Loads every *.txt under root; frame_id is the relative path without the
/// extension. Frames are returned sorted by frame_id.
std::vector<FrameAnnotations> load_bbgt_tree(const std::filesystem::path& root,
                                             const BbgtOptions& opts = {},
                                             std::vector<IoLint>* lints = nullptr);

void save_bbgt_tree(const std::filesystem::path& root,
                    std::span<const FrameAnnotations> frames);

// ---------------------------------------------------------------------------
// Frame tables on disk: one frame per line, "frame_id" or
// "frame_id\tday|night", line order giving the 1-based CSV index.
// ---------------------------------------------------------------------------

struct FrameTableEntry {
  std::string frame_id;
  std::optional<TimeOfDay> time_of_day;
};

std::vector<FrameTableEntry> parse_frame_table(std::string_view text);
std::string write_frame_table(std::span<const FrameAnnotations> frames);

const char* to_string(Occlusion occ);
const char* to_string(TimeOfDay tod);

}  // namespace msdet

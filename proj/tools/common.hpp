#pragma once

#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "msdet/annot_io.hpp"

namespace msdet::cli {

struct GlobalOptions {
  bool json = false;  // machine-readable summaries on stdout
};

/// Loaded ground truth plus the frame table that maps detection CSV indices.
struct GtInput {
  std::vector<FrameAnnotations> frames;
  std::vector<std::string> frame_table;
  std::vector<Detection> canonical_detections;  // present when gt was canonical JSON
};

/// `path` is either a bbGt tree directory or a canonical-JSON dataset file.
/// An optional frame-table file fixes CSV index order and day/night tags;
/// without one the table is the loaded frame order (bbGt trees sort by
/// frame_id).
GtInput load_gt(const std::string& path, const std::string& frames_file);

/// Detections from a CSV (resolved through the table) or a canonical-JSON
/// dataset file.
std::vector<Detection> load_detections(const std::string& path, const GtInput& gt);

/// Pretty or compact summary line handling for --json.
void emit_summary(const GlobalOptions& global, const std::string& human,
                  const nlohmann::ordered_json& machine);

/// JSON object config files: {"option": value, "subcommand": {"option": value}}.
/// Command-line values override file values (CLI11 precedence).
class JsonConfig : public CLI::Config {
public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

void register_synth(CLI::App& app, GlobalOptions& global);
void register_filter(CLI::App& app, GlobalOptions& global);
void register_masks(CLI::App& app, GlobalOptions& global);
void register_anchors(CLI::App& app, GlobalOptions& global);
void register_eval(CLI::App& app, GlobalOptions& global);
void register_curve(CLI::App& app, GlobalOptions& global);
void register_fuse(CLI::App& app, GlobalOptions& global);
void register_lint(CLI::App& app, GlobalOptions& global);
void register_diff(CLI::App& app, GlobalOptions& global);
void register_align(CLI::App& app, GlobalOptions& global);

}  // namespace msdet::cli

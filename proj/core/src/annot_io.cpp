#include "msdet/annot_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "msdet/errors.hpp"
#include "msdet/io_util.hpp"

namespace msdet {

namespace {

constexpr std::string_view kBbgtHeader = "% bbGt version=3";

const std::pair<LabelKind, const char*> kKnownLabels[] = {
    {LabelKind::person, "person"},
    {LabelKind::person_uncertain, "person?"},
    {LabelKind::people, "people"},
    {LabelKind::person_ignore_aligned, "person?a"},
    {LabelKind::cyclist, "cyclist"},
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_field(std::string_view token, std::size_t line, std::size_t column,
                   const char* what) {
  double v = 0;
  if (!try_parse_double(token, v))
    throw ParseError(std::string("non-numeric ") + what + " field '" + std::string(token) + "'",
                     line, column);
  return v;
}

}  // namespace

Label Label::from_text(std::string_view token) {
  for (const auto& [kind, text] : kKnownLabels)
    if (token == text) return Label{kind, std::string(text)};
  return Label{LabelKind::other, std::string(token)};
}

Label Label::of(LabelKind kind) {
  for (const auto& [k, text] : kKnownLabels)
    if (k == kind) return Label{k, std::string(text)};
  return Label{LabelKind::other, "other"};
}

const char* to_string(Occlusion occ) {
  switch (occ) {
    case Occlusion::none: return "none";
    case Occlusion::partial: return "partial";
    case Occlusion::heavy: return "heavy";
  }
  return "none";
}

const char* to_string(TimeOfDay tod) {
  return tod == TimeOfDay::day ? "day" : "night";
}

FrameAnnotations parse_bbgt(std::string_view text, std::string frame_id,
                            const BbgtOptions& opts, std::vector<IoLint>* lints) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0].substr(0, 1) != "%")
    throw ParseError("missing bbGt header line", 1);
  if (lines[0] != kBbgtHeader)
    throw ParseError("unsupported bbGt header '" + std::string(lines[0]) +
                         "', expected '" + std::string(kBbgtHeader) + "' (version mismatch)",
                     1);

  FrameAnnotations fa;
  fa.frame_id = std::move(frame_id);
  fa.image_size = opts.image_size;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string_view line = lines[li];
    const auto fields = split_ws(line);
    if (fields.empty()) continue;  // blank line
    const std::size_t lineno = li + 1;
    if (fields.size() != 12)
      throw ParseError("expected 12 fields, got " + std::to_string(fields.size()), lineno);

    GtObject obj{Label::from_text(fields[0]),
                 Box(parse_field(fields[1], lineno, 2, "x"),
                     parse_field(fields[2], lineno, 3, "y"),
                     parse_field(fields[3], lineno, 4, "w"),
                     parse_field(fields[4], lineno, 5, "h"))};

    const double occ = parse_field(fields[5], lineno, 6, "occluded");
    if (occ == 0) {
      obj.occlusion = Occlusion::none;
    } else if (occ == 1) {
      obj.occlusion = Occlusion::partial;
    } else if (occ == 2 && opts.occlusion_coding == OcclusionCoding::ternary) {
      obj.occlusion = Occlusion::heavy;
    } else {
      throw ParseError("invalid occluded value '" + std::string(fields[5]) + "'", lineno, 6);
    }

    // visible-region fields are validated but not modeled
    for (int f = 6; f < 10; ++f) parse_field(fields[f], lineno, f + 1, "visible-region");

    const double ign = parse_field(fields[10], lineno, 11, "ignore");
    if (ign != 0 && ign != 1)
      throw ParseError("invalid ignore value '" + std::string(fields[10]) + "'", lineno, 11);
    obj.ignore = ign == 1;
    parse_field(fields[11], lineno, 12, "angle");

    if (lints) {
      if (obj.label.kind == LabelKind::other)
        lints->push_back({fa.frame_id, lineno, "unknown label '" + obj.label.text + "'"});
      if (!clip(obj.box, fa.image_size.width, fa.image_size.height))
        lints->push_back({fa.frame_id, lineno, "box empty after clipping to image"});
    }
    fa.objects.push_back(std::move(obj));
  }
  return fa;
}

std::string write_bbgt(const FrameAnnotations& fa) {
  std::string out(kBbgtHeader);
  out += '\n';
  for (const auto& obj : fa.objects) {
    int occ = obj.occlusion == Occlusion::none ? 0 : obj.occlusion == Occlusion::partial ? 1 : 2;
    out += obj.label.text;
    out += ' ';
    out += format_double(obj.box.x);
    out += ' ';
    out += format_double(obj.box.y);
    out += ' ';
    out += format_double(obj.box.w);
    out += ' ';
    out += format_double(obj.box.h);
    out += ' ';
    out += std::to_string(occ);
    out += " 0 0 0 0 ";
    out += obj.ignore ? '1' : '0';
    out += " 0\n";
  }
  return out;
}

std::vector<Detection> parse_detections(std::string_view text,
                                        std::span<const std::string> frame_table) {
  std::vector<Detection> dets;
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const std::size_t lineno = li + 1;
    const auto fields = split(lines[li], ',');
    if (fields.size() != 6)
      throw ParseError("expected 6 comma-separated fields, got " + std::to_string(fields.size()),
                       lineno);
    const double idx = parse_field(fields[0], lineno, 1, "frame_index");
    if (idx != std::floor(idx) || idx < 1 || idx > static_cast<double>(frame_table.size()))
      throw ParseError("frame_index " + std::string(fields[0]) + " outside frame table (1.." +
                           std::to_string(frame_table.size()) + ")",
                       lineno, 1);
    Box box(parse_field(fields[1], lineno, 2, "x"), parse_field(fields[2], lineno, 3, "y"),
            parse_field(fields[3], lineno, 4, "w"), parse_field(fields[4], lineno, 5, "h"));
    const double score = parse_field(fields[5], lineno, 6, "score");
    if (!(score >= 0.0 && score <= 1.0))
      throw ParseError("score " + std::string(fields[5]) + " outside [0,1]", lineno, 6);
    dets.push_back(Detection{frame_table[static_cast<std::size_t>(idx) - 1], box, score, {}});
  }
  return dets;
}

std::string write_detections(std::span<const Detection> dets,
                             std::span<const std::string> frame_table) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < frame_table.size(); ++i) index[frame_table[i]] = i + 1;
  std::string out;
  for (const auto& d : dets) {
    auto it = index.find(d.frame_id);
    if (it == index.end())
      throw InputError("detection frame_id '" + d.frame_id + "' not in frame table");
    out += std::to_string(it->second);
    out += ',';
    out += format_double(d.box.x);
    out += ',';
    out += format_double(d.box.y);
    out += ',';
    out += format_double(d.box.w);
    out += ',';
    out += format_double(d.box.h);
    out += ',';
    out += format_double(d.score);
    out += '\n';
  }
  return out;
}

std::vector<std::string> frame_table_of(std::span<const FrameAnnotations> frames) {
  std::vector<std::string> table;
  table.reserve(frames.size());
  for (const auto& f : frames) table.push_back(f.frame_id);
  return table;
}

std::vector<FrameAnnotations> load_bbgt_tree(const std::filesystem::path& root,
                                             const BbgtOptions& opts,
                                             std::vector<IoLint>* lints) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw InputError("not a directory: " + root.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      files.push_back(entry.path());
  std::vector<FrameAnnotations> frames;
  frames.reserve(files.size());
  for (const auto& path : files) {
    fs::path rel = fs::relative(path, root);
    rel.replace_extension();
    std::string frame_id = rel.generic_string();
    try {
      frames.push_back(parse_bbgt(read_file(path), frame_id, opts, lints));
    } catch (const ParseError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  }
  std::sort(frames.begin(), frames.end(),
            [](const auto& a, const auto& b) { return a.frame_id < b.frame_id; });
  return frames;
}

void save_bbgt_tree(const std::filesystem::path& root,
                    std::span<const FrameAnnotations> frames) {
  for (const auto& fa : frames) {
    std::filesystem::path path = root / (fa.frame_id + ".txt");
    write_file_atomic(path, write_bbgt(fa));
  }
}

std::vector<FrameTableEntry> parse_frame_table(std::string_view text) {
  std::vector<FrameTableEntry> out;
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = split(lines[li], '\t');
    if (fields.size() > 2)
      throw ParseError("expected 'frame_id' or 'frame_id<TAB>day|night'", li + 1);
    FrameTableEntry e;
    e.frame_id = std::string(fields[0]);
    if (fields.size() == 2) {
      if (fields[1] == "day") e.time_of_day = TimeOfDay::day;
      else if (fields[1] == "night") e.time_of_day = TimeOfDay::night;
      else throw ParseError("unknown time of day '" + std::string(fields[1]) + "'", li + 1, 2);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string write_frame_table(std::span<const FrameAnnotations> frames) {
  std::string out;
  for (const auto& f : frames) {
    out += f.frame_id;
    out += '\t';
    out += to_string(f.time_of_day);
    out += '\n';
  }
  return out;
}

}  // namespace msdet

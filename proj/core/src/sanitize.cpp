#include "msdet/sanitize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "msdet/errors.hpp"
#include "msdet/io_util.hpp"

namespace msdet {

AlignResolution resolve_misalignment(const Box& color_box, const Box& thermal_box,
                                     const AlignOptions& opts) {
  if (iou(color_box, thermal_box) < opts.iou_threshold)
    return {union_box(color_box, thermal_box), true};
  switch (opts.reference) {
    case AlignedReference::color: return {color_box, false};
    case AlignedReference::thermal: return {thermal_box, false};
    case AlignedReference::average: {
      const Box& c = color_box;
      const Box& t = thermal_box;
      return {Box(0.5 * (c.x + t.x), 0.5 * (c.y + t.y), 0.5 * (c.w + t.w), 0.5 * (c.h + t.h)),
              false};
    }
  }
  return {color_box, false};
}

FrameAnnotations align_frames(const FrameAnnotations& color, const FrameAnnotations& thermal,
                              const AlignOptions& opts) {
  if (color.objects.size() != thermal.objects.size())
    throw InputError("align: frame '" + color.frame_id + "' has " +
                     std::to_string(color.objects.size()) + " color objects but " +
                     std::to_string(thermal.objects.size()) + " thermal objects");
  FrameAnnotations out = color;
  for (std::size_t i = 0; i < color.objects.size(); ++i) {
    const auto res =
        resolve_misalignment(color.objects[i].box, thermal.objects[i].box, opts);
    out.objects[i].box = res.box;
    if (res.misaligned) {
      out.objects[i].label = Label::of(LabelKind::person_ignore_aligned);
      out.objects[i].ignore = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lints
// ---------------------------------------------------------------------------

LintReport lint_annotations(std::span<const FrameAnnotations> frames) {
  LintReport report;
  for (const auto& fa : frames) {
    const auto& objs = fa.objects;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      const auto& obj = objs[i];
      if (obj.label.kind == LabelKind::person) {
        const double ratio = obj.box.w / obj.box.h;
        if (ratio < 0.2 || ratio > 0.8)
          report.records.push_back({fa.frame_id, i, "aspect",
                                    "person box aspect ratio " + format_double(ratio) +
                                        " outside [0.2, 0.8]"});
      }
      if (obj.box.x < -1 || obj.box.y < -1 || obj.box.right() > fa.image_size.width + 1 ||
          obj.box.bottom() > fa.image_size.height + 1)
        report.records.push_back(
            {fa.frame_id, i, "bounds", "box exceeds image bounds by more than 1 px"});
      if (obj.box.h < 10)
        report.records.push_back(
            {fa.frame_id, i, "tiny", "box height " + format_double(obj.box.h) + " below 10 px"});
      if (obj.label.kind == LabelKind::person_ignore_aligned && !obj.ignore)
        report.records.push_back(
            {fa.frame_id, i, "ignore-flag", "person?a object without ignore flag"});
      for (std::size_t j = 0; j < i; ++j) {
        if (objs[j].label == obj.label && iou(objs[j].box, obj.box) > 0.8) {
          report.records.push_back({fa.frame_id, i, "duplicate",
                                    "near-duplicate of object " + std::to_string(j) +
                                        " (same label, IoU > 0.8)"});
          break;
        }
      }
    }
  }
  std::sort(report.records.begin(), report.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.frame_id, a.object_index, a.code) <
           std::tie(b.frame_id, b.object_index, b.code);
  });
  return report;
}

std::string lint_report_text(const LintReport& report) {
  std::string out;
  for (const auto& r : report.records) {
    out += r.frame_id;
    out += " object ";
    out += std::to_string(r.object_index);
    out += " [";
    out += r.code;
    out += "] ";
    out += r.message;
    out += '\n';
  }
  out += std::to_string(report.records.size());
  out += " finding(s)\n";
  return out;
}

std::string lint_report_json(const LintReport& report) {
  nlohmann::ordered_json j;
  j["findings"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records)
    j["findings"].push_back({{"frame_id", r.frame_id},
                             {"object_index", r.object_index},
                             {"code", r.code},
                             {"message", r.message}});
  j["count"] = report.records.size();
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Diff
// ---------------------------------------------------------------------------

const char* to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::localization: return "localization";
    case ChangeKind::classification: return "classification";
    case ChangeKind::added: return "added";
    case ChangeKind::removed: return "removed";
    case ChangeKind::alignment: return "alignment";
  }
  return "added";
}

namespace {

bool same_geometry(const Box& a, const Box& b) {
  return a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h;
}

bool box_near(const Box& a, const Box& b, double eps) {
  return std::abs(a.x - b.x) <= eps && std::abs(a.y - b.y) <= eps &&
         std::abs(a.w - b.w) <= eps && std::abs(a.h - b.h) <= eps;
}

FrameDiff diff_frame(const FrameAnnotations& old_fa, const FrameAnnotations& new_fa,
                     const DiffOptions& opts) {
  FrameDiff fd;
  fd.frame_id = new_fa.frame_id;
  const auto& olds = old_fa.objects;
  const auto& news = new_fa.objects;

  // Greedy identity matching by descending IoU; ties prefer lower indices.
  struct Pair {
    double overlap;
    std::size_t oi, ni;
  };
  std::vector<Pair> pairs;
  for (std::size_t oi = 0; oi < olds.size(); ++oi)
    for (std::size_t ni = 0; ni < news.size(); ++ni) {
      const double overlap = iou(olds[oi].box, news[ni].box);
      if (overlap >= opts.identity_iou) pairs.push_back({overlap, oi, ni});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    return std::tie(a.oi, a.ni) < std::tie(b.oi, b.ni);
  });
  std::vector<int> old_match(olds.size(), -1), new_match(news.size(), -1);
  for (const auto& p : pairs) {
    if (old_match[p.oi] >= 0 || new_match[p.ni] >= 0) continue;
    old_match[p.oi] = static_cast<int>(p.ni);
    new_match[p.ni] = static_cast<int>(p.oi);
  }

  std::vector<bool> old_consumed(olds.size(), false);

  // Alignment pass: new person?a boxes equal to the union of the old boxes
  // they contain. Consumable olds are unmatched ones plus this new's match.
  std::vector<bool> new_is_alignment(news.size(), false);
  for (std::size_t ni = 0; ni < news.size(); ++ni) {
    if (news[ni].label.kind != LabelKind::person_ignore_aligned) continue;
    std::vector<std::size_t> inside;
    for (std::size_t oi = 0; oi < olds.size(); ++oi) {
      if (old_consumed[oi]) continue;
      if (old_match[oi] >= 0 && old_match[oi] != static_cast<int>(ni)) continue;
      if (contains(news[ni].box, olds[oi].box, opts.geometry_eps)) inside.push_back(oi);
    }
    if (inside.empty()) continue;
    Box u = olds[inside[0]].box;
    for (std::size_t k = 1; k < inside.size(); ++k) u = union_box(u, olds[inside[k]].box);
    if (!box_near(u, news[ni].box, opts.geometry_eps)) continue;

    Change change;
    change.kind = ChangeKind::alignment;
    if (new_match[ni] >= 0) {
      const auto& matched_old = olds[static_cast<std::size_t>(new_match[ni])];
      change.alignment_base = same_geometry(matched_old.box, news[ni].box)
                                  ? ChangeKind::classification
                                  : ChangeKind::localization;
    } else {
      change.alignment_base = ChangeKind::added;
    }
    change.new_index = ni;
    change.new_object = news[ni];
    for (const std::size_t oi : inside) {
      change.old_indices.push_back(oi);
      change.old_objects.push_back(olds[oi]);
      old_consumed[oi] = true;
    }
    new_is_alignment[ni] = true;
    fd.changes.push_back(std::move(change));
  }

  for (std::size_t ni = 0; ni < news.size(); ++ni) {
    if (new_is_alignment[ni]) continue;
    if (new_match[ni] >= 0) {
      const auto oi = static_cast<std::size_t>(new_match[ni]);
      const auto& o = olds[oi];
      const auto& n = news[ni];
      const bool geom_same = same_geometry(o.box, n.box);
      const bool class_same = o.label == n.label && o.occlusion == n.occlusion &&
                              o.ignore == n.ignore;
      if (geom_same && class_same) {
        ++fd.unchanged;
        continue;
      }
      Change change;
      change.kind = geom_same ? ChangeKind::classification : ChangeKind::localization;
      change.alignment_base = change.kind;
      change.old_indices.push_back(oi);
      change.old_objects.push_back(o);
      change.new_index = ni;
      change.new_object = n;
      fd.changes.push_back(std::move(change));
    } else {
      Change change;
      change.kind = ChangeKind::added;
      change.alignment_base = ChangeKind::added;
      change.new_index = ni;
      change.new_object = news[ni];
      fd.changes.push_back(std::move(change));
    }
  }

  for (std::size_t oi = 0; oi < olds.size(); ++oi) {
    if (old_consumed[oi]) continue;
    if (old_match[oi] >= 0 && !new_is_alignment[static_cast<std::size_t>(old_match[oi])]) continue;
    if (old_match[oi] >= 0 && new_is_alignment[static_cast<std::size_t>(old_match[oi])]) {
      // Matched to an alignment box but not geometrically inside it; the
      // union consumed other olds. Treat as removed.
    }
    Change change;
    change.kind = ChangeKind::removed;
    change.alignment_base = ChangeKind::removed;
    change.old_indices.push_back(oi);
    change.old_objects.push_back(olds[oi]);
    fd.changes.push_back(std::move(change));
  }
  return fd;
}

}  // namespace

AnnotationDiff diff_annotations(std::span<const FrameAnnotations> old_set,
                                std::span<const FrameAnnotations> new_set,
                                const DiffOptions& opts) {
  std::map<std::string, const FrameAnnotations*> old_by_id, new_by_id;
  for (const auto& fa : old_set)
    if (!old_by_id.emplace(fa.frame_id, &fa).second)
      throw InputError("diff: duplicate frame_id '" + fa.frame_id + "' in old set");
  for (const auto& fa : new_set)
    if (!new_by_id.emplace(fa.frame_id, &fa).second)
      throw InputError("diff: duplicate frame_id '" + fa.frame_id + "' in new set");

  AnnotationDiff diff;
  for (const auto& [id, fa] : old_by_id)
    if (!new_by_id.contains(id)) diff.frames_missing_in_new.push_back(id);
  for (const auto& [id, fa] : new_by_id)
    if (!old_by_id.contains(id)) diff.frames_missing_in_old.push_back(id);

  for (const auto& [id, new_fa] : new_by_id) {
    auto it = old_by_id.find(id);
    if (it == old_by_id.end()) continue;
    diff.frames.push_back(diff_frame(*it->second, *new_fa, opts));
  }

  for (const auto& fd : diff.frames) {
    diff.summary.unchanged += fd.unchanged;
    for (const auto& c : fd.changes) {
      switch (c.kind) {
        case ChangeKind::localization: ++diff.summary.localization; break;
        case ChangeKind::classification: ++diff.summary.classification; break;
        case ChangeKind::added: ++diff.summary.added; break;
        case ChangeKind::removed: ++diff.summary.removed; break;
        case ChangeKind::alignment: ++diff.summary.alignment; break;
      }
    }
  }
  return diff;
}

namespace {

nlohmann::ordered_json object_json(const GtObject& obj) {
  return {{"label", obj.label.text},
          {"box", {{"x", obj.box.x}, {"y", obj.box.y}, {"w", obj.box.w}, {"h", obj.box.h}}},
          {"occlusion", to_string(obj.occlusion)},
          {"ignore", obj.ignore}};
}

}  // namespace

std::string diff_json(const AnnotationDiff& diff) {
  nlohmann::ordered_json j;
  j["summary"] = {{"unchanged", diff.summary.unchanged},
                  {"localization", diff.summary.localization},
                  {"classification", diff.summary.classification},
                  {"added", diff.summary.added},
                  {"removed", diff.summary.removed},
                  {"alignment", diff.summary.alignment}};
  j["frames_missing_in_new"] = diff.frames_missing_in_new;
  j["frames_missing_in_old"] = diff.frames_missing_in_old;
  j["frames"] = nlohmann::ordered_json::array();
  for (const auto& fd : diff.frames) {
    if (fd.changes.empty()) continue;
    nlohmann::ordered_json jf;
    jf["frame_id"] = fd.frame_id;
    jf["unchanged"] = fd.unchanged;
    jf["changes"] = nlohmann::ordered_json::array();
    for (const auto& c : fd.changes) {
      nlohmann::ordered_json jc;
      jc["kind"] = to_string(c.kind);
      if (c.kind == ChangeKind::alignment) jc["base"] = to_string(c.alignment_base);
      jc["old_indices"] = c.old_indices;
      nlohmann::ordered_json old_objs = nlohmann::ordered_json::array();
      for (const auto& o : c.old_objects) old_objs.push_back(object_json(o));
      jc["old_objects"] = std::move(old_objs);
      if (c.new_index) jc["new_index"] = *c.new_index;
      if (c.new_object) jc["new_object"] = object_json(*c.new_object);
      jf["changes"].push_back(std::move(jc));
    }
    j["frames"].push_back(std::move(jf));
  }
  return j.dump(2) + "\n";
}

std::string diff_summary_text(const AnnotationDiff& diff) {
  const auto& s = diff.summary;
  std::string out;
  out += "unchanged:      " + std::to_string(s.unchanged) + "\n";
  out += "localization:   " + std::to_string(s.localization) + "\n";
  out += "classification: " + std::to_string(s.classification) + "\n";
  out += "added:          " + std::to_string(s.added) + "\n";
  out += "removed:        " + std::to_string(s.removed) + "\n";
  out += "alignment:      " + std::to_string(s.alignment) + "\n";
  if (!diff.frames_missing_in_new.empty())
    out += "frames missing in new: " + std::to_string(diff.frames_missing_in_new.size()) + "\n";
  if (!diff.frames_missing_in_old.empty())
    out += "frames missing in old: " + std::to_string(diff.frames_missing_in_old.size()) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Exclusion
// ---------------------------------------------------------------------------

ErrorCategory category_from_name(std::string_view name) {
  if (name == "localization") return ErrorCategory::localization;
  if (name == "classification") return ErrorCategory::classification;
  if (name == "alignment") return ErrorCategory::alignment;
  throw InputError("unknown error category '" + std::string(name) +
                   "' (expected localization|classification|alignment)");
}

const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::localization: return "localization";
    case ErrorCategory::classification: return "classification";
    case ErrorCategory::alignment: return "alignment";
  }
  return "localization";
}

std::vector<FrameAnnotations> apply_exclusion(std::span<const FrameAnnotations> full_sanitized,
                                              std::span<const FrameAnnotations> original,
                                              ErrorCategory category, const DiffOptions& opts) {
  const AnnotationDiff diff = diff_annotations(original, full_sanitized, opts);
  if (!diff.frames_missing_in_new.empty() || !diff.frames_missing_in_old.empty())
    throw InputError("apply_exclusion: the two sets cover different frames");

  auto reverts = [category](const Change& c) {
    switch (category) {
      case ErrorCategory::localization:
        return c.kind == ChangeKind::localization;
      case ErrorCategory::classification:
        // Misclassification includes missing and spurious annotations.
        return c.kind == ChangeKind::classification || c.kind == ChangeKind::added ||
               c.kind == ChangeKind::removed;
      case ErrorCategory::alignment:
        return c.kind == ChangeKind::alignment;
    }
    return false;
  };

  std::map<std::string_view, const FrameDiff*> diff_by_id;
  for (const auto& fd : diff.frames) diff_by_id.emplace(fd.frame_id, &fd);

  std::vector<FrameAnnotations> out;
  out.reserve(full_sanitized.size());
  for (const auto& fa : full_sanitized) {
    const FrameDiff& fd = *diff_by_id.at(fa.frame_id);

    // Each sanitized object owns a slot; reverts rewrite or clear it.
    std::vector<std::vector<GtObject>> slots(fa.objects.size());
    for (std::size_t i = 0; i < fa.objects.size(); ++i) slots[i] = {fa.objects[i]};
    std::vector<std::pair<std::size_t, GtObject>> reinserts;  // (original index, object)

    for (const auto& c : fd.changes) {
      if (!reverts(c)) continue;
      switch (c.kind) {
        case ChangeKind::localization:
        case ChangeKind::classification:
        case ChangeKind::alignment:
          slots[*c.new_index] = c.old_objects;
          break;
        case ChangeKind::added:
          slots[*c.new_index].clear();
          break;
        case ChangeKind::removed:
          reinserts.emplace_back(c.old_indices[0], c.old_objects[0]);
          break;
      }
    }

    FrameAnnotations rebuilt = fa;
    rebuilt.objects.clear();
    for (const auto& slot : slots)
      rebuilt.objects.insert(rebuilt.objects.end(), slot.begin(), slot.end());
    std::sort(reinserts.begin(), reinserts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [oi, obj] : reinserts) {
      const auto at = std::min(oi, rebuilt.objects.size());
      rebuilt.objects.insert(rebuilt.objects.begin() + static_cast<std::ptrdiff_t>(at), obj);
    }
    out.push_back(std::move(rebuilt));
  }
  return out;
}

}  // namespace msdet

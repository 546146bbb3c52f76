#include "msdet/losses.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "msdet/errors.hpp"

namespace msdet {

namespace {

constexpr double kProbClamp = 1e-12;

double safe_log(double p) {
  return std::log(std::clamp(p, kProbClamp, 1.0 - kProbClamp));
}

}  // namespace

double cls_loss(std::span<const std::array<double, 2>> probs,
                std::span<const SampleLabel> labels) {
  if (probs.size() != labels.size()) throw InputError("cls_loss: length mismatch");
  double sum = 0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (labels[i] == SampleLabel::ignore) continue;
    const auto& p = probs[i];
    if (std::abs(p[0] + p[1] - 1.0) > 1e-6)
      throw InputError("cls_loss: probability pair " + std::to_string(i) + " not normalized");
    sum += -safe_log(labels[i] == SampleLabel::pos ? p[1] : p[0]);
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double bbox_loss(std::span<const BoxDelta> pred, std::span<const BoxDelta> gt,
                 std::span<const SampleLabel> labels) {
  if (pred.size() != gt.size() || pred.size() != labels.size())
    throw InputError("bbox_loss: length mismatch");
  double sum = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (labels[i] != SampleLabel::pos) continue;
    sum += smooth_l1(pred[i].tx - gt[i].tx) + smooth_l1(pred[i].ty - gt[i].ty) +
           smooth_l1(pred[i].tw - gt[i].tw) + smooth_l1(pred[i].th - gt[i].th);
    ++positives;
  }
  return positives == 0 ? 0.0 : sum / static_cast<double>(positives);
}

double seg_loss(const FloatGrid& pred, const SegMask& gt, const SegLossOptions& opts) {
  if (pred.width != gt.width || pred.height != gt.height)
    throw InputError("seg_loss: prediction and mask dimensions differ");
  double sum = 0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    const double p = pred.values[i];
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("seg_loss: probability outside [0,1]");
    switch (gt.labels[i]) {
      case CellLabel::foreground: sum += -safe_log(p); ++counted; break;
      case CellLabel::background: sum += -safe_log(1.0 - p); ++counted; break;
      case CellLabel::ignore: break;
    }
  }
  const std::size_t denom = opts.normalize_by_counted ? counted : gt.labels.size();
  return denom == 0 ? 0.0 : sum / static_cast<double>(denom);
}

namespace {

LossReport weighted_report(std::vector<std::string> names, std::vector<double> components,
                           std::span<const double> weights) {
  LossReport report;
  report.names = std::move(names);
  report.components = std::move(components);
  if (weights.empty()) {
    report.weights.assign(report.components.size(), defaults::loss_lambda);
  } else {
    if (weights.size() != report.components.size())
      throw InputError("loss weights: expected " + std::to_string(report.components.size()) +
                       " values, got " + std::to_string(weights.size()));
    report.weights.assign(weights.begin(), weights.end());
  }
  for (std::size_t i = 0; i < report.components.size(); ++i) {
    if (!(report.components[i] >= 0) || !std::isfinite(report.components[i]))
      throw InputError("loss component " + report.names[i] + " must be finite and >= 0");
    report.total += report.weights[i] * report.components[i];
  }
  return report;
}

}  // namespace

LossReport mpn_loss(const MpnComponents& c, std::span<const double> weights) {
  return weighted_report(
      {"cls_color", "cls_thermal", "cls_merged", "bbox_color", "bbox_thermal", "bbox_merged",
       "seg_color", "seg_thermal", "seg_merged"},
      {c.cls_color, c.cls_thermal, c.cls_merged, c.bbox_color, c.bbox_thermal, c.bbox_merged,
       c.seg_color, c.seg_thermal, c.seg_merged},
      weights);
}

LossReport mcn_loss(const McnComponents& c, std::span<const double> weights) {
  return weighted_report(
      {"cls_color", "cls_thermal", "cls_merged", "seg_color", "seg_thermal", "seg_merged"},
      {c.cls_color, c.cls_thermal, c.cls_merged, c.seg_color, c.seg_thermal, c.seg_merged},
      weights);
}

// ---------------------------------------------------------------------------
// JSON bundle
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bundle_error(const std::string& path, const std::string& what) {
  throw InputError("loss bundle: " + path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) bundle_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bundle_error(path + "." + key, "missing component");
  return *it;
}

std::vector<SampleLabel> parse_labels(const json& j, const std::string& path) {
  if (!j.is_array()) bundle_error(path, "expected an array");
  std::vector<SampleLabel> labels;
  for (const auto& v : j) {
    if (v == "pos") labels.push_back(SampleLabel::pos);
    else if (v == "neg") labels.push_back(SampleLabel::neg);
    else if (v == "ignore") labels.push_back(SampleLabel::ignore);
    else bundle_error(path, "labels must be pos|neg|ignore");
  }
  return labels;
}

double stream_cls(const json& j, const std::string& path) {
  std::vector<std::array<double, 2>> probs;
  const auto& jp = require(j, "probs", path);
  if (!jp.is_array()) bundle_error(path + ".probs", "expected an array");
  for (const auto& pair : jp) {
    if (!pair.is_array() || pair.size() != 2) bundle_error(path + ".probs", "expected [p0,p1]");
    probs.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return cls_loss(probs, parse_labels(require(j, "labels", path), path + ".labels"));
}

std::vector<BoxDelta> parse_deltas(const json& j, const std::string& path) {
  if (!j.is_array()) bundle_error(path, "expected an array");
  std::vector<BoxDelta> deltas;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 4) bundle_error(path, "expected [tx,ty,tw,th]");
    deltas.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                      row[3].get<double>()});
  }
  return deltas;
}

double stream_bbox(const json& j, const std::string& path) {
  return bbox_loss(parse_deltas(require(j, "pred", path), path + ".pred"),
                   parse_deltas(require(j, "gt", path), path + ".gt"),
                   parse_labels(require(j, "labels", path), path + ".labels"));
}

double stream_seg(const json& j, const std::string& path) {
  const auto& jp = require(j, "pred", path);
  const auto& jg = require(j, "gt", path);
  if (!jp.is_array() || jp.empty()) bundle_error(path + ".pred", "expected a non-empty grid");
  if (!jg.is_array() || jg.size() != jp.size())
    bundle_error(path + ".gt", "grid dimensions differ from pred");

  FloatGrid pred;
  SegMask gt;
  pred.height = gt.height = static_cast<int>(jp.size());
  pred.width = gt.width = static_cast<int>(jp[0].size());
  for (std::size_t r = 0; r < jp.size(); ++r) {
    const auto& prow = jp[r];
    const auto& grow = jg[r];
    if (!prow.is_array() || static_cast<int>(prow.size()) != pred.width)
      bundle_error(path + ".pred", "ragged grid");
    if (!grow.is_array() || grow.size() != prow.size())
      bundle_error(path + ".gt", "grid dimensions differ from pred");
    for (std::size_t c = 0; c < prow.size(); ++c) {
      pred.values.push_back(prow[c].get<double>());
      const int code = grow[c].get<int>();
      if (code < 0 || code > 2) bundle_error(path + ".gt", "cell codes are 0=bg, 1=fg, 2=ignore");
      gt.labels.push_back(code == 0 ? CellLabel::background
                          : code == 1 ? CellLabel::foreground
                                      : CellLabel::ignore);
    }
  }
  SegLossOptions opts;
  if (auto it = j.find("normalize_by_counted"); it != j.end()) {
    if (!it->is_boolean()) bundle_error(path + ".normalize_by_counted", "expected a boolean");
    opts.normalize_by_counted = it->get<bool>();
  }
  return seg_loss(pred, gt, opts);
}

std::vector<double> parse_weights(const json& section, const std::string& path) {
  std::vector<double> weights;
  if (auto it = section.find("weights"); it != section.end()) {
    if (!it->is_array()) bundle_error(path + ".weights", "expected an array");
    for (const auto& v : *it) weights.push_back(v.get<double>());
  }
  return weights;
}

}  // namespace

LossBundleResult evaluate_loss_bundle(std::string_view json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) throw InputError("loss bundle: not valid JSON");

  LossBundleResult result;
  if (auto it = root.find("mpn"); it != root.end()) {
    const std::string path = "$.mpn";
    const auto& streams = require(*it, "streams", path);
    MpnComponents c;
    auto eval_stream = [&](const char* name, double& cls, double& bbox, double& seg) {
      const std::string spath = path + ".streams." + name;
      const auto& s = require(streams, name, path + ".streams");
      cls = stream_cls(require(s, "cls", spath), spath + ".cls");
      bbox = stream_bbox(require(s, "bbox", spath), spath + ".bbox");
      seg = stream_seg(require(s, "seg", spath), spath + ".seg");
    };
    eval_stream("color", c.cls_color, c.bbox_color, c.seg_color);
    eval_stream("thermal", c.cls_thermal, c.bbox_thermal, c.seg_thermal);
    eval_stream("merged", c.cls_merged, c.bbox_merged, c.seg_merged);
    result.mpn = mpn_loss(c, parse_weights(*it, path));
  }
  if (auto it = root.find("mcn"); it != root.end()) {
    const std::string path = "$.mcn";
    const auto& streams = require(*it, "streams", path);
    McnComponents c;
    auto eval_stream = [&](const char* name, double& cls, double& seg) {
      const std::string spath = path + ".streams." + name;
      const auto& s = require(streams, name, path + ".streams");
      cls = stream_cls(require(s, "cls", spath), spath + ".cls");
      seg = stream_seg(require(s, "seg", spath), spath + ".seg");
    };
    eval_stream("color", c.cls_color, c.seg_color);
    eval_stream("thermal", c.cls_thermal, c.seg_thermal);
    eval_stream("merged", c.cls_merged, c.seg_merged);
    result.mcn = mcn_loss(c, parse_weights(*it, path));
  }
  if (!result.mpn && !result.mcn)
    throw InputError("loss bundle: expected an 'mpn' or 'mcn' section");
  return result;
}

std::string loss_report_json(const LossReport& report) {
  ordered_json j;
  ordered_json comps;
  for (std::size_t i = 0; i < report.names.size(); ++i) comps[report.names[i]] = report.components[i];
  j["components"] = std::move(comps);
  j["weights"] = report.weights;
  j["total"] = report.total;
  return j.dump(2) + "\n";
}

}  // namespace msdet

#include "msdet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "msdet/errors.hpp"
#include "msdet/io_util.hpp"
#include "msdet/parallel.hpp"

namespace msdet {

FrameMatch match_frame(std::span<const Detection> dets, const FrameAnnotations& frame,
                       const EvalConfig& cfg) {
  if (!(cfg.match_iou > 0.0 && cfg.match_iou < 1.0))
    throw InputError("match_frame: match_iou must be in (0,1)");
  FrameMatch result;
  result.det_outcomes.assign(dets.size(), DetOutcome::fp);
  result.det_gt.assign(dets.size(), -1);
  result.gt_outcomes.resize(frame.objects.size());

  std::vector<bool> gt_eval(frame.objects.size());
  for (std::size_t g = 0; g < frame.objects.size(); ++g) {
    gt_eval[g] = reasonable_filter(frame.objects[g], frame, cfg.reasonable) == EvalClass::evaluate;
    result.gt_outcomes[g] = gt_eval[g] ? GtOutcome::missed : GtOutcome::ignored;
  }

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });

  std::vector<bool> gt_taken(frame.objects.size(), false);
  for (const std::size_t d : order) {
    double best = 0;
    int best_gt = -1;
    for (std::size_t g = 0; g < frame.objects.size(); ++g) {
      if (!gt_eval[g] || gt_taken[g]) continue;
      const double overlap = iou(dets[d].box, frame.objects[g].box);
      if (overlap >= cfg.match_iou && overlap > best) {
        best = overlap;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      gt_taken[best_gt] = true;
      result.det_outcomes[d] = DetOutcome::tp;
      result.det_gt[d] = best_gt;
      result.gt_outcomes[best_gt] = GtOutcome::matched;
      continue;
    }
    bool absorbed = false;
    for (std::size_t g = 0; g < frame.objects.size() && !absorbed; ++g)
      if (!gt_eval[g] && iou(dets[d].box, frame.objects[g].box) >= cfg.match_iou) absorbed = true;
    result.det_outcomes[d] = absorbed ? DetOutcome::ignored : DetOutcome::fp;
  }
  return result;
}

EvalCurve mr_fppi_curve(std::span<const FrameAnnotations> frames,
                        std::span<const Detection> dets, const EvalConfig& cfg) {
  if (frames.empty()) throw InputError("evaluation: no frames");

  std::map<std::string_view, std::size_t> frame_index;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!frame_index.emplace(frames[i].frame_id, i).second)
      throw InputError("evaluation: duplicate frame_id '" + frames[i].frame_id + "'");
  }

  // Detections grouped per frame, file order preserved within each frame.
  std::vector<std::vector<Detection>> per_frame(frames.size());
  for (const auto& det : dets) {
    auto it = frame_index.find(det.frame_id);
    if (it == frame_index.end())
      throw InputError("evaluation: detection references unknown frame '" + det.frame_id + "'");
    per_frame[it->second].push_back(det);
  }

  std::size_t total_eval_gts = 0;
  std::vector<FrameMatch> matches(frames.size());
  parallel_for(frames.size(), [&](std::size_t i) {
    matches[i] = match_frame(per_frame[i], frames[i], cfg);
  });
  for (std::size_t i = 0; i < frames.size(); ++i)
    for (const auto outcome : matches[i].gt_outcomes)
      if (outcome != GtOutcome::ignored) ++total_eval_gts;
  if (total_eval_gts == 0)
    throw InputError("evaluation: no evaluate-class ground truth in the frame set");

  EvalCurve curve;
  curve.frame_count = frames.size();

  struct Scored {
    double score;
    DetOutcome outcome;
  };
  std::vector<Scored> scored;
  for (std::size_t i = 0; i < frames.size(); ++i)
    for (std::size_t d = 0; d < per_frame[i].size(); ++d)
      scored.push_back({per_frame[i][d].score, matches[i].det_outcomes[d]});

  if (scored.empty()) {
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
    return curve;
  }

  std::sort(scored.begin(), scored.end(),
            [](const Scored& a, const Scored& b) { return a.score > b.score; });

  const auto frame_count = static_cast<double>(frames.size());
  const auto eval_gts = static_cast<double>(total_eval_gts);
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].outcome == DetOutcome::tp) ++tp;
    else if (scored[i].outcome == DetOutcome::fp) ++fp;
    // Emit one point per distinct score, once every equal-scored detection
    // is folded in.
    if (i + 1 < scored.size() && scored[i + 1].score == scored[i].score) continue;
    curve.points.push_back({scored[i].score, static_cast<double>(fp) / frame_count,
                            (eval_gts - static_cast<double>(tp)) / eval_gts});
  }
  return curve;
}

double log_average_mr(const EvalCurve& curve, const EvalConfig& cfg) {
  if (curve.points.empty()) throw InputError("log_average_mr: empty curve");
  if (!(cfg.fppi_lo < cfg.fppi_hi) || !(cfg.fppi_lo > 0))
    throw InputError("log_average_mr: invalid FPPI range");
  if (cfg.n_points < 2) throw InputError("log_average_mr: need at least 2 reference points");

  const double lo = std::log10(cfg.fppi_lo);
  const double hi = std::log10(cfg.fppi_hi);
  double log_sum = 0;
  for (int k = 0; k < cfg.n_points; ++k) {
    const double ref = std::pow(10.0, lo + (hi - lo) * k / (cfg.n_points - 1));
    // Largest achieved FPPI <= ref; fppi is non-decreasing along the sweep,
    // so the last admissible point carries the lowest reachable miss rate.
    double miss = 1.0;
    for (const auto& p : curve.points) {
      if (p.fppi <= ref) miss = p.miss_rate;
      else break;
    }
    log_sum += std::log(std::max(miss, defaults::miss_rate_floor));
  }
  return std::exp(log_sum / cfg.n_points);
}

Subset subset_from_name(std::string_view name) {
  if (name == "all") return Subset::all;
  if (name == "day") return Subset::day;
  if (name == "night") return Subset::night;
  throw InputError("unknown subset '" + std::string(name) + "' (expected all|day|night)");
}

const char* to_string(Subset subset) {
  switch (subset) {
    case Subset::all: return "all";
    case Subset::day: return "day";
    case Subset::night: return "night";
  }
  return "all";
}

SubsetResult subset_eval(std::span<const FrameAnnotations> frames,
                         std::span<const Detection> dets, Subset subset, const EvalConfig& cfg) {
  std::vector<FrameAnnotations> selected;
  for (const auto& f : frames) {
    if (subset == Subset::all || (subset == Subset::day && f.time_of_day == TimeOfDay::day) ||
        (subset == Subset::night && f.time_of_day == TimeOfDay::night))
      selected.push_back(f);
  }
  if (selected.empty())
    throw InputError(std::string("subset '") + to_string(subset) + "' selects no frames");

  std::map<std::string_view, bool> in_subset;
  for (const auto& f : selected) in_subset.emplace(f.frame_id, true);
  std::vector<Detection> kept;
  for (const auto& d : dets)
    if (in_subset.contains(d.frame_id)) kept.push_back(d);

  SubsetResult result;
  result.curve = mr_fppi_curve(selected, kept, cfg);
  result.mr = log_average_mr(result.curve, cfg);
  return result;
}

std::string export_curve(const EvalCurve& curve) {
  std::string out = "threshold,fppi,miss_rate\n";
  for (const auto& p : curve.points) {
    out += format_double(p.threshold);
    out += ',';
    out += format_double(p.fppi);
    out += ',';
    out += format_double(p.miss_rate);
    out += '\n';
  }
  return out;
}

EvalCurve parse_curve(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "threshold,fppi,miss_rate")
    throw ParseError("expected header 'threshold,fppi,miss_rate'", 1);
  EvalCurve curve;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = split(lines[li], ',');
    if (fields.size() != 3) throw ParseError("expected 3 fields", li + 1);
    CurvePoint p{};
    if (!try_parse_double(fields[0], p.threshold) || !try_parse_double(fields[1], p.fppi) ||
        !try_parse_double(fields[2], p.miss_rate))
      throw ParseError("non-numeric curve field", li + 1);
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace msdet

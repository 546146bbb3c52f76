#include "msdet/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "msdet/errors.hpp"
#include "msdet/io_util.hpp"

namespace msdet {

StreamSet StreamSet::from_names(std::string_view csv) {
  StreamSet set{false, false, false, false};
  for (std::string_view name : split(csv, ',')) {
    if (name == "mpn") set.mpn = true;
    else if (name == "color") set.color = true;
    else if (name == "thermal") set.thermal = true;
    else if (name == "merged") set.merged = true;
    else if (!name.empty())
      throw InputError("unknown stream '" + std::string(name) +
                       "' (expected mpn, color, thermal, merged)");
  }
  if (!set.mpn && !set.color && !set.thermal && !set.merged)
    throw InputError("at least one stream must be selected");
  return set;
}

namespace {

void accumulate(const LogitPair& p, double& s0, double& s1, int& streams) {
  if (!(std::isfinite(p.c0) && std::isfinite(p.c1)))
    throw InputError("stream logits must be finite");
  s0 += p.c0;
  s1 += p.c1;
  ++streams;
}

}  // namespace

double fuse_scores(const StreamLogits& sl, const StreamSet& enabled) {
  double s0 = 0, s1 = 0;
  int streams = 0;
  if (enabled.mpn) accumulate(sl.mpn, s0, s1, streams);
  if (enabled.color && sl.color) accumulate(*sl.color, s0, s1, streams);
  if (enabled.thermal && sl.thermal) accumulate(*sl.thermal, s0, s1, streams);
  if (enabled.merged && sl.merged) accumulate(*sl.merged, s0, s1, streams);
  if (streams == 0) throw InputError("no stream logits to fuse");

  const double m = std::max(s0, s1);
  const double e0 = std::exp(s0 - m);
  const double e1 = std::exp(s1 - m);
  return e1 / (e0 + e1);
}

double fuse_scores(const StreamLogits& sl) { return fuse_scores(sl, StreamSet{}); }

std::vector<Detection> filter_proposals(std::span<const Detection> dets, double threshold) {
  std::vector<Detection> out;
  for (const auto& d : dets)
    if (d.score > threshold) out.push_back(d);
  return out;
}

namespace {

/// Indices sorted by descending score, equal scores keeping input order.
std::vector<std::size_t> score_order(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  return order;
}

}  // namespace

std::vector<Detection> top_k(std::span<const Detection> dets, std::size_t k) {
  if (k < 1) throw InputError("top_k: k must be >= 1");
  const auto order = score_order(dets);
  std::vector<Detection> out;
  out.reserve(std::min(k, dets.size()));
  for (std::size_t r = 0; r < order.size() && r < k; ++r) out.push_back(dets[order[r]]);
  return out;
}

std::vector<Detection> nms(std::span<const Detection> dets, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw InputError("nms: iou threshold must be in (0,1), got " + format_double(iou_threshold));
  const auto order = score_order(dets);
  std::vector<Detection> kept;
  for (const std::size_t idx : order) {
    bool suppressed = false;
    for (const auto& k : kept) {
      if (iou(dets[idx].box, k.box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(dets[idx]);
  }
  return kept;
}

}  // namespace msdet

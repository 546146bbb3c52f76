#include "msdet/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "msdet/errors.hpp"
#include "msdet/rng.hpp"

namespace msdet {

EvalClass reasonable_filter(const GtObject& obj, const FrameAnnotations& frame,
                            const ReasonableConfig& cfg) {
  if (obj.label.kind != LabelKind::person) return EvalClass::ignore;
  if (effective_ignore(obj)) return EvalClass::ignore;
  if (obj.box.h < cfg.min_height) return EvalClass::ignore;
  if (!cfg.allowed_occlusion.contains(obj.occlusion)) return EvalClass::ignore;
  const double m = cfg.boundary_margin;
  if (obj.box.x < -m || obj.box.y < -m || obj.box.right() > frame.image_size.width + m ||
      obj.box.bottom() > frame.image_size.height + m)
    return EvalClass::ignore;
  return EvalClass::evaluate;
}

bool is_truncated(const Box& box, const ImageSize& size, double clip_fraction) {
  const auto visible = clip(box, size.width, size.height);
  if (!visible) return true;
  return (area(box) - area(*visible)) / area(box) > clip_fraction;
}

namespace {

std::string video_key(const std::string& frame_id) {
  const auto pos = frame_id.find_last_of('/');
  return pos == std::string::npos ? std::string() : frame_id.substr(0, pos);
}

}  // namespace

std::vector<FrameAnnotations> filter_training_frames(std::span<const FrameAnnotations> frames,
                                                     const FilterConfig& cfg) {
  if (cfg.frame_step < 1) throw InputError("frame_step must be >= 1");
  if (!(cfg.min_height > 0)) throw InputError("min_height must be > 0");

  std::vector<FrameAnnotations> kept;
  std::string current_video;
  std::size_t pos_in_video = 0;
  bool first = true;
  for (const auto& fa : frames) {
    const std::string video = video_key(fa.frame_id);
    if (first || video != current_video) {
      current_video = video;
      pos_in_video = 0;
      first = false;
    }
    const std::size_t pos = pos_in_video++;
    if (pos % static_cast<std::size_t>(cfg.frame_step) != 0) continue;

    FrameAnnotations out = fa;
    std::size_t evaluable_persons = 0;
    for (auto& obj : out.objects) {
      if (!effective_ignore(obj)) {
        const bool small = obj.box.h < cfg.min_height;
        const bool occluded = cfg.exclude_occlusion.contains(obj.occlusion);
        const bool truncated = cfg.exclude_truncated &&
                               is_truncated(obj.box, out.image_size, cfg.truncation_clip_fraction);
        if (small || occluded || truncated) obj.ignore = true;
      }
      if (obj.label.kind == LabelKind::person && !effective_ignore(obj)) ++evaluable_persons;
    }
    if (evaluable_persons == 0) continue;
    kept.push_back(std::move(out));
  }
  return kept;
}

SegMask rasterize_masks(const FrameAnnotations& fa, double stride) {
  if (!(stride >= 1)) throw InputError("stride must be >= 1");
  SegMask mask;
  mask.stride = stride;
  mask.width = static_cast<int>(std::ceil(fa.image_size.width / stride));
  mask.height = static_cast<int>(std::ceil(fa.image_size.height / stride));
  mask.labels.assign(static_cast<std::size_t>(mask.width) * mask.height, CellLabel::background);

  auto is_foreground_label = [](LabelKind k) {
    return k == LabelKind::person || k == LabelKind::person_uncertain || k == LabelKind::people;
  };

  for (int cy = 0; cy < mask.height; ++cy) {
    for (int cx = 0; cx < mask.width; ++cx) {
      const double px = (cx + 0.5) * stride;
      const double py = (cy + 0.5) * stride;
      CellLabel label = CellLabel::background;
      for (const auto& obj : fa.objects) {
        if (!contains_point(obj.box, px, py)) continue;
        if (is_foreground_label(obj.label.kind)) {
          label = CellLabel::foreground;
          break;  // foreground precedence
        }
        if (obj.label.kind == LabelKind::person_ignore_aligned) label = CellLabel::ignore;
      }
      mask.labels[static_cast<std::size_t>(cy) * mask.width + cx] = label;
    }
  }
  return mask;
}

std::string write_pgm(const SegMask& mask) {
  std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) +
                    "\n255\n";
  out.reserve(out.size() + mask.labels.size());
  for (const CellLabel label : mask.labels) {
    switch (label) {
      case CellLabel::background: out += '\0'; break;
      case CellLabel::ignore: out += static_cast<char>(128); break;
      case CellLabel::foreground: out += static_cast<char>(255); break;
    }
  }
  return out;
}

std::vector<std::size_t> sample_minibatch(std::span<const SampleLabel> labels, std::size_t total,
                                          double pos_fraction, std::uint64_t seed) {
  if (total < 1) throw InputError("minibatch total must be >= 1");
  if (!(pos_fraction > 0.0 && pos_fraction < 1.0))
    throw InputError("pos_fraction must be in (0,1)");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == SampleLabel::pos) pos.push_back(i);
    else if (labels[i] == SampleLabel::neg) neg.push_back(i);
  }

  const auto pos_cap =
      static_cast<std::size_t>(std::llround(static_cast<double>(total) * pos_fraction));
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);

  std::vector<std::size_t> out;
  const std::size_t n_pos = std::min(pos_cap, pos.size());
  out.insert(out.end(), pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(n_pos));
  const std::size_t n_neg = std::min(total - n_pos, neg.size());
  out.insert(out.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(n_neg));
  return out;
}

}  // namespace msdet

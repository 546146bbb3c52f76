#include "msdet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "msdet/defaults.hpp"
#include "msdet/errors.hpp"
#include "msdet/rng.hpp"

namespace msdet {

namespace {

constexpr std::uint64_t kSaltGt = 1;
constexpr std::uint64_t kSaltDet = 2;
constexpr std::uint64_t kSaltLogits = 3;

void validate(const SynthConfig& cfg) {
  if (cfg.n_frames < 0) throw InputError("synth: n_frames must be >= 0");
  if (cfg.persons_min < 0 || cfg.persons_max < cfg.persons_min)
    throw InputError("synth: invalid persons-per-frame range");
  if (!(cfg.height_min > 0) || cfg.height_max < cfg.height_min)
    throw InputError("synth: invalid height range");
  if (!(cfg.day_fraction >= 0 && cfg.day_fraction <= 1))
    throw InputError("synth: day_fraction must be in [0,1]");
  for (double p : {cfg.prob_occlusion_partial, cfg.prob_occlusion_heavy,
                   cfg.prob_label_uncertain, cfg.prob_label_people,
                   cfg.prob_label_ignore_aligned, cfg.detector.recall})
    if (!(p >= 0 && p <= 1)) throw InputError("synth: probabilities must be in [0,1]");
  if (cfg.detector.fppi_target < 0) throw InputError("synth: fppi_target must be >= 0");
}

std::string frame_name(int index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "set00/V000/I%05d", index);
  return buf;
}

double clamp_score(double s) { return std::clamp(s, 1e-3, 1.0 - 1e-3); }

Box random_person_box(Rng& rng, const SynthConfig& cfg) {
  const double h = std::min(rng.uniform(cfg.height_min, cfg.height_max),
                            cfg.image_size.height);
  const double w = defaults::aspect_ratio * h;
  const double x = rng.uniform(0.0, std::max(cfg.image_size.width - w, 1e-6));
  const double y = rng.uniform(0.0, std::max(cfg.image_size.height - h, 1e-6));
  return Box(x, y, w, h);
}

}  // namespace

Dataset synth_dataset(const SynthConfig& cfg) {
  validate(cfg);
  Dataset ds;
  ds.frames.resize(static_cast<std::size_t>(cfg.n_frames));
  const int day_frames = static_cast<int>(std::llround(cfg.day_fraction * cfg.n_frames));
  for (int i = 0; i < cfg.n_frames; ++i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i), kSaltGt));
    FrameAnnotations fa;
    fa.frame_id = frame_name(i);
    fa.time_of_day = i < day_frames ? TimeOfDay::day : TimeOfDay::night;
    fa.image_size = cfg.image_size;

    const int count =
        cfg.persons_min + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(cfg.persons_max - cfg.persons_min + 1)));
    for (int p = 0; p < count; ++p) {
      GtObject obj{Label::of(LabelKind::person), random_person_box(rng, cfg)};

      double u = rng.uniform01();
      if (u < cfg.prob_label_ignore_aligned) {
        obj.label = Label::of(LabelKind::person_ignore_aligned);
        obj.ignore = true;
      } else if ((u -= cfg.prob_label_ignore_aligned) < cfg.prob_label_people) {
        obj.label = Label::of(LabelKind::people);
      } else if ((u -= cfg.prob_label_people) < cfg.prob_label_uncertain) {
        obj.label = Label::of(LabelKind::person_uncertain);
      }

      const double v = rng.uniform01();
      if (v < cfg.prob_occlusion_heavy) obj.occlusion = Occlusion::heavy;
      else if (v < cfg.prob_occlusion_heavy + cfg.prob_occlusion_partial)
        obj.occlusion = Occlusion::partial;

      fa.objects.push_back(std::move(obj));
    }
    ds.frames[static_cast<std::size_t>(i)] = std::move(fa);
  }
  return ds;
}

std::vector<Detection> synth_detector(std::span<const FrameAnnotations> frames,
                                      const SynthConfig& cfg) {
  validate(cfg);
  const auto& det = cfg.detector;
  std::vector<Detection> out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    Rng rng(derive_seed(cfg.seed, i, kSaltDet));
    const auto& fa = frames[i];
    std::size_t det_counter = 0;
    auto attach_logits = [&](Detection& d) {
      d.stream_logits =
          synth_logits(d.score, derive_seed(cfg.seed, i * 10007 + det_counter++, kSaltLogits));
    };

    for (const auto& obj : fa.objects) {
      if (reasonable_filter(obj, fa, cfg.reasonable) != EvalClass::evaluate) continue;
      if (rng.uniform01() >= det.recall) continue;
      const double dx = det.localization_jitter * rng.normal();
      const double dy = det.localization_jitter * rng.normal();
      Detection d{fa.frame_id, Box(obj.box.x + dx, obj.box.y + dy, obj.box.w, obj.box.h),
                  clamp_score(det.tp_score_base + det.score_noise * rng.normal()),
                  {}};
      attach_logits(d);
      out.push_back(std::move(d));
    }

    const double whole = std::floor(det.fppi_target);
    int fp_count = static_cast<int>(whole);
    if (rng.uniform01() < det.fppi_target - whole) ++fp_count;
    for (int f = 0; f < fp_count; ++f) {
      Detection d{fa.frame_id, random_person_box(rng, cfg),
                  clamp_score(det.fp_score_base + det.score_noise * rng.normal()),
                  {}};
      attach_logits(d);
      out.push_back(std::move(d));
    }
  }
  return out;
}

StreamLogits synth_logits(double score, std::uint64_t seed) {
  if (!(score > 0.0 && score < 1.0))
    throw InputError("synth_logits: score must be strictly inside (0,1)");
  Rng rng(seed);
  const double target = std::log(score / (1.0 - score));

  double diffs[4];
  double partial = 0;
  for (int s = 0; s < 3; ++s) {
    diffs[s] = rng.uniform(-1.5, 1.5);
    partial += diffs[s];
  }
  diffs[3] = target - partial;

  LogitPair pairs[4];
  for (int s = 0; s < 4; ++s) {
    pairs[s].c0 = rng.uniform(-2.0, 2.0);
    pairs[s].c1 = pairs[s].c0 + diffs[s];
  }
  return StreamLogits{pairs[0], pairs[1], pairs[2], pairs[3]};
}

}  // namespace msdet

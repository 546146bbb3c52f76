// Acceptance suite: one numbered criterion per function, each printing a
// single PASS/FAIL line. Run with no arguments for the full suite or with a
// criterion number. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msdet/anchors.hpp"
#include "msdet/annot_io.hpp"
#include "msdet/dataset.hpp"
#include "msdet/defaults.hpp"
#include "msdet/evaluation.hpp"
#include "msdet/fusion.hpp"
#include "msdet/harness.hpp"
#include "msdet/io_util.hpp"
#include "msdet/losses.hpp"
#include "msdet/rng.hpp"
#include "msdet/sanitize.hpp"
#include "oracles.hpp"

using namespace msdet;
namespace fs = std::filesystem;

namespace {

struct Checker {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- 1: IoU vs pixel-raster counting oracle -------------------------------

void criterion_iou_oracle(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20260809);
  int worst_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const double w1 = 1 + static_cast<double>(rng.below(200));
    const double h1 = 1 + static_cast<double>(rng.below(200));
    const double w2 = 1 + static_cast<double>(rng.below(200));
    const double h2 = 1 + static_cast<double>(rng.below(200));
    const Box a(static_cast<double>(rng.below(150)), static_cast<double>(rng.below(150)), w1, h1);
    const Box b(static_cast<double>(rng.below(150)), static_cast<double>(rng.below(150)), w2, h2);
    const double tolerance = 2.0 / std::min(area(a), area(b));
    if (std::abs(iou(a, b) - oracles::raster_iou(a, b)) > tolerance) ++worst_failures;
  }
  c.expect(worst_failures == 0,
           std::to_string(worst_failures) + " of 10000 pairs disagree with the raster oracle");
  const double seconds = elapsed_seconds(start);
  c.expect(seconds < 5.0, "runtime " + std::to_string(seconds) + "s exceeds 5s");
}

// --- 2: score-fusion algebraic identity ------------------------------------

void criterion_fusion_identity(Checker& c) {
  Rng rng(77001);
  double worst_identity = 0, worst_shift = 0;
  for (int i = 0; i < 10000; ++i) {
    StreamLogits sl{LogitPair{rng.uniform(-9, 9), rng.uniform(-9, 9)},
                    LogitPair{rng.uniform(-9, 9), rng.uniform(-9, 9)},
                    LogitPair{rng.uniform(-9, 9), rng.uniform(-9, 9)},
                    LogitPair{rng.uniform(-9, 9), rng.uniform(-9, 9)}};
    const double diff = (sl.mpn.c1 - sl.mpn.c0) + (sl.color->c1 - sl.color->c0) +
                        (sl.thermal->c1 - sl.thermal->c0) + (sl.merged->c1 - sl.merged->c0);
    const double expected = 1.0 / (1.0 + std::exp(-diff));
    const double fused = fuse_scores(sl);
    worst_identity = std::max(worst_identity, std::abs(fused - expected));

    auto shifted = sl;
    const double shift = rng.uniform(-20, 20);
    shifted.color->c0 += shift;
    shifted.color->c1 += shift;
    worst_shift = std::max(worst_shift, std::abs(fuse_scores(shifted) - fused));
  }
  c.expect(worst_identity <= 1e-12,
           "logistic identity error " + format_double(worst_identity) + " above 1e-12");
  c.expect(worst_shift <= 1e-12,
           "shift-invariance error " + format_double(worst_shift) + " above 1e-12");
}

// --- 3: quantile anchor scales ----------------------------------------------

void criterion_quantiles(Checker& c) {
  const std::vector<double> nine = {50, 60, 70, 80, 90, 100, 110, 120, 130};
  const auto exact = quantile_scales(nine, 8);
  c.expect(exact.size() == 9, "expected 9 scales");
  for (std::size_t i = 0; i < exact.size(); ++i)
    c.expect(exact[i] == nine[i], "scale " + std::to_string(i) + " not the order statistic");

  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> sample;
    const int n = 1 + static_cast<int>(rng.below(500));
    for (int i = 0; i < n; ++i) sample.push_back(rng.uniform(20, 250));
    const auto scales = quantile_scales(sample, 8);
    c.expect(scales.size() == 9, "expected 9 endpoints");
    const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
    c.expect(scales.front() == *lo && scales.back() == *hi,
             "endpoints must equal the sample extremes");
    for (std::size_t i = 1; i < scales.size(); ++i)
      c.expect(scales[i] >= scales[i - 1], "scales must be monotone");
  }
}

// --- 4: anchor labeling equivalence -----------------------------------------

void criterion_label_equivalence(Checker& c) {
  Rng rng(4444);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Box> anchors;
    const int n_anchors = 1 + static_cast<int>(rng.below(50));
    for (int i = 0; i < n_anchors; ++i)
      anchors.emplace_back(rng.uniform(0, 120), rng.uniform(0, 120), rng.uniform(4, 60),
                           rng.uniform(4, 60));
    std::vector<GtObject> gts;
    const int n_gts = static_cast<int>(rng.below(6));
    for (int g = 0; g < n_gts; ++g) {
      GtObject obj{Label::of(LabelKind::person),
                   Box(rng.uniform(0, 120), rng.uniform(0, 120), rng.uniform(4, 60),
                       rng.uniform(4, 60))};
      obj.ignore = rng.uniform01() < 0.3;
      gts.push_back(std::move(obj));
    }
    const auto expected = oracles::brute_label_anchors(anchors, gts, defaults::anchor_pos_iou);
    const auto actual = label_anchors(anchors, gts);
    for (std::size_t i = 0; i < actual.size(); ++i)
      if (!(actual[i] == expected[i])) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " anchor labels differ from brute force");
}

// --- 5: loss analytics -------------------------------------------------------

void criterion_loss_analytics(Checker& c) {
  const double ln2 = std::log(2.0);
  using Pair = std::array<double, 2>;

  const std::vector<Pair> perfect = {{0, 1}, {1, 0}};
  const std::vector<SampleLabel> labels = {SampleLabel::pos, SampleLabel::neg};
  c.expect(std::abs(cls_loss(perfect, labels)) <= 1e-9, "cls_loss(perfect) not 0");
  const std::vector<Pair> uniform(2, Pair{0.5, 0.5});
  c.expect(std::abs(cls_loss(uniform, labels) - ln2) <= 1e-9, "cls_loss(uniform) not ln 2");

  SegMask gt;
  gt.width = gt.height = 2;
  gt.labels = {CellLabel::background, CellLabel::foreground, CellLabel::foreground,
               CellLabel::background};
  const FloatGrid exact{2, 2, {0, 1, 1, 0}};
  c.expect(std::abs(seg_loss(exact, gt)) <= 1e-9, "seg_loss(perfect) not 0");
  const FloatGrid half{2, 2, {0.5, 0.5, 0.5, 0.5}};
  c.expect(std::abs(seg_loss(half, gt) - ln2) <= 1e-9, "seg_loss(uniform) not ln 2");

  const std::vector<SampleLabel> one_pos = {SampleLabel::pos};
  const std::vector<BoxDelta> zero = {{0, 0, 0, 0}};
  const std::vector<BoxDelta> half_off = {{0.5, 0, 0, 0}};
  const std::vector<BoxDelta> two_off = {{2.0, 0, 0, 0}};
  c.expect(std::abs(bbox_loss(half_off, zero, one_pos) - 0.125) <= 1e-12,
           "bbox_loss(0.5 residual) not 0.125");
  c.expect(std::abs(bbox_loss(two_off, zero, one_pos) - 1.5) <= 1e-12,
           "bbox_loss(2.0 residual) not 1.5");

  const MpnComponents seq{1, 2, 3, 4, 5, 6, 7, 8, 9};
  c.expect(mpn_loss(seq).total == 45.0, "nine-term joint loss of 1..9 not 45");
  const McnComponents unit{1, 1, 1, 1, 1, 1};
  c.expect(mcn_loss(unit).total == 6.0, "six-term joint loss of units not 6");
}

// --- 6: evaluation protocol --------------------------------------------------

void criterion_evaluation_protocol(Checker& c) {
  SynthConfig cfg;
  cfg.seed = 606;
  cfg.n_frames = 200;
  cfg.prob_label_ignore_aligned = 0.08;
  cfg.prob_occlusion_heavy = 0.08;

  {
    auto perfect = cfg;
    perfect.detector.recall = 1.0;
    perfect.detector.fppi_target = 0.0;
    perfect.detector.localization_jitter = 0.0;
    const auto ds = synth_dataset(perfect);
    const auto dets = synth_detector(ds.frames, perfect);
    const auto curve = mr_fppi_curve(ds.frames, dets);
    c.expect(log_average_mr(curve) <= 1e-9, "perfect detector MR above 1e-9");

    const auto empty = mr_fppi_curve(ds.frames, {});
    c.expect(log_average_mr(empty) == 1.0, "empty detector MR not 100%");
  }

  auto noisy = cfg;
  noisy.detector.recall = 0.75;
  noisy.detector.fppi_target = 0.7;
  noisy.detector.localization_jitter = 1.5;
  noisy.detector.score_noise = 0.12;
  const auto ds = synth_dataset(noisy);
  const auto dets = synth_detector(ds.frames, noisy);
  const auto curve = mr_fppi_curve(ds.frames, dets);
  const auto expected = oracles::brute_curve(ds.frames, dets);
  c.expect(curve.points.size() == expected.points.size(), "sweep point count differs from oracle");
  for (std::size_t i = 0; i < std::min(curve.points.size(), expected.points.size()); ++i) {
    if (!(curve.points[i] == expected.points[i])) {
      c.expect(false, "sweep point " + std::to_string(i) + " differs from the oracle");
      break;
    }
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    c.expect(curve.points[i].fppi >= curve.points[i - 1].fppi, "fppi not non-decreasing");
    c.expect(curve.points[i].miss_rate <= curve.points[i - 1].miss_rate,
             "miss rate not non-increasing");
  }
}

// --- 7: statistical end-to-end ----------------------------------------------

void criterion_statistical(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  SynthConfig cfg;
  cfg.seed = 70707;
  cfg.n_frames = 2000;
  cfg.detector.recall = 0.8;
  cfg.detector.fppi_target = 0.5;
  cfg.detector.localization_jitter = 1.0;
  cfg.detector.score_noise = 0.06;

  const auto ds = synth_dataset(cfg);
  const auto dets = synth_detector(ds.frames, cfg);
  const auto curve = mr_fppi_curve(ds.frames, dets);

  double miss_at_half = 1.0;
  for (const auto& p : curve.points) {
    if (p.fppi <= 0.5) miss_at_half = p.miss_rate;
    else break;
  }
  c.expect(std::abs(miss_at_half - 0.20) <= 0.02,
           "miss rate at FPPI 0.5 is " + format_double(miss_at_half) + ", outside 0.20 +/- 0.02");
  const double seconds = elapsed_seconds(start);
  c.expect(seconds < 30.0, "runtime " + std::to_string(seconds) + "s exceeds 30s");
}

// --- 8: constants fidelity ----------------------------------------------------

void criterion_constants(Checker& c) {
  const auto j = nlohmann::json::parse(defaults::config_snapshot());
  const auto expect_eq = [&](const nlohmann::json& actual, const nlohmann::json& want,
                             const char* name) {
    c.expect(actual == want, std::string(name) + " default drifted");
  };
  expect_eq(j["anchors"]["quantile_bins"], 8, "anchor quantile bins");
  expect_eq(j["anchors"]["scale_count"], 9, "anchor scale count");
  expect_eq(j["anchors"]["aspect_ratio"], 0.41, "aspect ratio");
  expect_eq(j["anchors"]["feature_stride"], 8.0, "feature stride");
  expect_eq(j["anchors"]["positive_iou"], 0.5, "anchor positive IoU");
  expect_eq(j["proposals"]["positive_iou"], 0.7, "proposal positive IoU");
  expect_eq(j["proposals"]["score_threshold"], 0.01, "proposal score threshold");
  expect_eq(j["proposals"]["pad_factor"], 0.2, "pad factor");
  expect_eq(j["proposals"]["top_k"], 50, "top K");
  expect_eq(j["minibatch"]["mpn"]["total"], 120, "proposal minibatch total");
  expect_eq(j["minibatch"]["mpn"]["pos_fraction"], 1.0 / 6.0, "proposal positive fraction");
  expect_eq(j["minibatch"]["mcn"]["total"], 60, "classification minibatch total");
  expect_eq(j["minibatch"]["mcn"]["pos_fraction"], 1.0 / 3.0, "classification positive fraction");
  expect_eq(j["evaluation"]["fppi_range"][0], 1e-2, "FPPI range low");
  expect_eq(j["evaluation"]["fppi_range"][1], 1e0, "FPPI range high");
  expect_eq(j["losses"]["lambda"], 1.0, "loss lambda");

  // Golden snapshot: any change to a default is a deliberate format event.
  const fs::path golden_path = fs::path(__FILE__).parent_path() / "config_snapshot.golden.json";
  std::ifstream in(golden_path);
  c.expect(static_cast<bool>(in), "missing golden file " + golden_path.string());
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    c.expect(ss.str() == defaults::config_snapshot(), "config snapshot differs from the golden");
  }
}

// --- 9: round trips -----------------------------------------------------------

void criterion_round_trips(Checker& c) {
  SynthConfig cfg;
  cfg.seed = 909;
  cfg.n_frames = 100;
  cfg.persons_min = 0;
  cfg.persons_max = 5;
  cfg.detector.recall = 0.9;
  cfg.detector.fppi_target = 1.0;
  auto ds = synth_dataset(cfg);
  ds.detections = synth_detector(ds.frames, cfg);

  for (const auto& fa : ds.frames) {
    const auto back = parse_bbgt(write_bbgt(fa), fa.frame_id);
    bool same = back.objects.size() == fa.objects.size();
    for (std::size_t i = 0; same && i < fa.objects.size(); ++i)
      same = back.objects[i].label == fa.objects[i].label &&
             back.objects[i].box == fa.objects[i].box &&
             back.objects[i].occlusion == fa.objects[i].occlusion &&
             back.objects[i].ignore == fa.objects[i].ignore;
    if (!same) {
      c.expect(false, "bbGt round trip altered frame " + fa.frame_id);
      break;
    }
  }

  const std::string canonical = write_canonical(ds);
  c.expect(write_canonical(read_canonical(canonical)) == canonical,
           "canonical JSON round trip not byte-identical");

  const auto table = frame_table_of(ds.frames);
  const std::string csv = write_detections(ds.detections, table);
  c.expect(write_detections(parse_detections(csv, table), table) == csv,
           "detection CSV round trip not byte-identical");

  // Sanitized-set construction exercising all three categories, then the
  // all-category revert composition.
  std::vector<FrameAnnotations> original(ds.frames.begin(), ds.frames.end());
  std::vector<FrameAnnotations> sanitized = original;
  Rng rng(99);
  for (auto& fa : sanitized) {
    for (std::size_t i = 0; i < fa.objects.size(); ++i) {
      auto& obj = fa.objects[i];
      const double u = rng.uniform01();
      if (u < 0.15) {
        obj.box = Box(obj.box.x + 2, obj.box.y + 3, obj.box.w * 1.1, obj.box.h * 0.95);
      } else if (u < 0.3) {
        obj.occlusion = obj.occlusion == Occlusion::none ? Occlusion::partial : Occlusion::none;
      } else if (u < 0.4 && i + 1 < fa.objects.size()) {
        // merge with the next object into a person?a union
        auto& next = fa.objects[i + 1];
        GtObject merged{Label::of(LabelKind::person_ignore_aligned),
                        union_box(obj.box, next.box)};
        merged.ignore = true;
        obj = merged;
        fa.objects.erase(fa.objects.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      } else if (u < 0.5) {
        obj.ignore = !obj.ignore;
      }
    }
    if (rng.uniform01() < 0.3 && !fa.objects.empty())
      fa.objects.erase(fa.objects.begin());  // removed in sanitized
    if (rng.uniform01() < 0.3) {
      GtObject extra{Label::of(LabelKind::person),
                     Box(rng.uniform(0, 500), rng.uniform(0, 300), 25, 60)};
      fa.objects.push_back(extra);  // added in sanitized
    }
  }

  auto composed = apply_exclusion(sanitized, original, ErrorCategory::localization);
  composed = apply_exclusion(composed, original, ErrorCategory::classification);
  composed = apply_exclusion(composed, original, ErrorCategory::alignment);
  bool equal = composed.size() == original.size();
  for (std::size_t f = 0; equal && f < original.size(); ++f) {
    equal = composed[f].frame_id == original[f].frame_id &&
            composed[f].objects.size() == original[f].objects.size();
    for (std::size_t i = 0; equal && i < original[f].objects.size(); ++i) {
      const auto& a = composed[f].objects[i];
      const auto& b = original[f].objects[i];
      equal = a.label == b.label && a.box == b.box && a.occlusion == b.occlusion &&
              a.ignore == b.ignore;
    }
  }
  c.expect(equal, "reverting all three categories did not restore the original set");
}

// --- 10: misalignment rule -----------------------------------------------------

void criterion_misalignment(Checker& c) {
  const auto disjoint = resolve_misalignment(Box(0, 0, 10, 20), Box(15, 0, 10, 20));
  c.expect(disjoint.misaligned, "disjoint pair must take the misaligned branch");
  c.expect(disjoint.box == Box(0, 0, 25, 20), "union box incorrect");

  const Box color(0, 0, 10, 10);
  const Box thermal(0, 0, 10, 5);
  c.expect(iou(color, thermal) == 0.5, "fixture must sit exactly at IoU 0.5");
  const auto at_threshold = resolve_misalignment(color, thermal);
  c.expect(!at_threshold.misaligned, "IoU exactly 0.5 must take the aligned branch");
  c.expect(at_threshold.box == color, "aligned branch must return the reference box");
}

// --- 11: CLI determinism --------------------------------------------------------

struct CliRunner {
  std::string binary;
  fs::path workspace;

  int run(const std::string& args, const std::string& tag) const {
    const fs::path log = workspace / ("stdout_" + tag + ".txt");
    const std::string command = binary + " " + args + " > " + log.string() + " 2>/dev/null";
    return WEXITSTATUS(std::system(command.c_str()));
  }
};

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  if (fs::is_regular_file(root)) {
    files["out"] = read_file(root);  // run-independent key
    return files;
  }
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file())
      files[fs::relative(entry.path(), root).generic_string()] = read_file(entry.path());
  return files;
}

void criterion_cli_determinism(Checker& c) {
  const char* cli = std::getenv("MSDET_CLI");
  if (!cli) {
    c.expect(false, "MSDET_CLI not set (run through ctest)");
    return;
  }
  const fs::path ws = fs::temp_directory_path() / "msdet_acceptance_cli";
  fs::remove_all(ws);
  fs::create_directories(ws);
  CliRunner runner{cli, ws};

  const fs::path data = ws / "data";
  c.expect(runner.run("synth --seed 5 --frames 30 --recall 0.85 --fppi 0.8 --jitter 1 --out " +
                          data.string(),
                      "synth_seed") == 0,
           "synth failed");

  // A deterministically shifted copy of the annotations serves as the
  // thermal tree for align and the revised set for diff.
  const auto frames = load_bbgt_tree(data / "annotations");
  std::vector<FrameAnnotations> shifted = frames;
  for (std::size_t i = 0; i < shifted.size(); ++i)
    for (auto& obj : shifted[i].objects)
      obj.box = Box(obj.box.x + (i % 2 == 0 ? 2.0 : 60.0), obj.box.y, obj.box.w, obj.box.h);
  save_bbgt_tree(ws / "thermal", shifted);

  const std::string gt_dir = (data / "annotations").string();
  const std::string dets_csv = (data / "detections.csv").string();
  const std::string frames_txt = (data / "frames.txt").string();
  const std::string dataset_json = (data / "dataset.json").string();

  struct Command {
    std::string name;
    std::string args;     // {out} replaced by the output path
    bool out_is_dir;
  };
  const std::vector<Command> commands = {
      {"synth", "synth --seed 9 --frames 12 --recall 0.7 --fppi 0.5 --out {out}", true},
      {"filter", "filter --gt " + dataset_json + " --step 2 --min-height 50 --out {out}", false},
      {"masks", "masks --gt " + dataset_json + " --stride 8 --out {out}", true},
      {"anchors", "anchors --gt " + dataset_json + " --bins 8 --out {out}", false},
      {"fuse",
       "fuse --dets " + dataset_json + " --streams mpn,color,thermal,merged --out {out}", false},
      {"eval",
       "eval --gt " + gt_dir + " --dets " + dets_csv + " --frames " + frames_txt +
           " --subset all --out-curve {out}",
       false},
      {"curve",
       "curve --gt " + dataset_json + " --dets " + dets_csv + " --subset all --out {out}", false},
      {"lint", "lint --gt " + gt_dir + " --out {out}", false},
      {"diff",
       "diff --old " + gt_dir + " --new " + (ws / "thermal").string() + " --out {out}", false},
      {"align",
       "align --color " + gt_dir + " --thermal " + (ws / "thermal").string() + " --out {out}",
       true},
  };

  for (const auto& cmd : commands) {
    std::vector<std::map<std::string, std::string>> outputs;
    int variant = 0;
    for (const std::string threads : {"1", "4"}) {
      for (int repeat = 0; repeat < 2; ++repeat) {
        const fs::path out =
            ws / (cmd.name + "_t" + threads + "_r" + std::to_string(repeat));
        std::string args = cmd.args;
        args.replace(args.find("{out}"), 5, out.string());
        const std::string tag = cmd.name + std::to_string(variant++);
        if (runner.run("--threads " + threads + " " + args, tag) != 0) {
          c.expect(false, cmd.name + " exited nonzero");
          break;
        }
        outputs.push_back(read_tree(out));
      }
    }
    if (outputs.size() != 4) continue;
    for (std::size_t i = 1; i < outputs.size(); ++i)
      if (outputs[i] != outputs[0]) {
        c.expect(false, cmd.name + " output differs across runs or thread counts");
        break;
      }
    c.expect(!outputs[0].empty(), cmd.name + " produced no output files");
  }
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Checker&)> fn;
};

const std::vector<Criterion> kCriteria = {
    {1, "IoU matches the pixel-raster oracle on 10k integer pairs", criterion_iou_oracle},
    {2, "score fusion equals the logistic of the logit-sum difference", criterion_fusion_identity},
    {3, "quantile scales reproduce order statistics and sample extremes", criterion_quantiles},
    {4, "anchor labeling matches the brute-force IoU-matrix labeler", criterion_label_equivalence},
    {5, "loss analytics hit their closed-form values", criterion_loss_analytics},
    {6, "evaluation sweep matches per-threshold re-evaluation", criterion_evaluation_protocol},
    {7, "synthetic detector statistics land on the configured rates", criterion_statistical},
    {8, "default configuration reproduces every published constant", criterion_constants},
    {9, "bbGt/canonical/CSV round trips and exclusion composition", criterion_round_trips},
    {10, "misalignment union rule and threshold branch", criterion_misalignment},
    {11, "CLI subcommands are byte-deterministic at any thread count", criterion_cli_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  if (argc > 1) selected = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (selected != 0 && criterion.id != selected) continue;
    Checker checker;
    try {
      criterion.fn(checker);
    } catch (const std::exception& e) {
      checker.failures.push_back(std::string("exception: ") + e.what());
    }
    if (checker.failures.empty()) {
      std::printf("criterion %2d: PASS  %s\n", criterion.id, criterion.title);
    } else {
      ++failures;
      std::printf("criterion %2d: FAIL  %s\n", criterion.id, criterion.title);
      for (const auto& why : checker.failures)
        std::printf("              - %s\n", why.c_str());
    }
  }
  return failures;
}

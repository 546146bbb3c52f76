#include <set>

#include <nlohmann/json.hpp>

#include "msdet/annot_io.hpp"
#include "msdet/defaults.hpp"
#include "msdet/errors.hpp"

namespace msdet {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw InputError("canonical: " + path + ": " + what);
}

const ordered_json& require(const ordered_json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "." + key, "missing field");
  return *it;
}

double require_number(const ordered_json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number()) schema_error(path + "." + key, "expected a number");
  return v.get<double>();
}

std::string require_string(const ordered_json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) schema_error(path + "." + key, "expected a string");
  return v.get<std::string>();
}

ordered_json box_json(const Box& b) {
  return ordered_json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}

Box parse_box(const ordered_json& j, const std::string& path) {
  const double x = require_number(j, "x", path);
  const double y = require_number(j, "y", path);
  const double w = require_number(j, "w", path);
  const double h = require_number(j, "h", path);
  try {
    return Box(x, y, w, h);
  } catch (const InputError& e) {
    schema_error(path, e.what());
  }
}

ordered_json logit_pair_json(const LogitPair& p) {
  return ordered_json::array({p.c0, p.c1});
}

LogitPair parse_logit_pair(const ordered_json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema_error(path, "expected [c0, c1]");
  return LogitPair{j[0].get<double>(), j[1].get<double>()};
}

Occlusion parse_occlusion(const std::string& s, const std::string& path) {
  if (s == "none") return Occlusion::none;
  if (s == "partial") return Occlusion::partial;
  if (s == "heavy") return Occlusion::heavy;
  schema_error(path, "unknown occlusion '" + s + "'");
}

TimeOfDay parse_time_of_day(const std::string& s, const std::string& path) {
  if (s == "day") return TimeOfDay::day;
  if (s == "night") return TimeOfDay::night;
  schema_error(path, "unknown time_of_day '" + s + "'");
}

}  // namespace

std::string write_canonical(const Dataset& ds) {
  ordered_json root;
  root["format"] = "msdet-dataset";
  root["version"] = defaults::dataset_format_version;

  ordered_json frames = ordered_json::array();
  for (const auto& fa : ds.frames) {
    ordered_json jf;
    jf["frame_id"] = fa.frame_id;
    jf["time_of_day"] = to_string(fa.time_of_day);
    jf["image_size"] = ordered_json{{"width", fa.image_size.width},
                                    {"height", fa.image_size.height}};
    ordered_json objs = ordered_json::array();
    for (const auto& obj : fa.objects) {
      ordered_json jo;
      jo["label"] = obj.label.text;
      jo["box"] = box_json(obj.box);
      jo["occlusion"] = to_string(obj.occlusion);
      jo["ignore"] = obj.ignore;
      objs.push_back(std::move(jo));
    }
    jf["objects"] = std::move(objs);
    frames.push_back(std::move(jf));
  }
  root["frames"] = std::move(frames);

  ordered_json dets = ordered_json::array();
  for (const auto& d : ds.detections) {
    ordered_json jd;
    jd["frame_id"] = d.frame_id;
    jd["box"] = box_json(d.box);
    jd["score"] = d.score;
    if (d.stream_logits) {
      ordered_json sl;
      sl["mpn"] = logit_pair_json(d.stream_logits->mpn);
      if (d.stream_logits->color) sl["color"] = logit_pair_json(*d.stream_logits->color);
      if (d.stream_logits->thermal) sl["thermal"] = logit_pair_json(*d.stream_logits->thermal);
      if (d.stream_logits->merged) sl["merged"] = logit_pair_json(*d.stream_logits->merged);
      jd["stream_logits"] = std::move(sl);
    }
    dets.push_back(std::move(jd));
  }
  root["detections"] = std::move(dets);

  return root.dump(2) + "\n";
}

Dataset read_canonical(std::string_view json_text) {
  ordered_json root = ordered_json::parse(json_text, nullptr, false);
  if (root.is_discarded()) throw InputError("canonical: not valid JSON");

  if (require_string(root, "format", "$") != "msdet-dataset")
    schema_error("$.format", "expected 'msdet-dataset'");
  const double version = require_number(root, "version", "$");
  if (version != defaults::dataset_format_version)
    schema_error("$.version", "unsupported version");

  Dataset ds;
  std::set<std::string> seen_ids;
  const auto& frames = require(root, "frames", "$");
  if (!frames.is_array()) schema_error("$.frames", "expected an array");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string path = "$.frames[" + std::to_string(i) + "]";
    const auto& jf = frames[i];
    FrameAnnotations fa;
    fa.frame_id = require_string(jf, "frame_id", path);
    if (!seen_ids.insert(fa.frame_id).second)
      schema_error(path + ".frame_id", "duplicate frame_id '" + fa.frame_id + "'");
    fa.time_of_day = parse_time_of_day(require_string(jf, "time_of_day", path),
                                       path + ".time_of_day");
    const auto& size = require(jf, "image_size", path);
    fa.image_size.width = require_number(size, "width", path + ".image_size");
    fa.image_size.height = require_number(size, "height", path + ".image_size");
    if (!(fa.image_size.width > 0 && fa.image_size.height > 0))
      schema_error(path + ".image_size", "dimensions must be positive");
    const auto& objs = require(jf, "objects", path);
    if (!objs.is_array()) schema_error(path + ".objects", "expected an array");
    for (std::size_t k = 0; k < objs.size(); ++k) {
      const std::string opath = path + ".objects[" + std::to_string(k) + "]";
      const auto& jo = objs[k];
      GtObject obj{Label::from_text(require_string(jo, "label", opath)),
                   parse_box(require(jo, "box", opath), opath + ".box")};
      obj.occlusion = parse_occlusion(require_string(jo, "occlusion", opath),
                                      opath + ".occlusion");
      const auto& ign = require(jo, "ignore", opath);
      if (!ign.is_boolean()) schema_error(opath + ".ignore", "expected a boolean");
      obj.ignore = ign.get<bool>();
      fa.objects.push_back(std::move(obj));
    }
    ds.frames.push_back(std::move(fa));
  }

  const auto& dets = require(root, "detections", "$");
  if (!dets.is_array()) schema_error("$.detections", "expected an array");
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const std::string path = "$.detections[" + std::to_string(i) + "]";
    const auto& jd = dets[i];
    Detection d{require_string(jd, "frame_id", path),
                parse_box(require(jd, "box", path), path + ".box"),
                require_number(jd, "score", path),
                {}};
    if (!(d.score >= 0.0 && d.score <= 1.0)) schema_error(path + ".score", "outside [0,1]");
    if (auto it = jd.find("stream_logits"); it != jd.end()) {
      const std::string spath = path + ".stream_logits";
      StreamLogits sl;
      sl.mpn = parse_logit_pair(require(*it, "mpn", spath), spath + ".mpn");
      if (auto s = it->find("color"); s != it->end())
        sl.color = parse_logit_pair(*s, spath + ".color");
      if (auto s = it->find("thermal"); s != it->end())
        sl.thermal = parse_logit_pair(*s, spath + ".thermal");
      if (auto s = it->find("merged"); s != it->end())
        sl.merged = parse_logit_pair(*s, spath + ".merged");
      d.stream_logits = std::move(sl);
    }
    ds.detections.push_back(std::move(d));
  }
  return ds;
}

}  // namespace msdet

#include "common.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include "msdet/errors.hpp"
#include "msdet/io_util.hpp"

namespace msdet::cli {

namespace fs = std::filesystem;

GtInput load_gt(const std::string& path, const std::string& frames_file) {
  GtInput gt;
  if (fs::is_directory(path)) {
    gt.frames = load_bbgt_tree(path);
  } else if (fs::is_regular_file(path)) {
    Dataset ds = read_canonical(read_file(path));
    gt.frames = std::move(ds.frames);
    gt.canonical_detections = std::move(ds.detections);
  } else {
    throw InputError("ground truth path does not exist: " + path);
  }

  if (!frames_file.empty()) {
    const auto entries = parse_frame_table(read_file(frames_file));
    std::map<std::string, FrameAnnotations*> by_id;
    for (auto& fa : gt.frames) by_id.emplace(fa.frame_id, &fa);
    std::vector<FrameAnnotations> ordered;
    ordered.reserve(entries.size());
    for (const auto& entry : entries) {
      auto it = by_id.find(entry.frame_id);
      if (it == by_id.end())
        throw InputError("frame table names unknown frame '" + entry.frame_id + "'");
      FrameAnnotations fa = std::move(*it->second);
      if (entry.time_of_day) fa.time_of_day = *entry.time_of_day;
      ordered.push_back(std::move(fa));
      by_id.erase(it);
    }
    gt.frames = std::move(ordered);
  }

  gt.frame_table = frame_table_of(gt.frames);
  return gt;
}

std::vector<Detection> load_detections(const std::string& path, const GtInput& gt) {
  if (!fs::is_regular_file(path)) throw InputError("detections path does not exist: " + path);
  if (fs::path(path).extension() == ".json") return read_canonical(read_file(path)).detections;
  return parse_detections(read_file(path), gt.frame_table);
}

void emit_summary(const GlobalOptions& global, const std::string& human,
                  const nlohmann::ordered_json& machine) {
  if (global.json) {
    std::fputs((machine.dump(2) + "\n").c_str(), stdout);
  } else {
    std::fputs(human.c_str(), stdout);
    if (!human.empty() && human.back() != '\n') std::fputc('\n', stdout);
  }
}

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool,
                                  std::string) const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : app->get_options({})) {
    if (!opt->get_configurable()) continue;
    const std::string name = opt->get_single_name();
    if (!opt->results().empty()) j[name] = opt->results();
    else if (default_also) j[name] = opt->get_default_str();
  }
  return j.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  nlohmann::json j = nlohmann::json::parse(input, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw CLI::FileError("config file must hold a JSON object");

  std::vector<CLI::ConfigItem> items;
  const std::function<void(const nlohmann::json&, std::vector<std::string>)> walk =
      [&](const nlohmann::json& obj, std::vector<std::string> parents) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
          if (it->is_object()) {
            auto nested = parents;
            nested.push_back(it.key());
            walk(*it, std::move(nested));
            continue;
          }
          CLI::ConfigItem item;
          item.parents = parents;
          item.name = it.key();
          const auto render = [](const nlohmann::json& v) {
            return v.is_string() ? v.get<std::string>() : v.dump();
          };
          if (it->is_array())
            for (const auto& v : *it) item.inputs.push_back(render(v));
          else
            item.inputs.push_back(render(*it));
          items.push_back(std::move(item));
        }
      };
  walk(j, {});
  return items;
}

}  // namespace msdet::cli

// msdet: multispectral pedestrian-detection toolkit.
//
// Exit codes: 0 success, 1 invalid input or arguments, 2 internal error.
// Diagnostics go to stderr; stdout carries a human summary, or canonical
// JSON under --json. Machine outputs go to --out paths, written atomically.

#include <cstdio>
#include <exception>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "common.hpp"
#include "msdet/defaults.hpp"
#include "msdet/errors.hpp"
#include "msdet/parallel.hpp"

namespace {

std::string version_string() {
  return std::string("msdet 1.0.0 (formats: dataset ") +
         std::to_string(msdet::defaults::dataset_format_version) + ", curve " +
         std::to_string(msdet::defaults::curve_format_version) + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multispectral pedestrian detection toolkit: annotations, anchors,\n"
               "score fusion, losses, miss-rate evaluation and annotation sanitization.",
               "msdet"};
  app.require_subcommand(0, 1);

  msdet::cli::GlobalOptions global;
  app.add_flag("--json", global.json, "Emit canonical-JSON summaries on stdout");
  // Applied as soon as the option parses so it precedes subcommand callbacks.
  app.add_option_function<unsigned>(
      "--threads", [](unsigned n) { msdet::set_max_threads(n); },
      "Cap worker threads (0 = all cores)");
  app.set_version_flag("--version", version_string());
  app.config_formatter(std::make_shared<msdet::cli::JsonConfig>());
  app.set_config("--config", "", "JSON config file supplying any option; flags override");

  msdet::cli::register_synth(app, global);
  msdet::cli::register_filter(app, global);
  msdet::cli::register_masks(app, global);
  msdet::cli::register_anchors(app, global);
  msdet::cli::register_eval(app, global);
  msdet::cli::register_curve(app, global);
  msdet::cli::register_fuse(app, global);
  msdet::cli::register_lint(app, global);
  msdet::cli::register_diff(app, global);
  msdet::cli::register_align(app, global);

  try {
    app.parse(argc, argv);
    if (app.get_subcommands().empty()) {
      std::fputs(app.help().c_str(), stdout);
      return 1;
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const msdet::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 0;
}

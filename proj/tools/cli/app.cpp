// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <cctype>
#include <map>

#include "common.hpp"
#include "plantsam/error.hpp"
#include "plantsam/parallel.hpp"

namespace plantsam::cli {

namespace {

constexpr const char* kFooter = R"(Configuration:
  --config FILE reads flags from TOML. Top-level keys set global flags;
  subcommand flags go in a table named after the subcommand, e.g.

    workers = 4
    [segment]
    strategy = "single_box"

  Every long flag can also come from PLANTSAM_<FLAG> (upper case, dashes as
  underscores). Precedence: command line, then config file, then environment.)";

std::string env_name(const std::string& flag) {
  std::string out = "PLANTSAM_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void bind_env(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help" || names.front() == "config") continue;
    if (opt->get_positional()) continue;
    opt->envname(env_name(names.front()));
  }
  for (CLI::App* sub : app.get_subcommands({})) bind_env(*sub);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Herbarium specimen segmentation toolkit", "plantsam"};
  app.require_subcommand(1);
  app.footer(kFooter);
  app.set_config("--config", "", "TOML file supplying any flag");

  GlobalOptions g;
  app.add_flag("--json", g.json, "Print a machine-readable run summary on stdout");
  app.add_flag("--keep-going", g.keep_going, "Report failed inputs and continue with the rest");
  app.add_option("--workers", g.workers, "Parallel workers; 0 uses every core")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  Runner runner;
  add_segment(app, g, runner);
  add_eval(app, g, runner);
  add_heatmap(app, g, runner);
  add_coverage(app, g, runner);
  add_make_dataset(app, g, runner);
  add_crop(app, g, runner);
  add_ratio_study(app, g, runner);
  add_serve(app, g, runner);
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
  bind_env(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  parallel::set_default_workers(g.workers);
  try {
    return runner();
  } catch (const BatchAborted&) {
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}

}  // namespace plantsam::cli

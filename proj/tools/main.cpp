#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "collapse/experiment.hpp"
#include "collapse/version.hpp"

namespace {

std::string default_out_path(const std::string& config_path) {
  return std::filesystem::path(config_path).stem().string() + ".csv";
}

std::string plot_script_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension();
  return p.string() + "_plot.py";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collapse-lab: trajectory and master-equation experiments for "
               "spontaneous localization models"};
  app.set_version_flag("--version", std::string("collapse-lab ") + collapse::version_string);
  app.require_subcommand(1);

  std::string config_path, out_override;
  std::uint64_t seed_override = 0;
  bool emit_plot = false, quiet = false;

  CLI::App* run = app.add_subcommand("run", "run one experiment described by a config file");
  run->add_option("config", config_path, "key = value config file")->required();
  CLI::Option* seed_opt =
      run->add_option("--seed", seed_override, "override the seed from the config");
  run->add_option("--out", out_override, "output CSV path (default: <config stem>.csv)");
  run->add_flag("--emit-plot-script", emit_plot,
                "also write a matplotlib script next to the CSV");
  run->add_flag("--quiet", quiet, "suppress the summary printout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    collapse::Config cfg = collapse::Config::parse_file(config_path);
    if (seed_opt->count() > 0) cfg.set("seed", std::to_string(seed_override));
    collapse::ExperimentResult res = collapse::run_experiment(cfg);

    std::string out = out_override;
    if (out.empty())
      if (const std::string* o = cfg.find("out"); o && !o->empty()) out = *o;
    if (out.empty()) out = default_out_path(config_path);

    collapse::emit_csv(res.table, out);
    if (emit_plot) collapse::emit_plot_script(res, out, plot_script_path(out));

    if (!quiet) {
      for (const auto& [k, v] : res.table.summary) std::printf("%s = %s\n", k.c_str(), v.c_str());
      std::printf("wrote %s\n", out.c_str());
      if (emit_plot) std::printf("wrote %s\n", plot_script_path(out).c_str());
    }
    return 0;
  } catch (const collapse::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", collapse::errc_name(e.code()), e.what());
    return collapse::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

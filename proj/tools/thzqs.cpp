// thzqs: single-crystal terahertz quantum interferometer simulator and
// analysis pipeline.
//
//   thzqs spectrum   --out DIR [--plot] [--branch B] [--temperature K]
//   thzqs simulate   --out DIR [--blocked] [--noiseless] [--repeats N] ...
//   thzqs analyze    --reference-stokes F --sample-stokes F ... --n 1.42
//   thzqs check-gain --out DIR
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration/validation
// failure.

#include <CLI11.hpp>
#include <iostream>

#include "thzqs/commands.hpp"
#include "thzqs/errors.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool plot = false;
  std::string branch;
  double temperature_K = -1.0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON configuration file");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--format", opt.format, "table format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opt.seed, "override the config seed")
      ->each([&](const std::string&) { opt.seed_set = true; });
  cmd->add_option("--branch", opt.branch,
                  "restrict to one branch: stokes|antistokes")
      ->check(CLI::IsMember({"stokes", "antistokes"}));
  cmd->add_option("--temperature", opt.temperature_K,
                  "override the crystal temperature [K]");
}

thzqs::CommandContext make_context(const CommonOptions& opt) {
  thzqs::CommandContext ctx;
  ctx.config = opt.config_path.empty()
                   ? thzqs::RunConfig::defaults()
                   : thzqs::RunConfig::from_file(opt.config_path);
  if (ctx.config.dispersion_file.empty())
    ctx.config.dispersion_file = THZQS_DEFAULT_DATA_FILE;
  if (opt.seed_set) ctx.config.seed = opt.seed;
  if (!opt.branch.empty())
    ctx.config.branches = {opt.branch == "stokes"
                               ? thzqs::Conversion::Stokes
                               : thzqs::Conversion::AntiStokes};
  if (opt.temperature_K >= 0.0)
    ctx.config.crystal.temperature_K = opt.temperature_K;
  if (!opt.out_dir.empty()) ctx.config.out_dir = opt.out_dir;
  ctx.out_dir = ctx.config.out_dir;
  ctx.plot = opt.plot;
  ctx.format = opt.format;
  ctx.config.validate();
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"terahertz quantum-sensing interferometer toolkit"};
  app.require_subcommand(1);

  CommonOptions spectrum_opt, simulate_opt, analyze_opt, gain_opt;

  auto* spectrum = app.add_subcommand(
      "spectrum", "frequency-angular spectrum of the crystal");
  add_common(spectrum, spectrum_opt);
  spectrum->add_flag("--plot", spectrum_opt.plot, "emit a heat-map SVG");

  auto* simulate =
      app.add_subcommand("simulate", "synthesize interferometer scans");
  add_common(simulate, simulate_opt);
  bool blocked = false, noiseless = false, raw = false;
  int repeats_override = -1;
  double d_override = -1.0;
  simulate->add_flag("--blocked", blocked, "block the idler path");
  simulate->add_flag("--noiseless", noiseless,
                     "disable all noise; exact model curves");
  simulate->add_flag("--raw", raw, "write raw ROI counts");
  simulate->add_option("--repeats", repeats_override, "override scan repeats");
  simulate->add_option("--d", d_override, "override object thickness [m]");

  auto* analyze =
      app.add_subcommand("analyze", "run the thickness-extraction pipeline");
  add_common(analyze, analyze_opt);
  std::string ref_stokes, sample_stokes, ref_anti, sample_anti;
  double n_value = 1.42, sigma_n = 0.01;
  double caliper_d = -1.0;
  analyze->add_option("--reference-stokes", ref_stokes,
                      "reference scan, Stokes branch");
  analyze->add_option("--sample-stokes", sample_stokes,
                      "sample scan, Stokes branch");
  analyze->add_option("--reference-antistokes", ref_anti,
                      "reference scan, Anti-Stokes branch");
  analyze->add_option("--sample-antistokes", sample_anti,
                      "sample scan, Anti-Stokes branch");
  analyze->add_option("--n", n_value, "object refractive index");
  analyze->add_option("--sigma-n", sigma_n, "index uncertainty");
  analyze->add_option("--caliper-d", caliper_d,
                      "reference thickness for the report table [m]");

  auto* gain = app.add_subcommand(
      "check-gain", "pump-power linearity and induced-emission check");
  add_common(gain, gain_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) {
      cmd_spectrum(make_context(spectrum_opt));
    } else if (simulate->parsed()) {
      auto ctx = make_context(simulate_opt);
      ctx.raw = raw;
      if (repeats_override > 0) ctx.config.scan.repeats = repeats_override;
      if (d_override >= 0.0) ctx.config.object.d_m = d_override;
      ctx.config.validate();
      cmd_simulate(ctx, blocked, noiseless);
    } else if (analyze->parsed()) {
      auto ctx = make_context(analyze_opt);
      thzqs::AnalyzeInputs inputs;
      inputs.n = n_value;
      inputs.sigma_n = sigma_n;
      if (caliper_d >= 0.0) inputs.caliper_d_m = caliper_d;
      if (!ref_stokes.empty() != !sample_stokes.empty())
        throw thzqs::ConfigError(
            "analyze: --reference-stokes and --sample-stokes come in pairs");
      if (!ref_anti.empty() != !sample_anti.empty())
        throw thzqs::ConfigError(
            "analyze: --reference-antistokes and --sample-antistokes come in "
            "pairs");
      if (!ref_stokes.empty())
        inputs.scans.emplace("stokes", std::make_pair(ref_stokes,
                                                      sample_stokes));
      if (!ref_anti.empty())
        inputs.scans.emplace("antistokes",
                             std::make_pair(ref_anti, sample_anti));
      if (inputs.scans.empty())
        throw thzqs::ConfigError("analyze: no input scans given");
      cmd_analyze(ctx, inputs);
    } else if (gain->parsed()) {
      cmd_check_gain(make_context(gain_opt));
    }
  } catch (const thzqs::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

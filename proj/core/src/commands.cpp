#include "thzqs/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "svg.hpp"
#include "thzqs/analysis.hpp"
#include "thzqs/errors.hpp"
#include "thzqs/instrument.hpp"
#include "thzqs/multimode.hpp"

namespace thzqs {

namespace fs = std::filesystem;

namespace {

DispersionModel load_dispersion(const RunConfig& cfg) {
  if (cfg.dispersion_file.empty())
    throw ConfigError("config: 'dispersion_file' must be set");
  auto model = DispersionModel::from_file(cfg.dispersion_file);
  cfg.crystal.validate(model);
  return model;
}

nlohmann::json provenance(const RunConfig& cfg) {
  nlohmann::json j;
  j["config"] = cfg.to_json();
  j["generator"] = "thzqs";
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string table_cell(double v) { return format_double(v); }

}  // namespace

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char ch;
  while (in.get(ch)) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << hash;
  return out.str();
}

void cmd_spectrum(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  const auto dispersion = load_dispersion(cfg);

  SpectrumGrid grid;
  grid.frequency_Hz.resize(cfg.spectrum.nu_points);
  for (int i = 0; i < cfg.spectrum.nu_points; ++i)
    grid.frequency_Hz[i] =
        1e12 * (cfg.spectrum.nu_min_THz +
                (cfg.spectrum.nu_max_THz - cfg.spectrum.nu_min_THz) * i /
                    (cfg.spectrum.nu_points - 1));
  grid.theta_s.resize(cfg.spectrum.theta_points);
  for (int i = 0; i < cfg.spectrum.theta_points; ++i)
    grid.theta_s[i] = -cfg.spectrum.theta_s_max_rad +
                      2.0 * cfg.spectrum.theta_s_max_rad * i /
                          (cfg.spectrum.theta_points - 1);

  std::vector<ProcessBranch> branches;
  for (auto conv : cfg.branches) {
    branches.push_back({conv, IdlerDirection::Forward});
    branches.push_back({conv, IdlerDirection::Backward});
  }
  const auto map = spectrum_map(dispersion, branches, grid, cfg.crystal);

  fs::create_directories(ctx.out_dir);

  // Signed-frequency layout: Stokes block mirrored to negative shifts.
  const std::size_t nnu = grid.frequency_Hz.size();
  const std::size_t nth = grid.theta_s.size();
  std::ostringstream csv;
  for (std::size_t it = 0; it < nth; ++it) {
    for (std::size_t inu = 0; inu < nnu; ++inu) {
      const std::size_t col = nnu - 1 - inu;  // most negative shift first
      csv << table_cell(map.stokes[it * nnu + col]);
      csv << ',';
    }
    for (std::size_t inu = 0; inu < nnu; ++inu) {
      csv << table_cell(map.antistokes[it * nnu + inu]);
      if (inu + 1 < nnu) csv << ',';
    }
    csv << '\n';
  }
  write_text(ctx.out_dir / "spectrum.csv", csv.str());

  nlohmann::json side = provenance(cfg);
  side["rows"] = "theta_s ascending";
  side["columns"] = "signed frequency shift, stokes negative / antistokes "
                    "positive, ascending";
  side["frequency_shift_THz"] = [&] {
    std::vector<double> signed_nu;
    for (std::size_t i = 0; i < nnu; ++i)
      signed_nu.push_back(-grid.frequency_Hz[nnu - 1 - i] / 1e12);
    for (std::size_t i = 0; i < nnu; ++i)
      signed_nu.push_back(grid.frequency_Hz[i] / 1e12);
    return signed_nu;
  }();
  side["theta_s_rad"] = grid.theta_s;
  side["branch_weights"] = {{"stokes", "N_th + 1"}, {"antistokes", "N_th"}};
  write_text(ctx.out_dir / "spectrum.csv.json", side.dump(2) + "\n");

  if (ctx.plot) {
    std::vector<double> merged(nth * 2 * nnu);
    for (std::size_t it = 0; it < nth; ++it) {
      for (std::size_t inu = 0; inu < nnu; ++inu) {
        merged[it * 2 * nnu + inu] = map.stokes[it * nnu + (nnu - 1 - inu)];
        merged[it * 2 * nnu + nnu + inu] = map.antistokes[it * nnu + inu];
      }
    }
    svg::save(svg::heatmap(merged, nth, 2 * nnu, -cfg.spectrum.nu_max_THz,
                           cfg.spectrum.nu_max_THz,
                           grid.theta_s.front() * 1e3,
                           grid.theta_s.back() * 1e3,
                           "frequency-angular spectrum",
                           "frequency shift (THz)", "theta_s (mrad)"),
              ctx.out_dir / "spectrum.svg");
  }
}

void cmd_simulate(const CommandContext& ctx, bool blocked, bool noiseless) {
  const auto& cfg = ctx.config;
  const auto dispersion = load_dispersion(cfg);

  NoiseModel noise = cfg.noise;
  noise.seed = cfg.seed;
  if (noiseless) {
    noise.background_cps_per_pixel = 0.0;
    noise.dark_cps_per_pixel = 0.0;
    noise.readout_e_rms = 0.0;
    noise.laser_rel_rms = 0.0;
    noise.shot_noise = false;
  }

  const auto delta_l = cfg.scan.delta_l();
  fs::create_directories(ctx.out_dir);

  std::uint64_t tag = 0;
  for (auto conv : cfg.branches) {
    const ProcessBranch branch{conv, IdlerDirection::Forward};
    const std::string name = to_string(conv);

    struct Job {
      std::string kind;
      Interferogram model;
    };
    std::vector<Job> jobs;
    if (blocked) {
      Interferogram flat;
      flat.branch = name;
      flat.delta_l_m = delta_l;
      flat.position_m = cfg.scan.positions();
      flat.rate.assign(delta_l.size(), 1.0);
      flat.meta["normalization"] = "unit_pedestal";
      jobs.push_back({"blocked", std::move(flat)});
    } else {
      jobs.push_back({"reference",
                      interferogram(dispersion, cfg.crystal, branch, delta_l,
                                    cfg.aperture, cfg.quadrature,
                                    cfg.phi0_rad)});
      if (cfg.object.d_m > 0.0)
        jobs.push_back({"sample", object_shifted_interferogram(
                                      dispersion, cfg.crystal, branch, delta_l,
                                      cfg.aperture, cfg.quadrature, cfg.object,
                                      cfg.phi0_rad)});
    }

    for (const auto& job : jobs) {
      RawCounts raw;
      auto scan = acquire_scan(job.model.rate, name, cfg.scan, noise, ++tag,
                               ctx.raw ? &raw : nullptr);
      scan.meta = provenance(cfg);
      scan.meta["kind"] = job.kind;
      scan.meta["noiseless"] = noiseless;
      scan.meta["units"] = "counts_per_s_per_pixel";
      for (const auto& key :
           {"collinear_root_THz", "quadrature_rel_error", "normalization"})
        if (job.model.meta.contains(key))
          scan.meta[key] = job.model.meta[key];

      const auto csv_path = ctx.out_dir / (name + "_" + job.kind + ".csv");
      write_interferogram(scan, csv_path);

      if (ctx.raw) {
        std::ostringstream raw_csv;
        raw_csv << "point,repeat,signal_roi_counts,background_roi_counts\n";
        for (std::size_t k = 0; k < raw.signal_roi.size(); ++k)
          for (std::size_t r = 0; r < raw.signal_roi[k].size(); ++r)
            raw_csv << k << ',' << r << ','
                    << table_cell(raw.signal_roi[k][r]) << ','
                    << table_cell(raw.background_roi[k][r]) << '\n';
        write_text(ctx.out_dir / (name + "_" + job.kind + "_raw.csv"),
                   raw_csv.str());
      }
    }
  }
}

void cmd_analyze(const CommandContext& ctx, const AnalyzeInputs& inputs) {
  if (inputs.scans.empty())
    throw ConfigError("analyze: no input scans given");
  if (!(inputs.n > 1.0))
    throw ConfigError("analyze: refractive index must be > 1");

  std::map<std::string, std::pair<Interferogram, Interferogram>> scans;
  nlohmann::json digests = nlohmann::json::object();
  for (const auto& [branch, files] : inputs.scans) {
    auto reference = read_interferogram(files.first);
    auto sample = read_interferogram(files.second);
    reference.branch = branch;
    sample.branch = branch;
    digests[branch] = {{"reference", file_digest(files.first)},
                       {"sample", file_digest(files.second)}};
    scans.emplace(branch, std::make_pair(std::move(reference),
                                         std::move(sample)));
  }

  const auto report = sense_pipeline(scans, inputs.n, inputs.sigma_n);

  fs::create_directories(ctx.out_dir);
  nlohmann::json j = report.to_json();
  j["n"] = inputs.n;
  j["sigma_n"] = inputs.sigma_n;
  if (inputs.caliper_d_m) j["caliper_d_m"] = *inputs.caliper_d_m;
  j["inputs"] = digests;
  write_text(ctx.out_dir / "report.json", j.dump(2) + "\n");

  // Fig.-4C style table row.
  std::ostringstream csv;
  csv << "caliper_d_m,stokes_d_m,stokes_sigma_m,antistokes_d_m,"
         "antistokes_sigma_m\n";
  csv << (inputs.caliper_d_m ? table_cell(*inputs.caliper_d_m) : "");
  for (const auto& branch : {"stokes", "antistokes"}) {
    const auto it = report.branches.find(branch);
    if (it == report.branches.end()) {
      csv << ",,";
    } else {
      csv << ',' << table_cell(it->second.thickness.d_m) << ','
          << table_cell(it->second.thickness.sigma_m);
    }
  }
  csv << '\n';
  write_text(ctx.out_dir / "report.csv", csv.str());

  for (const auto& [branch, a] : report.branches) {
    const auto& pair = scans.at(branch);
    svg::ChartSpec chart;
    chart.title = branch + " fit overlay";
    chart.x_label = "stage position (m)";
    chart.y_label = "rate";
    svg::Series ref_data{pair.first.position_m, pair.first.rate, "#b0b0b0",
                         1.0, true};
    svg::Series sample_data{pair.second.position_m, pair.second.rate,
                            "#e8a0a0", 1.0, true};
    svg::Series ref_fit;
    ref_fit.color = "#1f4e8c";
    svg::Series sample_fit;
    sample_fit.color = "#8c1f1f";
    for (double x : pair.first.position_m) {
      ref_fit.x.push_back(x);
      ref_fit.y.push_back(envelope_model(a.fit_reference.parameters(), x));
      sample_fit.x.push_back(x);
      sample_fit.y.push_back(envelope_model(a.fit_sample.parameters(), x));
    }
    chart.series = {ref_data, sample_data, ref_fit, sample_fit};
    svg::save(svg::line_chart(chart), ctx.out_dir / (branch + "_fit.svg"));
  }
}

void cmd_check_gain(const CommandContext& ctx) {
  const auto& cfg = ctx.config;
  const auto dispersion = load_dispersion(cfg);

  NoiseModel noise = cfg.noise;
  noise.seed = cfg.seed;

  const double fixed_delta_l =
      stage_to_path(cfg.scan.fixed_position_m) + cfg.scan.path_offset_m;

  struct BranchSweep {
    std::string name;
    GainSweep sweep;
  };
  std::vector<BranchSweep> sweeps;
  for (auto conv : cfg.branches) {
    const ProcessBranch branch{conv, IdlerDirection::Forward};
    const InterferogramModel model(dispersion, cfg.crystal, branch,
                                   cfg.aperture, cfg.quadrature, ObjectPlate{},
                                   cfg.phi0_rad);
    NoiseModel branch_noise = noise;
    branch_noise.seed = stream_key(cfg.seed, 0xbeef, sweeps.size());
    sweeps.push_back(
        {to_string(conv),
         gain_linearity_sweep(cfg.powers_W, cfg.gain,
                              model.rate(fixed_delta_l), model.pedestal(),
                              cfg.scan, branch_noise)});
  }

  fs::create_directories(ctx.out_dir);
  if (ctx.format == "json") {
    nlohmann::json j = provenance(cfg);
    for (const auto& bs : sweeps) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& row : bs.sweep.rows)
        rows.push_back({{"power_W", row.power_W},
                        {"mean_unblocked", row.mean_unblocked},
                        {"sigma_unblocked", row.sigma_unblocked},
                        {"mean_blocked", row.mean_blocked},
                        {"sigma_blocked", row.sigma_blocked},
                        {"ratio", row.ratio},
                        {"ratio_sigma", row.ratio_sigma}});
      j["sweeps"][bs.name] = {{"rows", rows},
                              {"slope", bs.sweep.slope},
                              {"intercept", bs.sweep.intercept},
                              {"r_squared", bs.sweep.r_squared}};
    }
    write_text(ctx.out_dir / "gain_table.json", j.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "branch,power_W,mean_unblocked,sigma_unblocked,mean_blocked,"
           "sigma_blocked,ratio,ratio_sigma\n";
    for (const auto& bs : sweeps)
      for (const auto& row : bs.sweep.rows)
        csv << bs.name << ',' << table_cell(row.power_W) << ','
            << table_cell(row.mean_unblocked) << ','
            << table_cell(row.sigma_unblocked) << ','
            << table_cell(row.mean_blocked) << ','
            << table_cell(row.sigma_blocked) << ',' << table_cell(row.ratio)
            << ',' << table_cell(row.ratio_sigma) << '\n';
    write_text(ctx.out_dir / "gain_table.csv", csv.str());
  }

  svg::ChartSpec chart;
  chart.title = "signal rate vs pump power";
  chart.x_label = "pump power (W)";
  chart.y_label = "rate (counts/s/pixel)";
  const char* colors[] = {"#8c1f1f", "#1f4e8c"};
  int color_index = 0;
  for (const auto& bs : sweeps) {
    svg::Series pts;
    pts.points_only = true;
    pts.color = colors[color_index % 2];
    svg::Series line;
    line.color = colors[color_index % 2];
    ++color_index;
    for (const auto& row : bs.sweep.rows) {
      pts.x.push_back(row.power_W);
      pts.y.push_back(row.mean_unblocked);
      line.x.push_back(row.power_W);
      line.y.push_back(bs.sweep.intercept + bs.sweep.slope * row.power_W);
    }
    chart.series.push_back(pts);
    chart.series.push_back(line);
  }
  svg::save(svg::line_chart(chart), ctx.out_dir / "gain.svg");
}

}  // namespace thzqs

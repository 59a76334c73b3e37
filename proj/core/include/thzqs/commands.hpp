#ifndef THZQS_COMMANDS_HPP
#define THZQS_COMMANDS_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "thzqs/config.hpp"

namespace thzqs {

/// Shared command state: a validated configuration plus output options.
/// Commands validate everything before writing any file.
struct CommandContext {
  RunConfig config;
  std::filesystem::path out_dir = "out";
  bool plot = false;
  bool raw = false;
  std::string format = "csv";  // table format: csv | json
};

/// Frequency-angular spectrum matrix (+ sidecar, optional heat map).
void cmd_spectrum(const CommandContext& ctx);

/// Synthetic scans for every configured branch: reference, sample when the
/// object thickness is set, or blocked traces. Deterministic under the
/// config seed.
void cmd_simulate(const CommandContext& ctx, bool blocked = false,
                  bool noiseless = false);

struct AnalyzeInputs {
  /// branch -> (reference csv, sample csv)
  std::map<std::string,
           std::pair<std::filesystem::path, std::filesystem::path>>
      scans;
  double n = 1.42;
  double sigma_n = 0.01;
  std::optional<double> caliper_d_m;
};

/// Measurement pipeline on recorded scans: JSON report, CSV table, and a
/// fit-overlay plot per branch.
void cmd_analyze(const CommandContext& ctx, const AnalyzeInputs& inputs);

/// Induced-emission / pump-power linearity check table and plot.
void cmd_check_gain(const CommandContext& ctx);

/// FNV-1a 64-bit digest of a file, for report provenance.
std::string file_digest(const std::filesystem::path& path);

}  // namespace thzqs

#endif

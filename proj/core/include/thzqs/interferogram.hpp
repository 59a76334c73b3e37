#ifndef THZQS_INTERFEROGRAM_HPP
#define THZQS_INTERFEROGRAM_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace thzqs {

/// A scan record: stage positions, idler path-length coordinate, mean rates
/// and per-point uncertainties (zero/absent for noiseless model curves),
/// plus the process-branch label and free-form metadata that lands in the
/// JSON sidecar.
struct Interferogram {
  std::string branch;  // "stokes" or "antistokes"
  std::vector<double> position_m;
  std::vector<double> delta_l_m;
  std::vector<double> rate;
  std::vector<double> rate_sigma;
  nlohmann::json meta = nlohmann::json::object();

  std::size_t size() const { return rate.size(); }
  void validate() const;  // consistent column lengths
};

/// Writes `position_m,delta_l_m,rate,rate_sigma` delimited text plus a JSON
/// sidecar `<path>.json` carrying branch and metadata.
void write_interferogram(const Interferogram& scan,
                         const std::filesystem::path& csv_path);

/// Reads the delimited text and, when present, the sidecar. Malformed rows
/// raise ParseError naming line and column.
Interferogram read_interferogram(const std::filesystem::path& csv_path);

/// Serialize a double so that parsing it back is exact.
std::string format_double(double value);

}  // namespace thzqs

#endif

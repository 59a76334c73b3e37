#include "thzqs/interferogram.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "thzqs/errors.hpp"

namespace thzqs {

void Interferogram::validate() const {
  const std::size_t n = rate.size();
  if (position_m.size() != n || delta_l_m.size() != n ||
      (!rate_sigma.empty() && rate_sigma.size() != n))
    throw DomainError("Interferogram: column lengths differ");
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_interferogram(const Interferogram& scan,
                         const std::filesystem::path& csv_path) {
  scan.validate();
  std::ofstream out(csv_path);
  if (!out)
    throw Error("cannot write " + csv_path.string());
  out << "position_m,delta_l_m,rate,rate_sigma\n";
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const double sigma = scan.rate_sigma.empty() ? 0.0 : scan.rate_sigma[i];
    out << format_double(scan.position_m[i]) << ','
        << format_double(scan.delta_l_m[i]) << ','
        << format_double(scan.rate[i]) << ',' << format_double(sigma) << '\n';
  }
  out.close();

  nlohmann::json sidecar = scan.meta;
  sidecar["branch"] = scan.branch;
  sidecar["columns"] = {"position_m", "delta_l_m", "rate", "rate_sigma"};
  sidecar["points"] = scan.size();
  std::ofstream side(csv_path.string() + ".json");
  if (!side)
    throw Error("cannot write " + csv_path.string() + ".json");
  side << sidecar.dump(2) << '\n';
}

namespace {

double parse_field(const std::string& field, const std::string& file, int line,
                   int column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    while (used < field.size() &&
           (field[used] == ' ' || field[used] == '\r' || field[used] == '\t'))
      ++used;
    if (used != field.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ParseError(file + ":" + std::to_string(line) + ": column " +
                     std::to_string(column) + ": bad numeric value '" + field +
                     "'");
  }
}

}  // namespace

Interferogram read_interferogram(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in)
    throw ParseError("cannot open " + csv_path.string());

  Interferogram scan;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line))
    throw ParseError(csv_path.string() + ": empty file");
  ++line_no;
  {
    std::string cols = line;
    cols.erase(std::remove_if(cols.begin(), cols.end(),
                              [](char c) { return c == ' ' || c == '\r'; }),
               cols.end());
    if (cols != "position_m,delta_l_m,rate,rate_sigma")
      throw ParseError(csv_path.string() +
                       ":1: expected header 'position_m,delta_l_m,rate,rate_sigma'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::array<std::string, 4> fields;
    std::size_t start = 0;
    for (int c = 0; c < 4; ++c) {
      const auto comma = line.find(',', start);
      if (c < 3 && comma == std::string::npos)
        throw ParseError(csv_path.string() + ":" + std::to_string(line_no) +
                         ": expected 4 comma-separated columns");
      fields[c] = line.substr(start,
                              comma == std::string::npos ? std::string::npos
                                                         : comma - start);
      start = comma + 1;
    }
    scan.position_m.push_back(
        parse_field(fields[0], csv_path.string(), line_no, 1));
    scan.delta_l_m.push_back(
        parse_field(fields[1], csv_path.string(), line_no, 2));
    scan.rate.push_back(parse_field(fields[2], csv_path.string(), line_no, 3));
    scan.rate_sigma.push_back(
        parse_field(fields[3], csv_path.string(), line_no, 4));
  }
  if (scan.rate.empty())
    throw ParseError(csv_path.string() + ": no data rows");

  const auto sidecar_path = csv_path.string() + ".json";
  std::ifstream side(sidecar_path);
  if (side) {
    try {
      nlohmann::json j;
      side >> j;
      scan.branch = j.value("branch", "");
      j.erase("branch");
      j.erase("columns");
      j.erase("points");
      scan.meta = std::move(j);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(sidecar_path + ": bad JSON sidecar: " + e.what());
    }
  }
  scan.validate();
  return scan;
}

}  // namespace thzqs

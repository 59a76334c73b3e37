#include "thzqs/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "thzqs/constants.hpp"
#include "thzqs/errors.hpp"

namespace thzqs {

using nlohmann::json;

std::string to_string(Band band) {
  return band == Band::Visible ? "visible" : "terahertz";
}

double SellmeierCoefficients::evaluate(double wavelength_um,
                                       double temperature_K) const {
  const double tc = temperature_K - 273.15;
  const double f = (tc - 24.5) * (tc + 570.82);
  const double l2 = wavelength_um * wavelength_um;
  const double a3f = a3 + b3 * f;
  const double n2 = a1 + b1 * f + (a2 + b2 * f) / (l2 - a3f * a3f) +
                    (a4 + b4 * f) / (l2 - a5 * a5) - a6 * l2;
  return std::sqrt(n2);
}

void ThzIndexTable::build() {
  if (frequency_THz.size() != n_e.size() || frequency_THz.size() < 3)
    throw ParseError("terahertz index table: need >= 3 matching rows");
  spline = CubicSpline(frequency_THz, n_e);
  if (valid_frequency_THz[0] <= 0.0 && valid_frequency_THz[1] <= 0.0)
    valid_frequency_THz = {frequency_THz.front(), frequency_THz.back()};
}

double ThzIndexTable::evaluate(double frequency_THz_value,
                               double temperature_K) const {
  return spline(frequency_THz_value) +
         dn_dT_per_K * (temperature_K - reference_temperature_K);
}

namespace {

void parse_visible_block(const json& j, SellmeierCoefficients& out) {
  const auto& co = j.at("coefficients");
  out.a1 = co.at("a1").get<double>();
  out.a2 = co.at("a2").get<double>();
  out.a3 = co.at("a3").get<double>();
  out.a4 = co.at("a4").get<double>();
  out.a5 = co.at("a5").get<double>();
  out.a6 = co.at("a6").get<double>();
  out.b1 = co.at("b1").get<double>();
  out.b2 = co.at("b2").get<double>();
  out.b3 = co.at("b3").get<double>();
  out.b4 = co.at("b4").get<double>();
  if (j.contains("valid_wavelength_um")) {
    out.valid_wavelength_um[0] = j["valid_wavelength_um"].at(0).get<double>();
    out.valid_wavelength_um[1] = j["valid_wavelength_um"].at(1).get<double>();
  }
}

}  // namespace

DispersionModel DispersionModel::from_string(const std::string& text,
                                             const std::string& origin) {
  // File layout: a JSON header object, then a "frequency_THz,n_e" table.
  std::istringstream in(text);
  std::string line;
  std::string header;
  int depth = 0;
  int line_no = 0;
  bool header_done = false;
  while (!header_done && std::getline(in, line)) {
    ++line_no;
    for (char ch : line) {
      if (ch == '{') ++depth;
      if (ch == '}') --depth;
    }
    header += line;
    header += '\n';
    if (depth == 0 && header.find('{') != std::string::npos) header_done = true;
  }
  if (!header_done)
    throw ParseError(origin + ": unterminated JSON header block");

  json j;
  try {
    j = json::parse(header);
  } catch (const json::exception& e) {
    throw ParseError(origin + ": bad JSON header: " + e.what());
  }

  DispersionModel model;
  try {
    model.source_ = j.value("source", "");
    parse_visible_block(j.at("visible"), model.visible_);
    const auto& thz = j.at("terahertz");
    model.thz_.reference_temperature_K = j.value("temperature_K", 293.0);
    model.thz_.dn_dT_per_K = thz.value("dn_dT_per_K", 0.0);
    if (thz.contains("valid_frequency_THz")) {
      model.thz_.valid_frequency_THz[0] =
          thz["valid_frequency_THz"].at(0).get<double>();
      model.thz_.valid_frequency_THz[1] =
          thz["valid_frequency_THz"].at(1).get<double>();
    }
  } catch (const json::exception& e) {
    throw ParseError(origin + ": header: " + e.what());
  }

  // Column header then rows.
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    break;
  }
  {
    std::string cols = line;
    cols.erase(std::remove_if(cols.begin(), cols.end(),
                              [](char c) { return c == ' ' || c == '\r'; }),
               cols.end());
    if (cols != "frequency_THz,n_e")
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": expected column header 'frequency_THz,n_e'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": expected 'frequency_THz,n_e' row");
    try {
      model.thz_.frequency_THz.push_back(std::stod(line.substr(0, comma)));
      model.thz_.n_e.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": bad numeric value");
    }
  }
  model.thz_.build();
  return model;
}

DispersionModel DispersionModel::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open dispersion file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path.string());
}

std::array<double, 2> DispersionModel::valid_range_Hz(Band band) const {
  if (band == Band::Visible) {
    // Stored as wavelength; convert to an increasing frequency interval.
    const double lo = constants::speed_of_light /
                      (visible_.valid_wavelength_um[1] * 1e-6);
    const double hi = constants::speed_of_light /
                      (visible_.valid_wavelength_um[0] * 1e-6);
    return {lo, hi};
  }
  return {thz_.valid_frequency_THz[0] * 1e12,
          thz_.valid_frequency_THz[1] * 1e12};
}

double DispersionModel::n_e(Band band, double frequency_Hz,
                            double temperature_K) const {
  const auto range = valid_range_Hz(band);
  if (!(frequency_Hz >= range[0] && frequency_Hz <= range[1])) {
    std::ostringstream msg;
    msg << "n_e(" << to_string(band) << "): frequency " << frequency_Hz
        << " Hz outside validity [" << range[0] << ", " << range[1] << "] Hz";
    throw OutOfRangeError(msg.str());
  }
  if (band == Band::Visible) {
    const double lam_um = constants::speed_of_light / frequency_Hz * 1e6;
    return visible_.evaluate(lam_um, temperature_K);
  }
  return thz_.evaluate(frequency_Hz / 1e12, temperature_K);
}

double thermal_occupation(double frequency_Hz, double temperature_K) {
  if (!(frequency_Hz > 0.0))
    throw DomainError("thermal_occupation: frequency must be > 0");
  if (temperature_K < 0.0)
    throw DomainError("thermal_occupation: temperature must be >= 0");
  if (temperature_K == 0.0) return 0.0;
  const double x = constants::planck * frequency_Hz /
                   (constants::boltzmann * temperature_K);
  return 1.0 / std::expm1(x);
}

}  // namespace thzqs

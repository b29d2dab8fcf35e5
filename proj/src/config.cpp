// SPDX-License-Identifier: Apache-2.0
//
// rsmaris: Monte-Carlo simulator for malicious-RIS attacks on RSMA/SDMA downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rsmaris/harness.hpp"

namespace rsmaris {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario",
       {"bs_position", "ris_position", "user_positions", "path_loss_exponent", "antennas",
        "ris_elements"}},
      {"transmitter",
       {"power_sweep_dbm", "noise_dbm", "schemes", "interference_reference"}},
      {"bs_csi", {"tau_bs_u", "tau_bs_ris", "tau_ris_u", "error_scaling"}},
      {"attacker", {"attacks", "weights", "iterations", "step_scale", "mitigation_start"}},
      {"attacker_csi", {"tau_bs_u", "tau_bs_ris", "tau_ris_u", "error_scaling"}},
      {"harness", {"trials", "seed"}},
  };
  return keys;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, separator)) parts.push_back(trim(part));
  if (!text.empty() && text.back() == separator) parts.emplace_back();
  return parts;
}

// Reads one field; every diagnostic names "[section] key".
class FieldReader {
 public:
  FieldReader(const pt::ptree& tree, std::string origin) : tree_(tree), origin_(std::move(origin)) {}

  bool has(const std::string& section, const std::string& key) const {
    const auto s = tree_.get_child_optional(pt::ptree::path_type(section, '\x1f'));
    return s && s->get_child_optional(pt::ptree::path_type(key, '\x1f'));
  }

  std::string raw(const std::string& section, const std::string& key) const {
    return trim(tree_.get_child(pt::ptree::path_type(section, '\x1f'))
                    .get<std::string>(pt::ptree::path_type(key, '\x1f')));
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& what) const {
    throw ConfigError(origin_ + ": [" + section + "] " + key + ": " + what);
  }

  double number(const std::string& section, const std::string& key, const std::string& text) const {
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || result.ec != std::errc() || result.ptr != text.data() + text.size())
      fail(section, key, "expected a number, got '" + text + "'");
    return value;
  }

  template <typename Int>
  Int integer(const std::string& section, const std::string& key) const {
    const std::string text = raw(section, key);
    Int value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || result.ec != std::errc() || result.ptr != text.data() + text.size())
      fail(section, key, "expected an integer, got '" + text + "'");
    return value;
  }

  double scalar(const std::string& section, const std::string& key) const {
    return number(section, key, raw(section, key));
  }

  std::vector<double> list(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split(raw(section, key), ','))
      out.push_back(number(section, key, item));
    return out;
  }

  Point2<double> point(const std::string& section, const std::string& key,
                       const std::string& text) const {
    std::istringstream in(text);
    std::string x, y, extra;
    if (!(in >> x >> y) || (in >> extra))
      fail(section, key, "expected a position 'x y', got '" + text + "'");
    return {number(section, key, x), number(section, key, y)};
  }

  template <typename Enum, typename Parse>
  std::vector<Enum> names(const std::string& section, const std::string& key, Parse parse) const {
    std::vector<Enum> out;
    for (const std::string& item : split(raw(section, key), ',')) {
      try {
        out.push_back(parse(item));
      } catch (const ConfigError& e) {
        fail(section, key, e.what());
      }
    }
    return out;
  }

 private:
  const pt::ptree& tree_;
  std::string origin_;
};

void read_csi(const FieldReader& in, const std::string& section, CsiErrorSpec<double>& csi) {
  if (in.has(section, "tau_bs_u")) csi.tau_bs_user = in.scalar(section, "tau_bs_u");
  if (in.has(section, "tau_bs_ris")) csi.tau_bs_ris = in.scalar(section, "tau_bs_ris");
  if (in.has(section, "tau_ris_u")) csi.tau_ris_user = in.scalar(section, "tau_ris_u");
  if (in.has(section, "error_scaling")) {
    const std::string mode = in.raw(section, "error_scaling");
    if (mode == "path_loss")
      csi.scaling = ErrorScaling::PathLoss;
    else if (mode == "unit")
      csi.scaling = ErrorScaling::Unit;
    else
      in.fail(section, "error_scaling", "expected path_loss or unit, got '" + mode + "'");
  }
  for (double tau : {csi.tau_bs_user, csi.tau_bs_ris, csi.tau_ris_user})
    if (!(tau >= 0.0 && tau <= 1.0)) in.fail(section, "tau", "values must lie in [0, 1]");
}

const char* mitigation_start_name(MitigationStart start) {
  switch (start) {
    case MitigationStart::AsPrinted:
      return "printed";
    case MitigationStart::LeastSquares:
      return "least_squares";
    case MitigationStart::Ones:
      return "ones";
  }
  return "printed";
}

template <typename Range>
std::string join(const Range& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

}  // namespace

ExperimentConfig read_config(std::istream& stream, const std::string& origin) {
  pt::ptree tree;
  try {
    pt::read_ini(stream, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  for (const auto& [section, body] : tree) {
    const auto known = schema().find(section);
    if (known == schema().end()) {
      if (body.empty())
        throw ConfigError(origin + ": key '" + section + "' outside of any section");
      throw ConfigError(origin + ": unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body)
      if (!known->second.count(key))
        throw ConfigError(origin + ": [" + section + "] " + key + ": unknown key");
  }

  const FieldReader in(tree, origin);
  ExperimentConfig c = ExperimentConfig::defaults();

  const std::string sc = "scenario";
  if (in.has(sc, "bs_position")) c.geometry.bs_position = in.point(sc, "bs_position", in.raw(sc, "bs_position"));
  if (in.has(sc, "ris_position")) c.geometry.ris_position = in.point(sc, "ris_position", in.raw(sc, "ris_position"));
  if (in.has(sc, "user_positions")) {
    c.geometry.user_positions.clear();
    for (const std::string& item : split(in.raw(sc, "user_positions"), ','))
      c.geometry.user_positions.push_back(in.point(sc, "user_positions", item));
    if (!in.has("attacker", "weights")) {
      const auto k = static_cast<Eigen::Index>(c.geometry.user_positions.size());
      c.weights = RVector<double>::Constant(k, 1.0 / static_cast<double>(k));
    }
  }
  if (in.has(sc, "path_loss_exponent")) c.geometry.path_loss_exponent = in.scalar(sc, "path_loss_exponent");
  if (in.has(sc, "antennas")) c.antennas = in.integer<Eigen::Index>(sc, "antennas");
  if (in.has(sc, "ris_elements")) c.elements = in.integer<Eigen::Index>(sc, "ris_elements");

  const std::string tx = "transmitter";
  if (in.has(tx, "power_sweep_dbm")) c.power_sweep_dbm = in.list(tx, "power_sweep_dbm");
  if (in.has(tx, "noise_dbm")) c.noise_dbm = in.scalar(tx, "noise_dbm");
  if (in.has(tx, "schemes"))
    c.schemes = in.names<Scheme>(tx, "schemes", [](const std::string& s) { return parse_scheme(s); });
  if (in.has(tx, "interference_reference")) {
    const std::string mode = in.raw(tx, "interference_reference");
    if (mode == "least_interfered")
      c.interference_reference = InterferenceReference::LeastInterfered;
    else if (mode == "most_interfered")
      c.interference_reference = InterferenceReference::MostInterfered;
    else
      in.fail(tx, "interference_reference",
              "expected least_interfered or most_interfered, got '" + mode + "'");
  }

  read_csi(in, "bs_csi", c.bs_csi);
  read_csi(in, "attacker_csi", c.attacker_csi);

  const std::string at = "attacker";
  if (in.has(at, "attacks"))
    c.attacks = in.names<AttackKind>(at, "attacks", [](const std::string& s) { return parse_attack(s); });
  if (in.has(at, "weights")) {
    const std::vector<double> w = in.list(at, "weights");
    c.weights = Eigen::Map<const RVector<double>>(w.data(), static_cast<Eigen::Index>(w.size()));
    if (c.weights.size() != c.users())
      in.fail(at, "weights", "expected one weight per user (" + std::to_string(c.users()) + ")");
  }
  if (in.has(at, "iterations")) c.iterations = in.integer<int>(at, "iterations");
  if (in.has(at, "step_scale")) c.step_scale = in.scalar(at, "step_scale");
  if (in.has(at, "mitigation_start")) {
    const std::string mode = in.raw(at, "mitigation_start");
    if (mode == "printed")
      c.mitigation_start = MitigationStart::AsPrinted;
    else if (mode == "least_squares")
      c.mitigation_start = MitigationStart::LeastSquares;
    else if (mode == "ones")
      c.mitigation_start = MitigationStart::Ones;
    else
      in.fail(at, "mitigation_start",
              "expected printed, least_squares or ones, got '" + mode + "'");
  }

  const std::string hs = "harness";
  if (in.has(hs, "trials")) c.trials = in.integer<int>(hs, "trials");
  if (in.has(hs, "seed")) c.seed = in.integer<std::uint64_t>(hs, "seed");

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  return read_config(in, path);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  const auto point = [](const Point2<double>& p) {
    return format_number(p.x()) + " " + format_number(p.y());
  };
  std::vector<std::string> users, powers, schemes, attacks, weights;
  for (const auto& u : c.geometry.user_positions) users.push_back(point(u));
  for (double p : c.power_sweep_dbm) powers.push_back(format_number(p));
  for (Scheme s : c.schemes) schemes.emplace_back(to_string(s));
  for (AttackKind a : c.attacks) attacks.emplace_back(to_string(a));
  for (Eigen::Index k = 0; k < c.weights.size(); ++k) weights.push_back(format_number(c.weights(k)));
  const auto csi = [&](const char* section, const CsiErrorSpec<double>& s) {
    out << "[" << section << "]\n"
        << "tau_bs_u = " << format_number(s.tau_bs_user) << "\n"
        << "tau_bs_ris = " << format_number(s.tau_bs_ris) << "\n"
        << "tau_ris_u = " << format_number(s.tau_ris_user) << "\n"
        << "error_scaling = " << (s.scaling == ErrorScaling::PathLoss ? "path_loss" : "unit")
        << "\n\n";
  };

  out << "; rsmaris experiment configuration\n"
      << "; positions in meters, powers in dBm\n\n"
      << "[scenario]\n"
      << "bs_position = " << point(c.geometry.bs_position) << "\n"
      << "ris_position = " << point(c.geometry.ris_position) << "\n"
      << "user_positions = " << join(users) << "\n"
      << "path_loss_exponent = " << format_number(c.geometry.path_loss_exponent) << "\n"
      << "antennas = " << c.antennas << "\n"
      << "ris_elements = " << c.elements << "\n\n"
      << "[transmitter]\n"
      << "power_sweep_dbm = " << join(powers) << "\n"
      << "noise_dbm = " << format_number(c.noise_dbm) << "\n"
      << "schemes = " << join(schemes) << "\n"
      << "interference_reference = "
      << (c.interference_reference == InterferenceReference::LeastInterfered ? "least_interfered"
                                                                             : "most_interfered")
      << "\n\n";
  csi("bs_csi", c.bs_csi);
  out << "[attacker]\n"
      << "attacks = " << join(attacks) << "\n"
      << "weights = " << join(weights) << "\n"
      << "iterations = " << c.iterations << "\n"
      << "step_scale = " << format_number(c.step_scale) << "\n"
      << "mitigation_start = " << mitigation_start_name(c.mitigation_start) << "\n\n";
  csi("attacker_csi", c.attacker_csi);
  out << "[harness]\n"
      << "trials = " << c.trials << "\n"
      << "seed = " << c.seed << "\n";
}

}  // namespace rsmaris

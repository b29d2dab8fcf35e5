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
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "rsmaris/harness.hpp"

namespace rsmaris {

// Shortest representation that parses back to the same double, always with
// '.' as decimal separator.
std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records, bool header) {
  if (header) out << kCsvHeader << '\n';
  for (const ResultRecord& r : records) {
    out << format_number(r.power_dbm) << ',' << to_string(r.scheme) << ','
        << to_string(r.attack) << ',' << format_number(r.tau_bs) << ','
        << format_number(r.tau_attacker) << ',' << format_number(r.mean_sum_rate) << ','
        << format_number(r.std_sum_rate) << ',' << format_number(r.mean_common_rate) << ','
        << format_number(r.mean_private_rate_sum) << ',' << format_number(r.mean_alpha_common)
        << ',' << r.trials << '\n';
  }
}

void write_trial_csv(std::ostream& out, const std::vector<TrialSample>& samples) {
  out << "trial,power_dbm,scheme,attack,sum_rate,common_rate,private_rate_sum,alpha_common\n";
  for (const TrialSample& s : samples) {
    out << s.trial << ',' << format_number(s.power_dbm) << ',' << to_string(s.scheme) << ','
        << to_string(s.attack) << ',' << format_number(s.sum_rate) << ','
        << format_number(s.common_rate) << ',' << format_number(s.private_rate_sum) << ','
        << format_number(s.alpha_common) << '\n';
  }
}

namespace {

double parse_double(const std::string& field, int line) {
  double value = 0.0;
  const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc() || result.ptr != field.data() + field.size())
    throw Error("csv line " + std::to_string(line) + ": bad number '" + field + "'");
  return value;
}

}  // namespace

std::vector<ResultRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw Error("csv: missing or unexpected header");
  std::vector<ResultRecord> records;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 11)
      throw Error("csv line " + std::to_string(number) + ": expected 11 fields");
    ResultRecord r;
    r.power_dbm = parse_double(fields[0], number);
    r.scheme = parse_scheme(fields[1]);
    r.attack = parse_attack(fields[2]);
    r.tau_bs = parse_double(fields[3], number);
    r.tau_attacker = parse_double(fields[4], number);
    r.mean_sum_rate = parse_double(fields[5], number);
    r.std_sum_rate = parse_double(fields[6], number);
    r.mean_common_rate = parse_double(fields[7], number);
    r.mean_private_rate_sum = parse_double(fields[8], number);
    r.mean_alpha_common = parse_double(fields[9], number);
    r.trials = static_cast<int>(parse_double(fields[10], number));
    records.push_back(r);
  }
  return records;
}

}  // namespace rsmaris

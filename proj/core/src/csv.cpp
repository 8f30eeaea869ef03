#include "grasspca/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "grasspca/errors.hpp"

namespace grasspca {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

long parse_long(const std::string& text) {
  long value = 0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw InvalidInputError("csv: bad integer field '" + text + "'");
  }
  return value;
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t value = 0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw InvalidInputError("csv: bad unsigned field '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw InvalidInputError("csv: bad numeric field '" + text + "'");
  }
  return value;
}

std::string sweep_csv_header() {
  return "axis,axis_value,estimator,M,N,N_t,N_r,K,gamma_d_db,gamma_c_db,"
         "trials,mssd_mean,mssd_stderr,bound,excluded_trials,master_seed";
}

std::string to_csv(const SweepRow& row) {
  std::string out;
  out.reserve(160);
  out += row.axis;
  out += ',';
  out += format_double(row.axis_value);
  out += ',';
  out += row.estimator;
  out += ',';
  out += std::to_string(row.subspace_dim);
  out += ',';
  out += std::to_string(row.ambient_dim);
  out += ',';
  out += std::to_string(row.transmit_antennas);
  out += ',';
  out += std::to_string(row.receive_antennas);
  out += ',';
  out += std::to_string(row.devices);
  out += ',';
  out += format_double(row.gamma_d_db);
  out += ',';
  out += format_double(row.gamma_c_db);
  out += ',';
  out += std::to_string(row.trials);
  out += ',';
  out += format_double(row.mssd_mean);
  out += ',';
  out += format_double(row.mssd_stderr);
  out += ',';
  out += format_double(row.bound);
  out += ',';
  out += std::to_string(row.excluded_trials);
  out += ',';
  out += std::to_string(row.master_seed);
  return out;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header();
  out += '\n';
  for (const SweepRow& row : rows) {
    out += to_csv(row);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != sweep_csv_header()) {
    throw InvalidInputError("csv: missing or unexpected sweep header");
  }
  std::vector<SweepRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 16) {
      throw InvalidInputError("csv: sweep row needs 16 fields");
    }
    SweepRow row;
    row.axis = fields[0];
    row.axis_value = parse_double(fields[1]);
    row.estimator = fields[2];
    row.subspace_dim = static_cast<int>(parse_long(fields[3]));
    row.ambient_dim = static_cast<int>(parse_long(fields[4]));
    row.transmit_antennas = static_cast<int>(parse_long(fields[5]));
    row.receive_antennas = static_cast<int>(parse_long(fields[6]));
    row.devices = parse_long(fields[7]);
    row.gamma_d_db = parse_double(fields[8]);
    row.gamma_c_db = parse_double(fields[9]);
    row.trials = parse_long(fields[10]);
    row.mssd_mean = parse_double(fields[11]);
    row.mssd_stderr = parse_double(fields[12]);
    row.bound = parse_double(fields[13]);
    row.excluded_trials = parse_long(fields[14]);
    row.master_seed = parse_u64(fields[15]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string latency_csv_header() {
  return "target_mssd,scheme,K,uses_per_device,total_uses,feasible,notes";
}

std::string to_csv(const LatencyResult& row) {
  std::string out;
  out.reserve(96);
  out += format_double(row.target_mssd);
  out += ',';
  out += row.scheme;
  out += ',';
  out += std::to_string(row.devices);
  out += ',';
  out += std::to_string(row.uses_per_device);
  out += ',';
  out += std::to_string(row.total_uses);
  out += ',';
  out += row.feasible ? "1" : "0";
  out += ',';
  out += row.notes;
  return out;
}

std::string to_csv(const std::vector<LatencyResult>& rows) {
  std::string out = latency_csv_header();
  out += '\n';
  for (const LatencyResult& row : rows) {
    out += to_csv(row);
    out += '\n';
  }
  return out;
}

std::vector<LatencyResult> parse_latency_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != latency_csv_header()) {
    throw InvalidInputError("csv: missing or unexpected latency header");
  }
  std::vector<LatencyResult> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() < 7) {
      throw InvalidInputError("csv: latency row needs 7 fields");
    }
    LatencyResult row;
    row.target_mssd = parse_double(fields[0]);
    row.scheme = fields[1];
    row.devices = parse_long(fields[2]);
    row.uses_per_device = parse_long(fields[3]);
    row.total_uses = parse_long(fields[4]);
    row.feasible = fields[5] == "1";
    // Notes may themselves contain commas; keep the remainder verbatim.
    row.notes = fields[6];
    for (std::size_t f = 7; f < fields.size(); ++f) {
      row.notes += ',';
      row.notes += fields[f];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace grasspca

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "irs/harness.hpp"

namespace irs {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& field, std::size_t line) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size())
    throw IoError("results line " + std::to_string(line) + ": bad number '" + field + "'");
  return v;
}

int parse_int(const std::string& field, std::size_t line) {
  const double v = parse_double(field, line);
  if (v != static_cast<double>(static_cast<int>(v)))
    throw IoError("results line " + std::to_string(line) + ": expected integer, got '" + field + "'");
  return static_cast<int>(v);
}

}  // namespace

std::string format_results(const std::vector<SweepRecord>& records) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const SweepRecord& r : records) {
    out += r.scheme;
    out += ',' + r.axis_name;
    out += ',' + format_double(r.axis_value);
    out += ',' + format_double(r.sigma2);
    out += ',' + std::to_string(r.trial);
    out += ',' + format_double(r.mse);
    out += ',' + std::to_string(r.iters);
    out += r.converged ? ",1" : ",0";
    out += ',' + format_double(r.millis);
    out += '\n';
  }
  return out;
}

std::vector<SweepRecord> parse_results(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader)
    throw IoError("results: missing or unexpected header");
  std::vector<SweepRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) f.push_back(cell);
    if (f.size() != 9)
      throw IoError("results line " + std::to_string(lineno) + ": expected 9 fields, got " +
                    std::to_string(f.size()));
    SweepRecord r;
    r.scheme = f[0];
    r.axis_name = f[1];
    r.axis_value = parse_double(f[2], lineno);
    r.sigma2 = parse_double(f[3], lineno);
    r.trial = parse_int(f[4], lineno);
    r.mse = parse_double(f[5], lineno);
    r.iters = parse_int(f[6], lineno);
    if (f[7] != "0" && f[7] != "1")
      throw IoError("results line " + std::to_string(lineno) + ": converged must be 0 or 1");
    r.converged = f[7] == "1";
    r.millis = parse_double(f[8], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

void write_results(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  const std::string text = format_results(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<SweepRecord> read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_results(buf.str());
}

}  // namespace irs

#include "lmsv/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lmsv {

const char* const kResultCsvHeader = "experiment,alpha,d,tau,n,k,stat,value,se,reps";

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream os;
  os << kResultCsvHeader << '\n';
  for (const StatRow& r : table.rows) {
    os << r.experiment << ',' << format_double(r.alpha) << ',' << format_double(r.d) << ','
       << format_double(r.tau) << ',' << r.n << ',' << r.k << ',' << r.stat << ','
       << format_double(r.value) << ',' << format_double(r.se) << ',' << r.reps << '\n';
  }
  return os.str();
}

void write_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_csv(table);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

ResultTable parse_result_csv(std::istream& in) {
  ResultTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("result csv: empty input");
  if (line != kResultCsvHeader)
    throw std::runtime_error("result csv: unexpected header: " + line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10)
      throw std::runtime_error("result csv: line " + std::to_string(lineno) +
                               ": expected 10 fields, got " + std::to_string(f.size()));
    StatRow r;
    r.experiment = f[0];
    r.alpha = std::stod(f[1]);
    r.d = std::stod(f[2]);
    r.tau = std::stod(f[3]);
    r.n = std::stol(f[4]);
    r.k = std::stol(f[5]);
    r.stat = f[6];
    r.value = std::stod(f[7]);
    r.se = std::stod(f[8]);
    r.reps = std::stol(f[9]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

ResultTable read_result_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return parse_result_csv(in);
}

std::vector<StatRow> ResultTable::select(const std::string& experiment, const std::string& stat,
                                         double alpha, double d, long k, long n) const {
  std::vector<StatRow> out;
  for (const StatRow& r : rows) {
    if (!experiment.empty() && r.experiment != experiment) continue;
    if (!stat.empty() && r.stat != stat) continue;
    if (!std::isnan(alpha) && r.alpha != alpha) continue;
    if (!std::isnan(d) && r.d != d) continue;
    if (k >= 0 && r.k != k) continue;
    if (n >= 0 && r.n != n) continue;
    out.push_back(r);
  }
  return out;
}

}  // namespace lmsv

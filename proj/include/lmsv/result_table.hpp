#pragma once

// Monte Carlo result rows and their CSV form.  Column order is fixed:
//   experiment,alpha,d,tau,n,k,stat,value,se,reps

#include <iosfwd>
#include <string>
#include <vector>

namespace lmsv {

struct StatRow {
  std::string experiment;
  double alpha = 0.0;
  double d = 0.0;
  double tau = 0.0;
  long n = 0;
  long k = 0;
  std::string stat;
  double value = 0.0;
  double se = 0.0;
  long reps = 0;

  bool operator==(const StatRow&) const = default;
};

struct ResultTable {
  std::vector<StatRow> rows;

  bool operator==(const ResultTable&) const = default;

  // Rows matching all nonempty/finite filters; NaN filters match anything,
  // negative n/k match anything.
  std::vector<StatRow> select(const std::string& experiment, const std::string& stat,
                              double alpha, double d, long k, long n = -1) const;
};

extern const char* const kResultCsvHeader;

std::string to_csv(const ResultTable& table);
void write_csv(const ResultTable& table, const std::string& path);
ResultTable parse_result_csv(std::istream& in);
ResultTable read_result_csv(const std::string& path);

// Round-trip-stable number formatting (shortest representation that parses
// back to the same double).
std::string format_double(double v);

}  // namespace lmsv

#pragma once

#include <string>
#include <vector>

#include "arsq/trainer.hpp"

namespace arsq {

// Round-trip-exact decimal form of a double (17 significant digits).
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

extern const std::vector<std::string> kRewardsColumns;
extern const std::vector<std::string> kTraceColumns;

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Throws std::runtime_error on unreadable or malformed input.
CsvTable read_csv(const std::string& path);

// Raised when a table does not match an expected schema; names the first
// offending column.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_schema(const CsvTable& table,
                  const std::vector<std::string>& expected,
                  const std::string& what);

// Trace rows in kTraceColumns order.
std::vector<std::vector<double>> trace_rows(const EpisodeTrace& trace);

void write_trace_csv(const std::string& path, const EpisodeTrace& trace);

}  // namespace arsq

#include "arsq/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arsq {

const std::vector<std::string> kRewardsColumns = {
    "iteration", "eval_episode", "total_reward",
    "running_avg_10", "sigma_R", "update_norm"};

const std::vector<std::string> kTraceColumns = {
    "time", "x", "y", "z", "vx", "vy", "vz", "phi", "theta", "psi",
    "p", "q", "r", "s1", "s2", "s3", "s4", "reward"};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);

  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw std::runtime_error("read_csv: bad number '" + cell + "' at " +
                                 path + ":" + std::to_string(line_no));
      row.push_back(v);
    }
    if (row.size() != table.header.size())
      throw std::runtime_error("read_csv: ragged row at " + path + ":" +
                               std::to_string(line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void check_schema(const CsvTable& table,
                  const std::vector<std::string>& expected,
                  const std::string& what) {
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= table.header.size())
      throw SchemaError(what + ": missing column '" + expected[i] + "'");
    if (table.header[i] != expected[i])
      throw SchemaError(what + ": expected column " + std::to_string(i + 1) +
                        " to be '" + expected[i] + "', got '" +
                        table.header[i] + "'");
  }
  if (table.header.size() > expected.size())
    throw SchemaError(what + ": unexpected extra column '" +
                      table.header[expected.size()] + "'");
}

std::vector<std::vector<double>> trace_rows(const EpisodeTrace& trace) {
  std::vector<std::vector<double>> rows;
  rows.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const QuadState& s = trace.states[i];
    const Eigen::Vector4d& cmd = trace.commands[i].speeds;
    rows.push_back({s.time, s.position.x(), s.position.y(), s.position.z(),
                    s.velocity.x(), s.velocity.y(), s.velocity.z(),
                    s.euler.x(), s.euler.y(), s.euler.z(),
                    s.body_rates.x(), s.body_rates.y(), s.body_rates.z(),
                    cmd[0], cmd[1], cmd[2], cmd[3], trace.rewards[i]});
  }
  return rows;
}

void write_trace_csv(const std::string& path, const EpisodeTrace& trace) {
  write_csv(path, kTraceColumns, trace_rows(trace));
}

}  // namespace arsq

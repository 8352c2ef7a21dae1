#include "inputsafe/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "inputsafe/config.hpp"
#include "inputsafe/error.hpp"

namespace inputsafe {

std::vector<std::string> csv_columns(int dim_x, int dim_u) {
  std::vector<std::string> c{"t"};
  for (int i = 0; i < dim_x; ++i) c.push_back("x_" + std::to_string(i));
  for (const char* p : {"u_", "v_", "mu_"}) {
    for (int i = 0; i < dim_u; ++i) c.push_back(p + std::to_string(i));
  }
  for (const char* p : {"h", "kappa", "clf_slack", "qp_status", "w_h_norm_max"}) c.push_back(p);
  return c;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const int nx = trace.empty() ? 1 : static_cast<int>(trace.front().x.size());
  const int nu = trace.empty() ? 1 : static_cast<int>(trace.front().u.size());
  const auto cols = csv_columns(nx, nu);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  std::string line;
  for (const auto& s : trace) {
    line = format_double(s.t);
    auto put = [&line](const Eigen::VectorXd& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) (line += ',') += format_double(v(i));
    };
    put(s.x);
    put(s.u);
    put(s.v);
    put(s.mu);
    (line += ',') += format_double(s.h);
    (line += ',') += format_double(s.kappa);
    (line += ',') += format_double(s.clf_slack);
    (line += ',') += to_string(s.qp_status);
    (line += ',') += format_double(s.w_h_norm_max());
    out << line << '\n';
  }
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::NotFound, "cannot open '" + path + "' for writing");
  write_trace_csv(out, trace);
}

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorCode::ParseError, "missing column '" + name + "'");
  return static_cast<int>(it - columns.begin());
}

double CsvTable::number(std::size_t row, int col) const {
  const auto& cell = rows.at(row).at(static_cast<std::size_t>(col));
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    // from_chars rejects "inf"/"nan" spellings produced by to_chars on some libs
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    if (cell == "nan" || cell == "-nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error(ErrorCode::ParseError, "row " + std::to_string(row + 2) + ", column '" +
                                           columns[static_cast<std::size_t>(col)] +
                                           "': not a number '" + cell + "'");
  }
  return v;
}

CsvTable read_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty CSV");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.columns.size()) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(t.rows.size() + 2) + " has " +
                                             std::to_string(cells.size()) + " cells, expected " +
                                             std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open '" + path + "'");
  return read_csv(in);
}

std::string RunReport::to_line() const {
  std::ostringstream o;
  o << "scenario=" << scenario << " variant=" << variant << " min_h=" << format_double(min_h)
    << " final_x_norm=" << format_double(final_x_norm) << " n_slack=" << n_slack
    << " n_infeasible=" << n_infeasible << " wall_time=" << format_double(wall_time)
    << " csv=" << csv_path;
  return o.str();
}

RunReport summarize(const Trace& trace) {
  RunReport r;
  r.min_h = std::numeric_limits<double>::infinity();
  for (const auto& s : trace) {
    r.min_h = std::min(r.min_h, s.h);
    if (s.qp_status == QPStatus::SlackActive) ++r.n_slack;
    if (s.qp_status == QPStatus::Infeasible) ++r.n_infeasible;
  }
  if (!trace.empty()) r.final_x_norm = trace.back().x.norm();
  return r;
}

RunReport summarize(const CsvTable& table) {
  RunReport r;
  r.min_h = std::numeric_limits<double>::infinity();
  const int h = table.column("h");
  const int status = table.column("qp_status");
  std::vector<int> xs;
  for (int i = 0;; ++i) {
    const auto it = std::find(table.columns.begin(), table.columns.end(), "x_" + std::to_string(i));
    if (it == table.columns.end()) break;
    xs.push_back(static_cast<int>(it - table.columns.begin()));
  }
  if (xs.empty()) table.column("x_0");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    r.min_h = std::min(r.min_h, table.number(i, h));
    const auto& st = table.rows[i][static_cast<std::size_t>(status)];
    if (st == "slack") ++r.n_slack;
    else if (st == "infeasible") ++r.n_infeasible;
    else if (st != "ok") throw Error(ErrorCode::ParseError, "bad qp_status '" + st + "'");
  }
  if (!table.rows.empty()) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) {
      x(static_cast<Eigen::Index>(k)) = table.number(table.rows.size() - 1, xs[k]);
    }
    r.final_x_norm = x.norm();
  }
  return r;
}

}  // namespace inputsafe

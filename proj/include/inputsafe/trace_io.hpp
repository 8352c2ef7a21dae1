#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "inputsafe/sim.hpp"

namespace inputsafe {

// t,x_0..,u_0..,v_0..,mu_0..,h,kappa,clf_slack,qp_status,w_h_norm_max
std::vector<std::string> csv_columns(int dim_x, int dim_u);

void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::string& path, const Trace& trace);  // creates parent dirs

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // throws ParseError naming the column
  double number(std::size_t row, int col) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

struct RunReport {
  std::string scenario;
  std::string variant;
  double min_h = 0.0;
  double final_x_norm = 0.0;
  int n_slack = 0;
  int n_infeasible = 0;
  double wall_time = 0.0;
  std::string csv_path;

  std::string to_line() const;
};

// Statistics over the logged rows only, so a re-read CSV reproduces them.
RunReport summarize(const Trace& trace);
RunReport summarize(const CsvTable& table);

}  // namespace inputsafe

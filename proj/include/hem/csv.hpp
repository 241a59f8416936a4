#pragma once

// CSV and plot-script output.  Numbers are written with shortest round-trip
// formatting (std::to_chars), so identical configurations produce
// byte-identical files.  Plot scripts are self-contained gnuplot files
// written next to the CSV they render.

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "hem/errors.hpp"
#include "hem/harness.hpp"
#include "hem/integrator.hpp"
#include "hem/systems.hpp"

namespace hem {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw UsageError("CsvTable: row width mismatch");
    rows_.push_back(cells);
  }

  void add_row(const Vec& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double x : cells) s.push_back(format_double(x));
    add_row(s);
  }

  std::string str() const {
    std::string out = join(header_);
    for (const auto& row : rows_) out += join(row);
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + path + "'");
    f << str();
  }

 private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    line += '\n';
    return line;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Trajectory CSV: t, q..., p..., energy, energy_error, newton_iters, v_defect.
template <class Sys>
CsvTable trajectory_table(const Sys& sys, const Trajectory& traj) {
  const int d = sys.dim();
  std::vector<std::string> header{"t"};
  if (d == 1) {
    header.push_back("q");
    header.push_back("p");
  } else {
    for (int i = 0; i < d; ++i) header.push_back("q" + std::to_string(i));
    for (int i = 0; i < d; ++i) header.push_back("p" + std::to_string(i));
  }
  header.insert(header.end(), {"energy", "energy_error", "newton_iters", "v_defect"});

  CsvTable table(std::move(header));
  const double h0 = traj.points.empty() ? 0.0 : energy(sys, traj.points.front());
  for (size_t k = 0; k < traj.points.size(); ++k) {
    const PhasePoint& pt = traj.points[k];
    std::vector<std::string> row{format_double(pt.t)};
    for (double x : pt.q) row.push_back(format_double(x));
    for (double x : pt.p) row.push_back(format_double(x));
    const double e = energy(sys, pt);
    row.push_back(format_double(e));
    row.push_back(format_double(e - h0));
    if (k == 0) {
      row.push_back("0");
      row.push_back(format_double(0.0));
    } else {
      const StepDiagnostics& diag = traj.step_info[k - 1];
      row.push_back(std::to_string(diag.newton_iterations));
      row.push_back(format_double(diag.v_defect));
    }
    table.add_row(row);
  }
  return table;
}

inline CsvTable convergence_table(const ConvergenceReport& report) {
  CsvTable table({"h", "error"});
  for (const auto& [h, err] : report.rows) table.add_row(Vec{h, err});
  return table;
}

inline CsvTable energy_table(const EnergyReport& report) {
  CsvTable table({"t", "energy_error"});
  for (const auto& [t, dh] : report.rows) table.add_row(Vec{t, dh});
  return table;
}

inline CsvTable work_precision_table(const std::vector<WorkPrecisionRow>& rows) {
  CsvTable table({"method", "h", "wall_time_s", "error"});
  for (const auto& r : rows)
    table.add_row({r.method, format_double(r.h), format_double(r.seconds), format_double(r.error)});
  return table;
}

inline std::string plot_script_path(const std::string& csv_path) {
  const size_t dot = csv_path.rfind('.');
  const std::string stem = dot == std::string::npos ? csv_path : csv_path.substr(0, dot);
  return stem + ".gp";
}

/// Log-log convergence plot with a dotted reference-order line anchored at
/// the first data point.
inline void write_loglog_plot(const std::string& csv_path, const ConvergenceReport& report,
                              const std::string& ylabel) {
  const std::string path = plot_script_path(csv_path);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open plot script '" + path + "'");
  const double order = std::round(report.fit.slope);
  const double h0 = report.rows.front().first;
  const double e0 = report.rows.front().second;
  f << "# gnuplot script; run: gnuplot -p " << path << "\n"
    << "set datafile separator ','\n"
    << "set logscale xy\n"
    << "set xlabel 'h'\n"
    << "set ylabel '" << ylabel << "'\n"
    << "set key top left\n"
    << "set title '" << report.system << ", " << report.method << " (fitted slope "
    << format_double(report.fit.slope) << ")'\n"
    << "ref(x) = " << format_double(e0) << " * (x / " << format_double(h0) << ")**" << order << "\n"
    << "plot '" << csv_path << "' skip 1 using 1:2 with linespoints title '" << report.method << "', \\\n"
    << "     ref(x) with lines dashtype 2 title 'order " << format_double(order) << "'\n";
}

inline void write_series_plot(const std::string& csv_path, const std::string& title,
                              const std::string& xlabel, const std::string& ylabel, int ycol) {
  const std::string path = plot_script_path(csv_path);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open plot script '" + path + "'");
  f << "# gnuplot script; run: gnuplot -p " << path << "\n"
    << "set datafile separator ','\n"
    << "set xlabel '" << xlabel << "'\n"
    << "set ylabel '" << ylabel << "'\n"
    << "set title '" << title << "'\n"
    << "plot '" << csv_path << "' skip 1 using 1:" << ycol << " with lines title '" << ylabel << "'\n";
}

/// Work-precision plot: one series per method.
inline void write_wp_plot(const std::string& csv_path, const std::vector<std::string>& methods) {
  const std::string path = plot_script_path(csv_path);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open plot script '" + path + "'");
  f << "# gnuplot script; run: gnuplot -p " << path << "\n"
    << "set datafile separator ','\n"
    << "set logscale xy\n"
    << "set xlabel 'wall time [s]'\n"
    << "set ylabel 'error'\n"
    << "plot ";
  for (size_t i = 0; i < methods.size(); ++i) {
    if (i) f << ", \\\n     ";
    f << "'" << csv_path << "' skip 1 using 3:(stringcolumn(1) eq '" << methods[i]
      << "' ? $4 : NaN) with linespoints title '" << methods[i] << "'";
  }
  f << "\n";
}

}  // namespace hem

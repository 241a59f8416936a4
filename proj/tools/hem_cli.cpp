// Command-line harness: trajectory runs, convergence and variational-order
// studies, long-run energy tracking, and work-precision tables, with CSV
// output and optional gnuplot script emission.
//
// Exit codes: 0 success, 2 usage error, 3 solver/oracle failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "hem/hem.hpp"

namespace {

hem::Vec parse_csv_doubles(const std::string& text, const char* what) {
  hem::Vec out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw hem::UsageError(std::string("could not parse ") + what + " value '" + cell + "'");
    }
  }
  if (out.empty()) throw hem::UsageError(std::string(what) + ": empty list");
  return out;
}

template <class F>
auto with_system(const std::string& name, F&& f) {
  return std::visit([&](const auto& sys) { return f(sys); }, hem::builtin(name));
}

struct CliState {
  hem::ExperimentConfig cfg;
  std::string q0_text = "1";
  std::string p0_text = "0";
  std::string h_list_text;

  void finalize() {
    cfg.q0 = parse_csv_doubles(q0_text, "--q0");
    cfg.p0 = parse_csv_doubles(p0_text, "--p0");
    if (cfg.q0.size() != cfg.p0.size()) throw hem::UsageError("--q0 and --p0 must have equal length");
    if (!h_list_text.empty()) cfg.h_list = parse_csv_doubles(h_list_text, "--h-list");
  }

  void emit(const hem::CsvTable& table) const {
    if (cfg.out.empty()) {
      if (cfg.plot) throw hem::UsageError("--plot requires --out");
      std::cout << table.str();
    } else {
      table.write(cfg.out);
      std::cout << "wrote " << cfg.out << "\n";
    }
  }
};

void add_shared_options(CLI::App* sub, CliState& st, bool with_h_list) {
  sub->add_option("--system", st.cfg.system, "system: sho | pendulum | duffing")->capture_default_str();
  sub->add_option("--method", st.cfg.method, "method: hem | gauss2 | midpoint")->capture_default_str();
  sub->add_option("--n", st.cfg.n, "Hermite parameter (interpolant degree 2n-1)")->capture_default_str();
  sub->add_option("--m", st.cfg.m, "quadrature correction terms (-1: floor(n/2))")->capture_default_str();
  sub->add_option("--q0", st.q0_text, "initial position, comma-separated")->capture_default_str();
  sub->add_option("--p0", st.p0_text, "initial momentum, comma-separated")->capture_default_str();
  sub->add_option("--h", st.cfg.h, "step size");
  if (with_h_list) sub->add_option("--h-list", st.h_list_text, "step sizes, comma-separated, decreasing");
  sub->add_option("--steps", st.cfg.steps, "number of steps");
  sub->add_option("--t-end", st.cfg.t_end, "final time (alternative to --steps)");
  sub->add_option("--out", st.cfg.out, "output CSV path (default: stdout)");
  sub->add_flag("--plot", st.cfg.plot, "emit a gnuplot script next to the CSV");
  sub->add_option("--tol", st.cfg.tol, "solver tolerance")->capture_default_str();
  sub->set_config("--config", "", "key=value config file; command-line flags win");
}

void print_fit(const hem::ConvergenceReport& report) {
  std::cout << report.system << " " << report.method
            << (report.component == "qp" || report.component == "Ld" ? "" : " component " + report.component)
            << ": slope " << hem::format_double(report.fit.slope) << " over "
            << report.rows.size() << " step sizes (max log residual "
            << hem::format_double(report.fit.max_residual) << ")\n";
  if (!report.fit.asymptotic)
    std::cout << "warning: fit residuals exceed 0.1; data may not be in the asymptotic regime\n";
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Variational integrators built on two-point Hermite interpolants and Euler-Maclaurin quadrature"};
  app.require_subcommand(1);
  CliState st;

  CLI::App* integrate = app.add_subcommand("integrate", "run a trajectory, write t,q,p,energy CSV");
  add_shared_options(integrate, st, false);
  integrate->callback([&] {
    st.finalize();
    if (st.cfg.h == 0.0) throw hem::UsageError("integrate: --h is required");
    with_system(st.cfg.system, [&](const auto& sys) {
      const hem::MethodConfig mc = st.cfg.method_config();
      const int steps = st.cfg.resolve_steps(st.cfg.h);
      const hem::Trajectory traj = hem::run(sys, mc, {st.cfg.q0, st.cfg.p0, 0.0}, st.cfg.h, steps);
      st.emit(hem::trajectory_table(sys, traj));
      if (st.cfg.plot) hem::write_series_plot(st.cfg.out, std::string(sys.name()) + ", " + mc.descriptor(),
                                              "t", "energy_error", 2 * sys.dim() + 3);
      if (traj.truncated)
        std::cout << "warning: run truncated after " << traj.step_info.size()
                  << " steps: " << traj.failure << "\n";
      return 0;
    });
  });

  CLI::App* converge = app.add_subcommand("converge", "global-error convergence study over an h-list");
  add_shared_options(converge, st, true);
  converge->add_option("--component", st.cfg.component, "error component: qp | q | p")->capture_default_str();
  converge->callback([&] {
    st.finalize();
    with_system(st.cfg.system, [&](const auto& sys) {
      if (st.cfg.steps == 0 && st.cfg.t_end == 0.0) st.cfg.t_end = 10.0;
      const hem::ConvergenceReport report = hem::converge_study(sys, st.cfg);
      st.emit(hem::convergence_table(report));
      if (st.cfg.plot) hem::write_loglog_plot(st.cfg.out, report, "global error at t-end");
      print_fit(report);
      return 0;
    });
  });

  CLI::App* ldorder = app.add_subcommand("ldorder", "discrete-Lagrangian accuracy against the exact L_d");
  add_shared_options(ldorder, st, true);
  ldorder->callback([&] {
    st.finalize();
    with_system(st.cfg.system, [&](const auto& sys) {
      const hem::ConvergenceReport report = hem::ldorder_study(sys, st.cfg);
      st.emit(hem::convergence_table(report));
      if (st.cfg.plot) hem::write_loglog_plot(st.cfg.out, report, "|L_d - L_d^E|");
      print_fit(report);
      return 0;
    });
  });

  CLI::App* energy = app.add_subcommand("energy", "long-run energy error study");
  add_shared_options(energy, st, false);
  energy->callback([&] {
    st.finalize();
    with_system(st.cfg.system, [&](const auto& sys) {
      const hem::EnergyReport report = hem::energy_study(sys, st.cfg);
      st.emit(hem::energy_table(report));
      if (st.cfg.plot) hem::write_series_plot(st.cfg.out, report.system + ", " + report.method,
                                              "t", "energy_error", 2);
      std::cout << report.system << " " << report.method << ": max |H - H0| "
                << hem::format_double(report.max_abs) << ", drift slope "
                << hem::format_double(report.drift_slope) << "\n";
      if (report.truncated) std::cout << "warning: run truncated\n";
      return 0;
    });
  });

  CLI::App* wp = app.add_subcommand("wp", "work-precision: wall time against global error");
  add_shared_options(wp, st, true);
  wp->callback([&] {
    st.finalize();
    with_system(st.cfg.system, [&](const auto& sys) {
      if (st.cfg.steps == 0 && st.cfg.t_end == 0.0) st.cfg.t_end = 10.0;
      const auto rows = hem::work_precision(sys, st.cfg);
      st.emit(hem::work_precision_table(rows));
      if (st.cfg.plot) {
        std::vector<std::string> methods;
        for (const auto& r : rows)
          if (methods.empty() || methods.back() != r.method) methods.push_back(r.method);
        hem::write_wp_plot(st.cfg.out, methods);
      }
      return 0;
    });
  });

  CLI::App* systems = app.add_subcommand("systems", "list builtin systems");
  systems->callback([&] {
    std::cout << "name      dim  potential\n"
              << "sho       1    q^2/2\n"
              << "pendulum  1    1 - cos(q)\n"
              << "duffing   1    -q^2/2 + q^4/4\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const hem::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const hem::CapabilityError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const hem::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const hem::OracleError& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

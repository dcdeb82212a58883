#include "haantjes/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "haantjes/certifier.hpp"
#include "haantjes/hydro.hpp"
#include "haantjes/scenarios.hpp"

namespace haantjes {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_manifest_error(const Error& e) {
  return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const UnknownVariable*>(&e) ||
         dynamic_cast<const ArityError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
         dynamic_cast<const EvalError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
         dynamic_cast<const CflViolation*>(&e) || dynamic_cast<const DimensionMismatch*>(&e);
}

/// Maps exceptions to exit codes around a command body.
template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const PreconditionViolated& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_manifest_error(e) ? kExitManifest : kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

bool write_text(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
  if (path.empty() || path == "-") {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  f << text;
  return true;
}

}  // namespace

int cmd_check(const CheckCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto m = load_manifest(cmd.manifest);
    const auto report = run_checks(m, cmd.options);
    if (cmd.report_path == "-") {
      out << report_to_json(report, cmd.timing);
    } else {
      out << report_to_text(report);
      if (!cmd.report_path.empty() && !write_text(cmd.report_path, report_to_json(report, cmd.timing), out, err)) {
        return static_cast<int>(kExitInternal);
      }
    }
    if (report.records.empty()) err << "warning: no check matched the --only selection\n";
    return report.overall == Verdict::Pass ? static_cast<int>(kExitPass) : static_cast<int>(kExitFail);
  });
}

int cmd_torsion(const TorsionCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto m = load_manifest(cmd.manifest);
    const auto f = m.field(cmd.field);
    const int n = m.chart.dim;
    const std::vector<double> p = cmd.at.value_or(m.chart.base);
    if (static_cast<int>(p.size()) != n) {
      throw SchemaError("--at: expected " + std::to_string(n) + " coordinates, got " + std::to_string(p.size()));
    }
    m.chart.require_inside(p);
    std::ostringstream os;
    if (cmd.kind == "nijenhuis" || cmd.kind == "haantjes") {
      if (f->valence() != Valence::Tensor11) throw SchemaError("--field: " + cmd.field + " is not a (1,1) field");
      const auto t = cmd.kind == "nijenhuis" ? nijenhuis_torsion(*f, p) : haantjes_torsion(*f, p);
      const char* sym = cmd.kind == "nijenhuis" ? "T" : "H";
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int q = l + 1; q < n; ++q)
            os << sym << "^" << j + 1 << "_" << l + 1 << q + 1 << " = " << num(t[(j * n + l) * n + q]) << "\n";
    } else if (cmd.kind == "yano-ako") {
      if (f->valence() != Valence::Tensor12) throw SchemaError("--field: " + cmd.field + " is not a (1,2) field");
      const auto v = yano_ako_bracket(*f, p, cmd.enforce_pre, cmd.tol.value_or(m.checks.tol));
      if (v.precondition_warning) {
        err << "warning: C is not symmetric and associative here (symmetry " << num(v.symmetry_residual)
            << ", associativity " << num(v.associativity_residual) << ")\n";
      }
      for (int mm = 0; mm < n; ++mm)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              for (int r = 0; r < n; ++r)
                os << "[C,C]^" << mm + 1 << "_" << j + 1 << k + 1 << l + 1 << r + 1 << " = "
                   << num(v.components[(((mm * n + j) * n + k) * n + l) * n + r]) << "\n";
    } else {
      throw SchemaError("--kind: expected nijenhuis, haantjes or yano-ako, got '" + cmd.kind + "'");
    }
    out << "# " << cmd.kind << " of " << cmd.field << " at (";
    for (int i = 0; i < n; ++i) out << (i ? ", " : "") << num(p[i]);
    out << ")\n" << os.str();
    return static_cast<int>(kExitPass);
  });
}

int cmd_simulate(const SimulateCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto m = load_manifest(cmd.manifest);
    const auto c = candidate_from_manifest(m);
    const int n = c.dim();
    auto op_index = [&](int k, const char* what) {
      if (k < 1 || k > n) throw SchemaError(std::string(what) + ": flow index must be in 1.." + std::to_string(n));
      return k - 1;
    };
    const auto u0 = initial_state(m.chart, m.simulate, cmd.grid);
    std::ostringstream csv;

    if (cmd.pair) {
      const int j = op_index(cmd.pair->first, "--pair"), l = op_index(cmd.pair->second, "--pair");
      const auto op = cmd.spatial == "cd4" ? SpatialOperator::CentralDifference4 : SpatialOperator::Fourier;
      const auto r = commuting_flows_check(u0, *c.operators[j], *c.operators[l], m.chart,
                                           {cmd.dt, cmd.dt / 2, cmd.dt / 4}, op);
      csv << "dt,discrepancy,order\n";
      for (std::size_t i = 0; i < r.dts.size(); ++i) {
        csv << num(r.dts[i]) << "," << num(r.discrepancy[i]) << "," << (i ? num(r.orders[i - 1]) : "") << "\n";
      }
      return write_text(cmd.out_path, csv.str(), out, err) ? static_cast<int>(kExitPass)
                                                           : static_cast<int>(kExitInternal);
    }

    const int k = op_index(cmd.flow, "--flow");
    const auto op = cmd.spatial == "fourier" ? SpatialOperator::Fourier : SpatialOperator::CentralDifference4;
    if (cmd.steps < 1 || !(cmd.dt > 0)) throw SchemaError("--steps and --dt must be positive");
    const int every = cmd.every > 0 ? cmd.every : std::max(1, cmd.steps / 10);
    const bool translation = m.candidate.operators[k] == "Id";
    const PotentialSquare potentials(c);
    const auto d0 = grid_integrals(u0, conserved_densities(potentials, u0));
    std::vector<double> spread(static_cast<std::size_t>(n), 0.0);
    {
      const auto dens = conserved_densities(potentials, u0);
      for (int q = 0; q < n; ++q) {
        for (const auto& row : dens) spread[q] += std::abs(row[q] - d0[q] / u0.length);
        spread[q] *= u0.dx();
        if (spread[q] == 0.0) spread[q] = 1.0;
      }
    }
    csv << "t";
    for (int q = 0; q < n; ++q) csv << ",drift_A" << q + 1;
    if (translation) csv << ",translation_error";
    csv << "\n";
    auto row = [&](const GridState& s) {
      const auto im = grid_integrals(s, conserved_densities(potentials, s));
      csv << num(s.time);
      for (int q = 0; q < n; ++q) csv << "," << num(std::abs(im[q] - d0[q]) / spread[q]);
      if (translation) {
        // u_t = u_x moves the profile left: u(x, t) = u0(x + t).
        GridState exact = s;
        for (int i = 0; i < s.points; ++i)
          for (int q = 0; q < n; ++q) {
            const int mode = q < static_cast<int>(m.simulate.modes.size()) ? m.simulate.modes[q] : q + 1;
            const double phase = q < static_cast<int>(m.simulate.phases.size()) ? m.simulate.phases[q] : 0.0;
            exact.u[i * n + q] = m.chart.base[q] + m.simulate.amplitude *
                                 std::sin(2 * std::numbers::pi * mode * (s.x(i) + s.time) / s.length + phase);
          }
        csv << "," << num(grid_l2_distance(s, exact));
      }
      csv << "\n";
    };
    row(u0);
    int count = 0;
    const auto r = integrate_flow(u0, *c.operators[k], m.chart, cmd.dt, cmd.steps, op, [&](const GridState& s) {
      if (++count % every == 0) row(s);
      return true;
    });
    if (count % every != 0) row(r.state);
    if (r.blew_up) err << "note: gradient blow-up at t = " << num(r.breakdown_time) << "\n";
    if (r.left_chart) err << "note: the solution left the chart box at t = " << num(r.breakdown_time) << "\n";
    return write_text(cmd.out_path, csv.str(), out, err) ? static_cast<int>(kExitPass)
                                                         : static_cast<int>(kExitInternal);
  });
}

int cmd_scenarios(std::ostream& out) {
  for (const auto& name : scenario_names()) {
    const auto m = parse_manifest(*scenario_text(name), "scenario:" + name);
    out << name << "  " << m.description << "\n";
  }
  return kExitPass;
}

}  // namespace haantjes

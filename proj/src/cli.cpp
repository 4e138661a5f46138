#include "qres/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qres/catalog.hpp"
#include "qres/errors.hpp"
#include "qres/model.hpp"
#include "qres/oracle.hpp"
#include "qres/reach.hpp"
#include "qres/report.hpp"
#include "qres/resilience.hpp"
#include "qres/sim.hpp"

namespace qres::cli {

namespace {

using report::json;

struct Options {
  std::string model;
  std::string lost;
  bool all = false;
  int order = 0;  // 0: use the model's order
  std::string direction;
  std::string out;
  double tol = 1e-9;
  std::uint64_t seed = 7;
  int grid = 51;
  int samples = 2000;
  std::string scales = "0.5,2,10";
  std::string scenario = "octo-vertical-lag";
  double tau = 0.1;
  double target_speed = 1.0;
  std::optional<double> dt;
  bool up = false;
  std::string input;
  double horizon = 1.0;
  double corrupt_theory = 1.0;
  bool tau_given = false;
};

double parse_number(const std::string& text, const char* what) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ArgumentError(std::string("invalid ") + what + " component '" + text + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

Eigen::VectorXd parse_vector(const std::string& text, const char* what) {
  if (text.empty()) throw ArgumentError(std::string("missing ") + what);
  const auto parts = split_commas(text);
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_number(parts[i], what);
  return v;
}

// 1-based list on the command line, 0-based internally. Empty or "all" selects
// every column.
std::vector<int> parse_lost(const Options& opt, Eigen::Index columns, bool& is_all) {
  is_all = opt.all || opt.lost.empty() || opt.lost == "all";
  std::vector<int> out;
  if (is_all) {
    for (Eigen::Index j = 0; j < columns; ++j) out.push_back(static_cast<int>(j));
    return out;
  }
  for (const auto& part : split_commas(opt.lost)) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size())
      throw ArgumentError("invalid --lost entry '" + part + "'");
    if (v < 1 || v > columns)
      throw ArgumentError("--lost column " + part + " out of range 1.." + std::to_string(columns));
    out.push_back(v - 1);
  }
  return out;
}

Direction parse_direction(const Options& opt, Eigen::Index n) {
  Direction d(parse_vector(opt.direction, "--direction"));
  if (d.size() != n)
    throw ArgumentError("--direction has " + std::to_string(d.size()) + " components, model has " +
                        std::to_string(n) + " states");
  return d;
}

std::vector<double> parse_scales(const std::string& text) {
  const Eigen::VectorXd v = parse_vector(text, "--scales");
  return {v.data(), v.data() + v.size()};
}

int effective_order(const Options& opt, const IntegratorSystem& sys) {
  if (opt.order < 0) throw ArgumentError("--order must be positive");
  return opt.order > 0 ? opt.order : sys.order();
}

void write_json(const std::string& path, const json& doc) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw Error("cannot write report file '" + path + "'");
  f << doc.dump(2) << "\n";
}

std::string pad(const std::string& s, std::size_t width) {
  // Column widths are measured in code points so "∞" lines up.
  std::size_t cps = 0;
  for (unsigned char ch : s)
    if ((ch & 0xC0) != 0x80) ++cps;
  return s + std::string(cps < width ? width - cps : 1, ' ');
}

std::string lost_label(const std::vector<int>& lost) {
  std::string s;
  for (std::size_t i = 0; i < lost.size(); ++i) s += (i ? "," : "") + std::to_string(lost[i] + 1);
  return s;
}

json lost_json(const std::vector<int>& lost) {
  json arr = json::array();
  for (int j : lost) arr.push_back(j + 1);
  return arr;
}

void print_header(std::ostream& out, const IntegratorSystem& sys, int order) {
  out << "model: " << (sys.name().empty() ? "(unnamed)" : sys.name()) << " (n=" << sys.state_dim()
      << ", inputs=" << sys.input_dim() << ", order " << order << ")\n";
}

int cmd_check(const Options& opt, std::ostream& out) {
  const IntegratorSystem sys = catalog::resolve(opt.model);
  const int order = effective_order(opt, sys);
  bool is_all = false;
  const auto cols = parse_lost(opt, sys.input_dim(), is_all);
  const bool controllable = resilience::check_controllability(sys);

  print_header(out, sys, order);
  out << "controllable: " << (controllable ? "yes" : "no") << "\n";
  if (!controllable) out << "system not controllable: not resilient to any loss\n";
  out << pad("col", 5) << pad("r(C)", 12) << pad("r(-C)", 12) << pad("r_q", 12) << pad("r_kq", 12)
      << "verdict\n";

  json doc;
  doc["command"] = "check";
  doc["model"] = sys.name();
  doc["order"] = order;
  doc["controllable"] = controllable;
  doc["columns"] = json::array();
  Eigen::VectorXd rq(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const ActuatorSplit sp = split(sys, {cols[i]});
    auto rep = resilience::quantitative_resilience(sp, order);
    rep.containment = resilience::polytope_containment_check(sp);
    rq[static_cast<Eigen::Index>(i)] = rep.r_kq;
    out << pad(std::to_string(cols[i] + 1), 5) << pad(report::display(rep.r_plus), 12)
        << pad(report::display(rep.r_minus), 12) << pad(report::display(rep.r_q), 12)
        << pad(report::display(rep.r_kq), 12) << (rep.resilient ? "resilient" : "not resilient");
    for (const auto& note : rep.diagnostics) out << "; " << note;
    out << "\n";
    doc["columns"].push_back(report::to_json(rep));
  }
  out << (order == 1 ? "r_q = " : "r_" + std::to_string(order) + ",q = ") << report::display(rq, 4) << "\n";
  write_json(opt.out, doc);
  return kOk;
}

int cmd_ratio(const Options& opt, std::ostream& out) {
  const IntegratorSystem sys = catalog::resolve(opt.model);
  const int order = effective_order(opt, sys);
  const Direction d = parse_direction(opt, sys.state_dim());
  bool is_all = false;
  const auto cols = parse_lost(opt, sys.input_dim(), is_all);
  std::vector<std::vector<int>> splits;
  if (is_all) {
    for (int j : cols) splits.push_back({j});
  } else {
    splits.push_back(cols);
  }

  const auto nominal = reach::nominal_reach_time(sys, d, order);
  print_header(out, sys, order);
  out << "direction: " << report::display(d.vector()) << "\n";
  out << "T_N* = " << report::display(nominal.time) << "\n";
  out << pad("lost", 10) << pad("T_M*", 14) << "t(d)\n";

  json doc;
  doc["command"] = "ratio";
  doc["model"] = sys.name();
  doc["order"] = order;
  doc["direction"] = report::to_json(d.vector());
  doc["nominal_time"] = report::to_json(nominal.time);
  doc["splits"] = json::array();
  Eigen::VectorXd ratios(static_cast<Eigen::Index>(splits.size()));
  for (std::size_t i = 0; i < splits.size(); ++i) {
    const ActuatorSplit sp = split(sys, splits[i]);
    const auto m = reach::malfunctioning_reach_time(sp, d, order);
    ExtendedReal t(1.0);
    if (!d.is_zero()) {
      t = (m.time.is_finite() && nominal.time.is_finite())
              ? ExtendedReal(m.time.value() / nominal.time.value())
              : ExtendedReal::infinity();
    }
    ratios[static_cast<Eigen::Index>(i)] = t.value();
    out << pad(lost_label(splits[i]), 10) << pad(report::display(m.time), 14) << report::display(t) << "\n";
    json entry = {{"lost", lost_json(splits[i])},
                  {"malfunctioning", report::to_json(m)},
                  {"ratio", report::to_json(t)}};
    doc["splits"].push_back(std::move(entry));
  }
  if (splits.size() > 1) out << "t(d) = " << report::display(ratios, 5) << "\n";
  write_json(opt.out, doc);
  return kOk;
}

int cmd_reach(const Options& opt, std::ostream& out) {
  const IntegratorSystem sys = catalog::resolve(opt.model);
  const int order = effective_order(opt, sys);
  const Direction d = parse_direction(opt, sys.state_dim());
  const auto nominal = reach::nominal_reach_time(sys, d, order);

  print_header(out, sys, order);
  out << "direction: " << report::display(d.vector()) << "\n";
  out << "nominal T* = " << report::display(nominal.time) << "\n";
  if (nominal.optimizer_u) out << "  u_bar* = " << report::display(*nominal.optimizer_u) << "\n";

  json doc;
  doc["command"] = "reach";
  doc["model"] = sys.name();
  doc["order"] = order;
  doc["direction"] = report::to_json(d.vector());
  doc["nominal"] = report::to_json(nominal);
  if (!opt.lost.empty() || opt.all) {
    bool is_all = false;
    const auto cols = parse_lost(opt, sys.input_dim(), is_all);
    const ActuatorSplit sp = split(sys, cols);
    const auto m = reach::malfunctioning_reach_time(sp, d, order);
    out << "malfunctioning T* (lost " << lost_label(cols) << ") = " << report::display(m.time) << "\n";
    if (m.optimizer_w) out << "  w* = " << report::display(*m.optimizer_w) << "\n";
    if (m.optimizer_u) out << "  u* = " << report::display(*m.optimizer_u) << "\n";
    doc["lost"] = lost_json(cols);
    doc["malfunctioning"] = report::to_json(m);
  }
  write_json(opt.out, doc);
  return kOk;
}

int cmd_oracle(const Options& opt, std::ostream& out) {
  const IntegratorSystem sys = catalog::resolve(opt.model);
  bool is_all = false;
  const auto cols = parse_lost(opt, sys.input_dim(), is_all);
  std::vector<std::vector<int>> splits;
  if (is_all) {
    for (int j : cols) splits.push_back({j});
  } else {
    splits.push_back(cols);
  }
  std::optional<Direction> d;
  if (!opt.direction.empty()) d = parse_direction(opt, sys.state_dim());
  const std::vector<double> scales = parse_scales(opt.scales);
  if (!(opt.tol >= 0.0)) throw ArgumentError("--tol must be nonnegative");

  print_header(out, sys, 1);
  json doc;
  doc["command"] = "oracle";
  doc["model"] = sys.name();
  doc["tolerance"] = opt.tol;
  doc["seed"] = opt.seed;
  doc["splits"] = json::array();
  bool failed = false;

  // Re-evaluates a scan against (possibly corrupted) theory with the CLI tolerance.
  auto judge = [&](oracle::ScanReport& s) {
    if (opt.corrupt_theory != 1.0 && s.theory_value.is_finite())
      s.theory_value = ExtendedReal(s.theory_value.value() * opt.corrupt_theory);
    s.max_violation = oracle::violation(s.worst_value, s.theory_value, opt.tol);
    if (s.max_violation > 0.0) failed = true;
    return s.max_violation > 0.0 ? "VIOLATION" : "ok";
  };

  for (const auto& lost : splits) {
    const ActuatorSplit sp = split(sys, lost);
    json entry;
    entry["lost"] = lost_json(lost);
    out << "lost " << lost_label(lost) << ":\n";
    if (d) {
      auto g = oracle::grid_worst_w(sp, *d, opt.grid);
      const char* verdict = judge(g);
      out << "  grid_worst_w: grid max " << report::display(g.worst_value, 10) << ", theory "
          << report::display(g.theory_value, 10) << ", violation " << report::display(g.max_violation)
          << " [" << verdict << "]\n";
      entry["grid_worst_w"] = report::to_json(g);
      const double h = oracle::homogeneity_probe(sp, *d, scales);
      const bool h_ok = h <= 1e-8;
      if (!h_ok) failed = true;
      out << "  homogeneity_probe: max relative error " << report::display(h) << " ["
          << (h_ok ? "ok" : "VIOLATION") << "]\n";
      entry["homogeneity_error"] = report::to_json(ExtendedReal(h));
    }
    if (lost.size() == 1) {
      const auto rq = resilience::quantitative_resilience(sp);
      if (rq.resilient && !sp.c().col(0).isZero(0.0)) {
        auto s = oracle::direction_scan(sp, opt.samples, opt.seed);
        const char* verdict = judge(s);
        out << "  direction_scan: sampled max " << report::display(s.worst_value, 10) << ", theory "
            << report::display(s.theory_value, 10) << ", violation " << report::display(s.max_violation)
            << " [" << verdict << "]\n";
        entry["direction_scan"] = report::to_json(s);
      } else {
        out << "  direction_scan: skipped (split not resilient)\n";
        entry["direction_scan"] = nullptr;
      }
    }
    doc["splits"].push_back(std::move(entry));
  }
  doc["passed"] = !failed;
  write_json(opt.out, doc);
  out << (failed ? "oracle: VIOLATION\n" : "oracle: all checks passed\n");
  return failed ? kOracleViolation : kOk;
}

void write_run(const std::string& prefix, const sim::ScenarioRun& run, std::ostream& out) {
  if (prefix.empty()) return;
  run.nominal.write_csv(prefix + "_nominal.csv");
  run.malfunctioning.write_csv(prefix + "_malfunctioning.csv");
  out << "wrote " << prefix << "_nominal.csv, " << prefix << "_malfunctioning.csv\n";
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  if (opt.scenario == "custom") {
    const IntegratorSystem sys = catalog::resolve(opt.model);
    const Eigen::VectorXd u = parse_vector(opt.input, "--input");
    if (u.size() != sys.input_dim()) throw ArgumentError("--input length does not match the model");
    sim::Trajectory tr;
    const bool lag = opt.tau_given;
    if (lag) {
      tr = sim::integrate_with_lag(sys, {{0.0, u}}, opt.tau, opt.horizon, opt.dt.value_or(opt.tau / 100.0));
    } else {
      tr = sim::integrate_constant(sys, u, opt.horizon, opt.dt.value_or(1e-3));
    }
    out << "simulated " << tr.times.size() << " samples to t = " << tr.times.back() << (lag ? " with lag" : "")
        << "\nfinal state: " << report::display(tr.states.back()) << "\n";
    if (!opt.out.empty()) {
      tr.write_csv(opt.out + ".csv");
      out << "wrote " << opt.out << ".csv\n";
    }
    return kOk;
  }

  const bool bang = opt.scenario == "octo-vertical-bang";
  if (!bang && opt.scenario != "octo-vertical-lag")
    throw ArgumentError("unknown scenario '" + opt.scenario +
                        "' (expected octo-vertical-bang, octo-vertical-lag or custom)");
  catalog::OctocopterParams params;
  params.tau = opt.tau;
  const Eigen::Vector3d d(0.0, 0.0, opt.up ? 1.0 : -1.0);
  const auto res = sim::smooth_reach_ratio(params, d, opt.target_speed, opt.dt, opt.tau);

  out << "scenario: " << opt.scenario << ", lost propeller 1, d = " << report::display(Eigen::VectorXd(d))
      << ", target speed " << report::display(opt.target_speed) << " m/s\n";
  out << "bang-bang: nominal " << report::display(res.bang.nominal_time) << " s, malfunctioning "
      << report::display(res.bang.malfunctioning_time) << " s, ratio "
      << report::display(res.ratio_bangbang) << "\n";
  if (!bang)
    out << "smooth (tau " << report::display(res.tau) << "): nominal " << report::display(res.smooth.nominal_time)
        << " s, malfunctioning " << report::display(res.smooth.malfunctioning_time) << " s, ratio "
        << report::display(res.ratio_smooth) << "\n";
  write_run(opt.out, bang ? res.bang : res.smooth, out);
  if (!opt.out.empty()) write_json(opt.out + "_summary.json", report::to_json(res));
  return kOk;
}

int cmd_catalog_list(std::ostream& out) {
  for (const auto& e : catalog::entries()) out << pad(e.name, 38) << e.description << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Quantitative resilience of driftless integrator systems under loss of control authority",
               "qres"};
  app.require_subcommand(1);

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", opt.model, "Model file or catalog name (see catalog-list)")->required();
  };
  auto add_lost = [&](CLI::App* sub) {
    sub->add_option("--lost", opt.lost, "Lost columns, 1-based comma list, or 'all'");
    sub->add_flag("--all", opt.all, "Sweep every column");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Write the machine-readable report here");
    sub->add_option("--tol", opt.tol, "Relative tolerance for oracle violations");
    sub->add_option("--seed", opt.seed, "Seed for sampled directions");
  };

  auto* check = app.add_subcommand("check", "Controllability, r(C), r(-C), r_q and verdict per column");
  add_model(check);
  add_lost(check);
  check->add_option("--order", opt.order, "Integrator order k (default: model's)");
  add_common(check);

  auto* ratio = app.add_subcommand("ratio", "Reach times and their ratio along a direction");
  add_model(ratio);
  add_lost(ratio);
  ratio->add_option("--order", opt.order, "Integrator order k (default: model's)");
  ratio->add_option("--direction", opt.direction, "Comma-separated direction d")->required();
  add_common(ratio);

  auto* reach_cmd = app.add_subcommand("reach", "Nominal (and malfunctioning) reach time with optimal inputs");
  add_model(reach_cmd);
  add_lost(reach_cmd);
  reach_cmd->add_option("--order", opt.order, "Integrator order k (default: model's)");
  reach_cmd->add_option("--direction", opt.direction, "Comma-separated direction d")->required();
  add_common(reach_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force checks of the structural results");
  add_model(oracle_cmd);
  add_lost(oracle_cmd);
  oracle_cmd->add_option("--direction", opt.direction, "Direction for the grid and homogeneity checks");
  oracle_cmd->add_option("--grid", opt.grid, "Grid points per lost axis")->check(CLI::Range(2, 1000000));
  oracle_cmd->add_option("--samples", opt.samples, "Sampled directions")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--scales", opt.scales, "Homogeneity scales, comma-separated");
  oracle_cmd->add_option("--corrupt-theory", opt.corrupt_theory)->group("");
  add_common(oracle_cmd);

  auto* simulate = app.add_subcommand("simulate", "Trajectory simulation with and without propeller lag");
  simulate->add_option("--scenario", opt.scenario, "octo-vertical-bang, octo-vertical-lag or custom");
  simulate->add_option("--model", opt.model, "Model for the custom scenario");
  simulate->add_option("--input", opt.input, "Constant input for the custom scenario");
  simulate->add_option("--horizon", opt.horizon, "Horizon for the custom scenario, s");
  auto* tau_opt =
      simulate->add_option("--tau", opt.tau, "Input lag time constant, s")->check(CLI::PositiveNumber);
  simulate->add_option("--target-speed", opt.target_speed, "Target speed, m/s")->check(CLI::PositiveNumber);
  simulate->add_option("--dt", opt.dt, "Sample step, s")->check(CLI::PositiveNumber);
  simulate->add_flag("--up", opt.up, "Use d = (0,0,1) instead of (0,0,-1)");
  simulate->add_option("--out", opt.out, "Prefix for trajectory CSV files and the summary");

  auto* list = app.add_subcommand("catalog-list", "List built-in models");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  opt.tau_given = tau_opt->count() > 0;

  try {
    if (check->parsed()) return cmd_check(opt, out);
    if (ratio->parsed()) return cmd_ratio(opt, out);
    if (reach_cmd->parsed()) return cmd_reach(opt, out);
    if (oracle_cmd->parsed()) return cmd_oracle(opt, out);
    if (simulate->parsed()) return cmd_simulate(opt, out);
    if (list->parsed()) return cmd_catalog_list(out);
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacityError;
  } catch (const NonReachError& e) {
    err << "error: " << e.what() << " (horizon " << report::display(e.horizon()) << " s)\n";
    return kInputError;
  } catch (const InvariantError& e) {
    err << "invalid model: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace qres::cli

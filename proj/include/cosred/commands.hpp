#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cosred/action_model.hpp"
#include "cosred/fixtures.hpp"
#include "cosred/reproduce.hpp"
#include "cosred/serialize.hpp"
#include "cosred/strat_engine.hpp"
#include "cosred/verification.hpp"

namespace cosred::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kInvalidInput = 2, kIoError = 3 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return kIoError;
    case ErrorCode::NoMatchingStratum:
    case ErrorCode::AmbiguousStratum:
      return kVerificationFailure;
    default: return kInvalidInput;
  }
}

struct RunConfig {
  std::optional<std::string> action;  // file path or builtin fixture name
  std::optional<std::string> fixture;
  std::optional<std::string> poset;
  std::optional<std::uint64_t> seed;
  int count = 10000;
  double t_end = 2.0;
  double step = 1e-3;
  std::optional<std::string> out;
  std::optional<std::string> csv;
  std::optional<double> tolerance;
  std::optional<std::string> x_support;  // 1-based plane list, "none" for empty
  std::optional<std::string> u_support;
  std::optional<std::string> start;      // comma list x_1..x_2n,u_1..u_2n
  std::string method = "rk4";
  bool disconnected = false;
};

/// What a command operates on: a torus action (optionally a builtin
/// fixture with its semialgebraic data) or an abstract poset.
struct Input {
  std::string name;
  std::optional<Fixture> fixture;
  std::optional<TorusModel> model;
  IsotropyPoset poset;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, "'" + path + "': " + e.what());
  }
}

inline Input resolve_input(const RunConfig& config) {
  Input input;
  const int given = config.action.has_value() + config.fixture.has_value() + config.poset.has_value();
  if (given != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one of --action, --fixture, --poset");

  std::optional<std::string> fixture_name = config.fixture;
  if (config.action) {
    const auto names = fixture_names();
    if (std::find(names.begin(), names.end(), *config.action) != names.end()) fixture_name = config.action;
  }
  if (fixture_name) {
    input.fixture = fixture_by_name(*fixture_name);
    input.name = *fixture_name;
    input.model = build_torus_model(input.fixture->spec);
  } else if (config.action) {
    input.name = *config.action;
    input.model = build_torus_model(action_from_json(read_json_file(*config.action)));
  } else {
    input.name = *config.poset;
    input.poset = poset_from_json(read_json_file(*config.poset));
    auto report = validate(input.poset);
    if (!report.ok()) throw Error(ErrorCode::InvalidPoset, report.violations.front());
    return input;
  }
  input.poset = input.model->poset;
  return input;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

inline void emit(const RunConfig& config, const std::string& text, std::ostream& stdout_stream) {
  if (config.out)
    write_text(*config.out, text);
  else
    stdout_stream << text;
}

inline std::vector<int> parse_planes(const std::string& text, int n) {
  std::vector<int> planes;
  if (text == "none" || text.empty()) return planes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int j = 0;
    try {
      j = std::stoi(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad plane index '" + item + "'");
    }
    if (j < 1 || j > n) throw Error(ErrorCode::InvalidArgument, "plane index " + item + " out of range 1.." +
                                                                   std::to_string(n));
    planes.push_back(j - 1);
  }
  return planes;
}

inline StratificationResult stratify(const Input& input, const RunConfig& config) {
  return cl_stratification(input.poset, StratOptions{!config.disconnected});
}

struct LatticeOutput {
  std::string isotropy;
  std::string cl;
};

inline LatticeOutput lattice_outputs(const Input& input, const RunConfig& config) {
  return {isotropy_dot(input.poset), cl_dot(stratify(input, config))};
}

/// Writes <out>.isotropy.dot and <out>.cl.dot, or both graphs to stdout.
inline int cmd_lattice(const RunConfig& config, std::ostream& out) {
  const auto input = resolve_input(config);
  const auto dots = lattice_outputs(input, config);
  if (config.out) {
    write_text(*config.out + ".isotropy.dot", dots.isotropy);
    write_text(*config.out + ".cl.dot", dots.cl);
  } else {
    out << dots.isotropy << dots.cl;
  }
  return kPass;
}

inline json reduce_report(const Input& input, const RunConfig& config) {
  const auto result = stratify(input, config);
  json j = {{"input", input.name}, {"poset", poset_to_json(input.poset)}, {"result", result_to_json(result, input.poset)}};
  if (input.model) {
    j["action"] = action_to_json(input.model->spec);
    j["warnings"] = input.model->warnings;
    const auto d = is_almost_semifree(input.poset);
    j["almost_semifree"] = {{"value", d.value}, {"diagnostics", d.diagnostics}};
  }
  return j;
}

inline int cmd_reduce(const RunConfig& config, std::ostream& out) {
  const auto input = resolve_input(config);
  emit(config, reduce_report(input, config).dump(2) + "\n", out);
  return kPass;
}

inline VerifyOptions verify_options(const RunConfig& config, int n) {
  if (!config.seed) throw Error(ErrorCode::InvalidArgument, "--seed is required for sampling commands");
  if (config.count < 1) throw Error(ErrorCode::InvalidArgument, "--count must be at least 1");
  VerifyOptions vo;
  vo.seed = *config.seed;
  vo.count = config.count;
  if (config.tolerance) vo.tol.band = *config.tolerance;
  if (config.x_support || config.u_support) {
    SupportPattern pattern;
    if (config.x_support) pattern.x_planes = parse_planes(*config.x_support, n);
    if (config.u_support) pattern.u_planes = parse_planes(*config.u_support, n);
    vo.patterns = {pattern};
  }
  vo.keep_rows = config.csv.has_value();
  return vo;
}

inline int cmd_verify(const RunConfig& config, std::ostream& out) {
  const auto input = resolve_input(config);
  if (!input.fixture)
    throw Error(ErrorCode::InvalidArgument, "verify needs a builtin fixture (s1-on-r2 or t2-on-r4)");
  const auto vo = verify_options(config, input.fixture->spec.n);
  const auto report = verify_fixture(*input.fixture, vo);
  if (config.csv) {
    std::ostringstream csv;
    write_samples_csv(csv, input.fixture->spec.n, input.fixture->spec.k, report.rows);
    write_text(*config.csv, csv.str());
  }
  emit(config, report_to_json(report).dump(2) + "\n", out);
  return report.pass() ? kPass : kVerificationFailure;
}

inline PhasePoint parse_start(const std::string& text, int n) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad coordinate '" + item + "'");
    }
  }
  if (static_cast<int>(values.size()) != 4 * n)
    throw Error(ErrorCode::InvalidArgument, "--start needs " + std::to_string(4 * n) + " coordinates");
  PhasePoint p{{values.begin(), values.begin() + 2 * n}, {values.begin() + 2 * n, values.end()}};
  const double len = norm(p.u);
  if (len == 0) throw Error(ErrorCode::InvalidPoint, "covector must be nonzero");
  for (auto& v : p.u) v /= len;
  return p;
}

inline Trajectory flow_trajectory(const Input& input, const RunConfig& config) {
  if (!input.fixture) throw Error(ErrorCode::InvalidArgument, "flow needs a builtin fixture (s1-on-r2 or t2-on-r4)");
  const auto& spec = input.fixture->spec;
  PhasePoint start;
  if (config.start) {
    start = parse_start(*config.start, spec.n);
  } else {
    if (!config.seed) throw Error(ErrorCode::InvalidArgument, "give --start or --seed");
    start = sample_zero_level_point(spec, *config.seed, 0);
  }
  hilbert_map(spec, start, config.tolerance.value_or(Tolerances{}.constraint));  // zero-level check
  if (config.method == "rk4") return flow_rk4(start, config.t_end, config.step);
  if (config.method == "exact") {
    const auto grid = detail::time_grid(config.t_end, config.step);
    return trajectory_exact(start, grid);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + config.method + "' (rk4 or exact)");
}

inline int cmd_flow(const RunConfig& config, std::ostream& out) {
  const auto input = resolve_input(config);
  const auto traj = flow_trajectory(input, config);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  emit(config, csv.str(), out);
  return kPass;
}

inline void print_reproduction(const ReproductionReport& report, std::ostream& out) {
  std::string fixture;
  for (const auto& row : report.table) {
    if (row.fixture != fixture) {
      fixture = row.fixture;
      out << "\n" << fixture << "\n";
      out << "  " << std::left << std::setw(16) << "stratum" << std::setw(5) << "dim" << std::setw(18) << "kind"
          << std::setw(8) << "base" << "samples\n";
    }
    out << "  " << std::left << std::setw(16) << row.name << std::setw(5) << row.dim << std::setw(18) << row.kind
        << std::setw(8) << row.base_target << row.samples << "\n";
  }
  out << "\n";
  for (const auto& c : report.checks)
    out << (c.pass ? "PASS " : "FAIL ") << c.fixture << ": " << c.name << (c.pass ? "" : " -- " + c.detail) << "\n";
}

inline int cmd_examples(const RunConfig& config, std::ostream& out) {
  ReproduceOptions options;
  if (config.seed) options.seed = *config.seed;
  const auto report = reproduce_examples(options);
  print_reproduction(report, out);
  return report.all_pass() ? kPass : kVerificationFailure;
}

}  // namespace cosred::cli

#pragma once

// Command dispatch and output writers for the thetadft command-line tool.
// Flag parsing lives in tools/; this header only needs a filled RunConfig, so
// tests can drive it with string streams.
//
// Exit codes: 0 every check passed, 1 some check failed, 2 usage or domain error.
// Output is a function of the config alone; sweeps run in parallel but rows
// are emitted in parameter order.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "thetadft/eigenstates.hpp"
#include "thetadft/errors.hpp"
#include "thetadft/gram.hpp"
#include "thetadft/identities.hpp"
#include "thetadft/theta.hpp"
#include "thetadft/twovar.hpp"

namespace thetadft {

enum class Command { theta, eigenstate, dft_check, gram, sweep, identities, twovar };
enum class OutputFormat { json, csv, text };

inline constexpr double kDefaultTolerance = 1e-9;
// Cross-class Gram entries are exact zeros; anything above this is a bug.
inline constexpr double kOrthogonalityBound = 1e-10;

struct RunConfig {
  Command command = Command::theta;
  // theta
  double z_re = 0.0, z_im = 0.0;
  double tau_re = 0.0, tau_im = 1.0;
  int order = 0;
  // eigenstate, dft-check, gram, twovar
  int N = 8;
  int n = 0;
  int m = 0;
  double xi = 1.0;
  std::string representation = "direct";
  // sweep
  int N_min = 4;
  int N_max = 10;
  int index_max = 6;
  // identities
  std::string suite = "all";

  double tol = kDefaultTolerance;
  OutputFormat format = OutputFormat::text;
  std::optional<std::string> output_path;
};

/// Default tolerance: THETA_DFT_TOL if set and parseable, else 1e-9.
inline double default_tolerance() {
  if (const char* env = std::getenv("THETA_DFT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0) return v;
  }
  return kDefaultTolerance;
}

inline std::optional<Command> parse_command(const std::string& name) {
  if (name == "theta") return Command::theta;
  if (name == "eigenstate") return Command::eigenstate;
  if (name == "dft-check") return Command::dft_check;
  if (name == "gram") return Command::gram;
  if (name == "sweep") return Command::sweep;
  if (name == "identities") return Command::identities;
  if (name == "twovar") return Command::twovar;
  return std::nullopt;
}

inline const char* command_name(Command c) {
  switch (c) {
    case Command::theta: return "theta";
    case Command::eigenstate: return "eigenstate";
    case Command::dft_check: return "dft-check";
    case Command::gram: return "gram";
    case Command::sweep: return "sweep";
    case Command::identities: return "identities";
    case Command::twovar: return "twovar";
  }
  return "?";
}

using Cell = std::variant<long long, double, bool, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct RunResult {
  std::vector<std::pair<std::string, Cell>> params;
  std::vector<Table> tables;
  bool pass = true;
};

namespace detail {

inline std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string cell_text(const Cell& c, int digits) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return format_double(v, digits);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

inline std::string params_text(const std::vector<std::pair<std::string, double>>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + "=" + format_double(v, 17);
  }
  return out;
}

}  // namespace detail

inline void write_csv(const RunResult& r, std::ostream& out) {
  bool first = true;
  for (const auto& t : r.tables) {
    if (!first) out << '\n';
    first = false;
    for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << detail::csv_escape(detail::cell_text(row[i], 17));
      out << '\n';
    }
  }
}

inline void write_json(const std::string& command, const RunResult& r, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  auto& params = doc["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = detail::cell_json(v);
  auto& results = doc["results"] = nlohmann::ordered_json::array();
  for (const auto& t : r.tables)
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      obj["table"] = t.name;
      for (size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = detail::cell_json(row[i]);
      results.push_back(std::move(obj));
    }
  doc["pass"] = r.pass;
  out << doc.dump(2) << '\n';
}

inline void write_text(const std::string& command, const RunResult& r, std::ostream& out) {
  out << command;
  for (const auto& [k, v] : r.params) out << ' ' << k << '=' << detail::cell_text(v, 12);
  out << '\n';
  for (const auto& t : r.tables) {
    std::vector<std::vector<std::string>> cells;
    std::vector<size_t> width(t.columns.size());
    for (size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    for (const auto& row : t.rows) {
      cells.emplace_back();
      for (size_t i = 0; i < row.size(); ++i) {
        cells.back().push_back(detail::cell_text(row[i], 12));
        width[i] = std::max(width[i], cells.back().back().size());
      }
    }
    auto line = [&](const std::vector<std::string>& fields) {
      std::string s;
      for (size_t i = 0; i < fields.size(); ++i) {
        s += fields[i];
        if (i + 1 < fields.size()) s += std::string(width[i] - fields[i].size() + 2, ' ');
      }
      out << s << '\n';
    };
    out << '\n' << "[" << t.name << "]\n";
    line(t.columns);
    for (const auto& row : cells) line(row);
  }
  out << '\n' << (r.pass ? "PASS" : "FAIL") << '\n';
}

namespace detail {

inline std::vector<Cell> report_row(const ResidualReport& r) {
  return {r.name,           params_text(r.params), r.lhs.real(), r.lhs.imag(), r.rhs.real(),
          r.rhs.imag(),     r.residual,            r.tol,        r.pass,       r.degenerate};
}

inline Table report_table(std::string name) {
  return {std::move(name),
          {"check", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "tol", "pass", "degenerate"},
          {}};
}

inline void add_variants(Table& t, const VariantTable& v) {
  for (const auto& row : v.variants)
    t.rows.push_back({v.check, static_cast<long long>(v.N), static_cast<long long>(v.m),
                      static_cast<long long>(v.n), row.name, row.residual, v.tol, row.holds});
}

inline RunResult run_theta(const RunConfig& c) {
  const Complex z{c.z_re, c.z_im}, tau{c.tau_re, c.tau_im};
  RunResult r;
  r.params = {{"z_re", c.z_re}, {"z_im", c.z_im}, {"tau_re", c.tau_re}, {"tau_im", c.tau_im},
              {"order", static_cast<long long>(c.order)}};
  Table t{"theta", {"function", "re", "im"}, {}};
  auto add = [&](const char* name, Complex v) { t.rows.push_back({std::string(name), v.real(), v.imag()}); };
  add("theta3", theta3(z, tau));
  add("theta4", theta4(z, tau));
  add("theta2", theta2(z, tau));
  if (c.order > 0) add("theta3_z_derivative", theta3_z_derivative({z, tau, {}}, c.order));
  r.tables.push_back(std::move(t));
  return r;
}

inline RunResult run_eigenstate(const RunConfig& c) {
  const EigenstateSpec spec{c.N, c.n, c.xi};
  StateVector s;
  if (c.representation == "direct") s = eigenstate_direct(spec);
  else if (c.representation == "dual") s = eigenstate_dual(spec);
  else if (c.representation == "theta-taylor") s = eigenstate_theta_taylor(spec);
  else if (c.representation == "width") s = eigenstate_width(spec);
  else throw DomainError("unknown representation '" + c.representation + "'");
  RunResult r;
  r.params = {{"N", static_cast<long long>(c.N)}, {"n", static_cast<long long>(c.n)}, {"xi", c.xi},
              {"representation", c.representation}, {"norm", s.norm()}, {"degenerate", s.degenerate()}};
  Table t{"eigenstate", {"j", "re", "im"}, {}};
  for (size_t j = 0; j < s.size(); ++j)
    t.rows.push_back({static_cast<long long>(j), s[j].real(), s[j].imag()});
  r.tables.push_back(std::move(t));
  return r;
}

inline RunResult run_dft_check(const RunConfig& c) {
  const ResidualReport rep = eigen_residual({c.N, c.n, c.xi}, c.tol);
  RunResult r;
  r.params = {{"N", static_cast<long long>(c.N)}, {"n", static_cast<long long>(c.n)}, {"xi", c.xi},
              {"tol", c.tol}};
  Table t = report_table("dft_check");
  t.rows.push_back(report_row(rep));
  r.tables.push_back(std::move(t));
  // a vanishing state has no eigenvalue to check; it is reported, not failed
  r.pass = rep.degenerate || rep.pass;
  return r;
}

inline Table gram_table() {
  return {"gram", {"N", "n", "m", "re", "im", "abs", "same_class", "degenerate"}, {}};
}

inline void add_gram_rows(Table& t, const GramReport& g, bool lower_only) {
  for (int n = 0; n < g.dim(); ++n)
    for (int m = 0; m < g.dim(); ++m) {
      if (lower_only && m >= n) continue;
      const Complex v = g.entry(n, m);
      t.rows.push_back({static_cast<long long>(g.N), static_cast<long long>(n), static_cast<long long>(m),
                        v.real(), v.imag(), std::abs(v), (n - m) % 4 == 0, !g.cell_scored(n, m)});
    }
}

inline Table gram_summary_table() {
  return {"summary",
          {"N", "max_cross_class", "conjecture_violation", "violation_n", "violation_m",
           "closed_form_max_error", "pass"},
          {}};
}

inline bool add_gram_summary(Table& t, const GramReport& g, double tol, bool cross_check) {
  const bool ok = g.max_off_mod4 <= kOrthogonalityBound && (!cross_check || g.closed_form_max_error <= tol);
  t.rows.push_back({static_cast<long long>(g.N), g.max_off_mod4, g.conjecture_violation,
                    static_cast<long long>(g.violation_n), static_cast<long long>(g.violation_m),
                    g.closed_form_max_error, ok});
  return ok;
}

inline RunResult run_gram(const RunConfig& c) {
  const GramReport g = gram_report(c.N, c.index_max, true);
  RunResult r;
  r.params = {{"N", static_cast<long long>(c.N)}, {"index_max", static_cast<long long>(c.index_max)},
              {"tol", c.tol}};
  Table t = gram_table();
  add_gram_rows(t, g, false);
  Table s = gram_summary_table();
  r.pass = add_gram_summary(s, g, c.tol, true);
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(s));
  return r;
}

inline RunResult run_sweep(const RunConfig& c) {
  const auto reports = conjecture_sweep(c.N_min, c.N_max, c.index_max, false);
  RunResult r;
  r.params = {{"n_min", static_cast<long long>(c.N_min)}, {"n_max", static_cast<long long>(c.N_max)},
              {"index_max", static_cast<long long>(c.index_max)}};
  Table t = gram_table();
  Table s = gram_summary_table();
  for (const auto& g : reports) {
    add_gram_rows(t, g, true);
    r.pass = add_gram_summary(s, g, c.tol, false) && r.pass;
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(s));
  return r;
}

inline RunResult run_identities(const RunConfig& c) {
  const IdentitySuiteResult suite = run_identity_suite(c.suite, c.tol);
  RunResult r;
  r.params = {{"suite", c.suite}, {"tol", c.tol}};
  Table t = report_table("identities");
  for (const auto& rep : suite.reports) t.rows.push_back(report_row(rep));
  Table f{"constant_fits",
          {"identity", "params", "literal_constant", "fitted_re", "fitted_im", "resolved_constant",
           "literal_residual", "fitted_residual", "fit_vs_resolved", "samples", "tol", "pass"},
          {}};
  for (const auto& fit : suite.fits)
    f.rows.push_back({fit.identity, params_text(fit.params), fit.literal_constant.real(),
                      fit.fitted_constant.real(), fit.fitted_constant.imag(), fit.resolved_constant.real(),
                      fit.literal_residual, fit.fitted_residual, fit.fit_vs_resolved,
                      static_cast<long long>(fit.samples), fit.tol, fit.pass});
  r.tables.push_back(std::move(t));
  if (!f.rows.empty()) r.tables.push_back(std::move(f));
  r.pass = suite.pass();
  return r;
}

inline RunResult run_twovar(const RunConfig& c) {
  const TwoVarState s = two_var_state(c.N, c.m, c.n);
  RunResult r;
  r.params = {{"N", static_cast<long long>(c.N)}, {"m", static_cast<long long>(c.m)},
              {"n", static_cast<long long>(c.n)}, {"tol", c.tol}};
  Table p = report_table("parseval");
  const ResidualReport pars = parseval_residual(s, c.tol);
  p.rows.push_back(report_row(pars));
  Table v{"variants", {"check", "N", "m", "n", "variant", "residual", "tol", "holds"}, {}};
  const VariantTable conj = conjugation_residual(s, c.tol);
  const VariantTable eig = eigen2d_residual(s);
  add_variants(v, conj);
  add_variants(v, eig);
  r.tables.push_back(std::move(p));
  r.tables.push_back(std::move(v));
  r.pass = pars.pass && conj.first_holding().has_value() && eig.first_holding().has_value();
  return r;
}

}  // namespace detail

/// Executes one command, writing results to `out` (or config.output_path) and
/// diagnostics to `err`. Returns the process exit code.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunResult result;
  try {
    if (!(config.tol > 0.0)) throw DomainError("tol must be > 0");
    switch (config.command) {
      case Command::theta: result = detail::run_theta(config); break;
      case Command::eigenstate: result = detail::run_eigenstate(config); break;
      case Command::dft_check: result = detail::run_dft_check(config); break;
      case Command::gram: result = detail::run_gram(config); break;
      case Command::sweep: result = detail::run_sweep(config); break;
      case Command::identities: result = detail::run_identities(config); break;
      case Command::twovar: result = detail::run_twovar(config); break;
    }
  } catch (const std::exception& e) {
    // domain errors, truncation failures and degenerate inputs are all bad parameter choices
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream buffer;
  const std::string name = command_name(config.command);
  switch (config.format) {
    case OutputFormat::json: write_json(name, result, buffer); break;
    case OutputFormat::csv: write_csv(result, buffer); break;
    case OutputFormat::text: write_text(name, result, buffer); break;
  }
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << *config.output_path << " for writing\n";
      return 2;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  return result.pass ? 0 : 1;
}

}  // namespace thetadft

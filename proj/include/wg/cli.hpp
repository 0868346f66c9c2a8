#pragma once

// Command-line front end: `wg <subcommand> [flags]`.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wg/archimedean.hpp"
#include "wg/buchstab.hpp"
#include "wg/detail/parallel.hpp"
#include "wg/expsums.hpp"
#include "wg/local_densities.hpp"
#include "wg/oracles.hpp"
#include "wg/reference_values.hpp"
#include "wg/rosser.hpp"
#include "wg/singular_series.hpp"

namespace wg::cli {

/// Where a column's numbers come from.
enum class Provenance { Input, Exact, Point, Lower, Upper, Published };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Input: return "input";
    case Provenance::Exact: return "exact";
    case Provenance::Point: return "point";
    case Provenance::Lower: return "lo";
    case Provenance::Upper: return "hi";
    case Provenance::Published: return "published";
  }
  return "?";
}

enum class Format { Json, Csv, Md };

struct Column {
  std::string name;
  Provenance provenance;
};

/// Rows hold preformatted cells so that output is byte-stable.
struct OutputTable {
  std::string schema;
  std::vector<Column> columns;
  std::vector<std::vector<std::string>> rows;

  OutputTable(std::string s, std::vector<Column> cols) : schema(std::move(s)), columns(std::move(cols)) {}

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::logic_error("OutputTable: row width mismatch");
    rows.push_back(std::move(row));
  }

  void write(std::ostream& os, Format f) const {
    switch (f) {
      case Format::Json: write_json(os); break;
      case Format::Csv: write_csv(os); break;
      case Format::Md: write_md(os); break;
    }
  }

 private:
  nlohmann::ordered_json row_json(const std::vector<std::string>& row) const {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < columns.size(); ++i) j[columns[i].name] = row[i];
    return j;
  }

  // a single row is emitted as a flat record
  void write_json(std::ostream& os) const {
    nlohmann::ordered_json j;
    j["schema"] = schema;
    nlohmann::ordered_json prov;
    for (const auto& c : columns) prov[c.name] = to_string(c.provenance);
    j["provenance"] = prov;
    if (rows.size() == 1) {
      const auto row = row_json(rows[0]);
      for (auto it = row.begin(); it != row.end(); ++it) j[it.key()] = it.value();
    } else {
      j["rows"] = nlohmann::ordered_json::array();
      for (const auto& r : rows) j["rows"].push_back(row_json(r));
    }
    os << j.dump() << '\n';
  }

  void write_csv(std::ostream& os) const {
    os << "# schema=" << schema << " provenance=";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      os << (i ? "," : "") << columns[i].name << ':' << to_string(columns[i].provenance);
    }
    os << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i].name;
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
  }

  void write_md(std::ostream& os) const {
    os << "**" << schema << "**\n\n|";
    for (const auto& c : columns) os << ' ' << c.name << " (" << to_string(c.provenance) << ") |";
    os << "\n|";
    for (std::size_t i = 0; i < columns.size(); ++i) os << "---|";
    os << '\n';
    for (const auto& r : rows) {
      os << '|';
      for (const auto& cell : r) os << ' ' << cell << " |";
      os << '\n';
    }
    os << '\n';
  }
};

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
inline std::string num(long double v) { return num(static_cast<double>(v)); }
inline std::string num(u128 v) { return wg::to_string(v); }
inline std::string num(i128 v) { return wg::to_string(v); }
inline std::string num(long v) { return std::to_string(v); }
inline std::string num(unsigned long long v) { return std::to_string(v); }
inline std::string num(unsigned long v) { return std::to_string(v); }
inline std::string num(unsigned v) { return std::to_string(v); }
inline std::string num(long long v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }
inline std::string num(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}
inline std::string yes_no(bool v) { return v ? "true" : "false"; }

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  return Format::Md;
}

struct Options {
  std::string format = "md";
  double tol = 1e-9;
  unsigned threads = 0;
  std::string cache;
};

namespace detail {

inline OutputTable expsum_table(u64 k, u64 q, i64 a, bool units) {
  const auto v = units ? unit_sum(k, q, a) : complete_sum(k, q, a);
  OutputTable t(units ? "unit_sum" : "complete_sum",
                {{"k", Provenance::Input}, {"q", Provenance::Input}, {"a", Provenance::Input},
                 {"re", Provenance::Point}, {"im", Provenance::Point}, {"abs", Provenance::Point},
                 {"abs_error", Provenance::Upper}});
  t.add({num(k), num(q), num(a), num(v.real()), num(v.imag()), num(v.abs()), num(v.abs_error)});
  return t;
}

inline OutputTable local_table(u64 p, u64 n, unsigned b) {
  const auto c = local_counts(p, n, b);
  OutputTable t("local_counts", {{"p", Provenance::Input}, {"n_res", Provenance::Input},
                                 {"b", Provenance::Input}, {"L", Provenance::Exact},
                                 {"K", Provenance::Exact}, {"Lstar", Provenance::Exact},
                                 {"Ep", Provenance::Exact}, {"Ep_bound", Provenance::Upper},
                                 {"expsum_residual", Provenance::Point}});
  t.add({num(p), num(n), num(b), num(c.L), num(c.K), num(c.Lstar), num(c.Ep), num(c.Ep_bound),
         num(expsum_identity_residual(p, n, b))});
  return t;
}

inline OutputTable sseries_table(u64 N, unsigned b, u64 pmax) {
  const auto v = singular_series(N, b, pmax);
  OutputTable t("singular_series", {{"N", Provenance::Input}, {"b", Provenance::Input},
                                    {"pmax", Provenance::Input}, {"point", Provenance::Point},
                                    {"lo", Provenance::Lower}, {"hi", Provenance::Upper}});
  t.add({num(N), num(b), num(pmax), num(v.point), num(v.lo), num(v.hi)});
  return t;
}

inline OutputTable omega_table(u64 N, unsigned b, u64 pmax) {
  const auto d = omega_density(N, b, static_cast<double>(pmax) + 1);
  OutputTable t("omega", {{"p", Provenance::Input}, {"omega", Provenance::Exact},
                          {"omega_decimal", Provenance::Point}});
  for (std::size_t i = 0; i < d.primes.size(); ++i) {
    t.add({num(d.primes[i]), num(d.omega[i]), num(to_long_double(d.omega[i]))});
  }
  return t;
}

inline std::vector<std::string> cb_row(unsigned b, unsigned r, double tol) {
  const auto bud = budget(b);
  const auto c = C_total(b, r, tol);
  return {num(b), num(r), num(bud.s()), num(bud.M_b), num(c.point), num(c.lo), num(c.hi),
          num(reference::c_bound(b)), yes_no(c.hi < std::log(2.0))};
}

inline std::vector<Column> cb_columns() {
  return {{"b", Provenance::Input},      {"r", Provenance::Input},     {"s_b", Provenance::Exact},
          {"M_b", Provenance::Exact},    {"C", Provenance::Point},     {"C_lo", Provenance::Lower},
          {"C_hi", Provenance::Upper},   {"published_bound", Provenance::Published},
          {"below_log2", Provenance::Exact}};
}

inline OutputTable rb_table(const std::vector<unsigned>& bs, double tol) {
  std::vector<std::vector<std::string>> rows(bs.size());
  wg::detail::parallel_for(bs.size(), [&](std::size_t i) {
    const unsigned b = bs[i];
    const unsigned r = reference::almost_prime_order(b);
    const auto bud = budget(b);
    const auto c = C_total(b, r, tol);
    rows[i] = {num(b),        num(bud.s()),          num(bud.M_b),     num(c.point),
               num(c.lo),     num(c.hi),             num(reference::c_bound(b)), num(r),
               num(min_r(b, tol)), yes_no(c.hi < std::log(2.0))};
  });
  OutputTable t("almost_prime_orders",
                {{"b", Provenance::Input}, {"s_b", Provenance::Exact}, {"M_b", Provenance::Exact},
                 {"C", Provenance::Point}, {"C_lo", Provenance::Lower}, {"C_hi", Provenance::Upper},
                 {"published_bound", Provenance::Published}, {"r_published", Provenance::Published},
                 {"min_r", Provenance::Exact}, {"below_log2", Provenance::Exact}});
  for (auto& r : rows) t.add(std::move(r));
  return t;
}

inline OutputTable lumu_table(unsigned a) {
  OutputTable t("lumu_orders", {{"a", Provenance::Input}, {"b", Provenance::Input},
                                {"r", Provenance::Exact}, {"r_published", Provenance::Published}});
  for (unsigned b = 12; b <= 35; ++b) {
    t.add({num(a), num(b), num(lumu_r(a, b)), a == 4 ? num(reference::lumu_order(b)) : std::string("-")});
  }
  return t;
}

inline OutputTable rosser_table(double D, double z, const std::string& density, unsigned b, u64 N) {
  SieveDensity dens;
  if (density == "omega" || density == "paper") {
    const auto om = omega_density(N, b, z);
    dens.primes = om.primes;
    dens.g = om.relative();
  } else if (density == "uniform") {
    dens = SieveDensity::uniform(z);
  } else if (density.rfind("random-seed", 0) == 0) {
    const std::string tail = density.substr(std::string("random-seed").size());
    const auto pos = tail.find_first_of("0123456789");
    if (pos == std::string::npos) throw domain_error("rosser: random-seed needs a seed, e.g. random-seed:7");
    dens = SieveDensity::random(z, std::stoull(tail.substr(pos)));
  } else {
    throw domain_error("rosser: density must be omega, uniform or random-seed:S");
  }
  const long double V = dens.product();
  const long double lo = sifted_sum(Sign::Lower, dens, z, D);
  const long double hi = sifted_sum(Sign::Upper, dens, z, D);
  const double s = std::log(D) / std::log(z);
  const std::string f_target = (s >= 2 && s <= 4) ? num(V * sieve_f(s)) : std::string("null");
  const std::string F_target = (s >= 1 && s <= 3) ? num(V * sieve_F(s)) : std::string("null");
  OutputTable t("rosser", {{"D", Provenance::Input}, {"z", Provenance::Input}, {"density", Provenance::Input},
                           {"lower_sum", Provenance::Point}, {"V_z", Provenance::Point},
                           {"upper_sum", Provenance::Point}, {"f3_target", Provenance::Point},
                           {"F3_target", Provenance::Point}});
  t.add({num(D), num(z), density, num(lo), num(V), num(hi), f_target, F_target});
  return t;
}

inline OutputTable jint_table(double N, unsigned b, std::size_t bins) {
  const auto v = singular_integral_J(N, b, bins);
  OutputTable t("singular_integral", {{"N", Provenance::Input}, {"b", Provenance::Input},
                                      {"bins", Provenance::Input}, {"value", Provenance::Point},
                                      {"lo", Provenance::Lower}, {"hi", Provenance::Upper}});
  t.add({num(N), num(b), num(static_cast<unsigned long long>(bins)), num(v.point), num(v.lo), num(v.hi)});
  return t;
}

inline std::vector<OutputTable> jfit_tables(unsigned b, std::size_t npoints, std::size_t bins) {
  const auto Ns = log_spaced(1e6, 1e12, npoints);
  std::vector<double> J(Ns.size());
  for (std::size_t i = 0; i < Ns.size(); ++i) J[i] = singular_integral_J(Ns[i], b, bins).point;
  const auto fit = fit_power_law(Ns, J);
  OutputTable pts("singular_integral_points", {{"N", Provenance::Input}, {"J", Provenance::Point}});
  for (std::size_t i = 0; i < Ns.size(); ++i) pts.add({num(Ns[i]), num(J[i])});
  OutputTable f("singular_integral_fit", {{"b", Provenance::Input}, {"slope", Provenance::Point},
                                          {"target", Provenance::Exact}, {"rms_residual", Provenance::Point}});
  f.add({num(b), num(fit.slope), num(35.0 / 36.0 + 1.0 / b), num(fit.residual)});
  return {pts, f};
}

}  // namespace detail

/// Parses argv, runs one subcommand; 0 ok, 1 verification or numerical failure, 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerics for a mixed-power Waring-Goldbach problem"};
  app.name("wg");
  app.require_subcommand(1, 1);
  app.fallthrough();

  Options opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv", "md"}));
  app.add_option("--tol", opt.tol, "Tolerance for integrals")->check(CLI::PositiveNumber);
  app.add_option("--threads", opt.threads, "Worker threads (0 = hardware)");
  app.add_option("--cache", opt.cache, "Cache directory for Buchstab levels");

  std::vector<OutputTable> tables;
  std::vector<std::pair<CLI::App*, std::function<void()>>> jobs;
  std::optional<int> verdict;

  // expsum
  u64 k = 2, q = 1;
  i64 a = 1;
  bool units = false;
  auto* expsum = app.add_subcommand("expsum", "Complete or unit exponential sum");
  expsum->add_option("--k", k, "Power")->required();
  expsum->add_option("--q", q, "Modulus")->required();
  expsum->add_option("--a", a, "Frequency")->required();
  expsum->add_flag("--units", units, "Restrict to units");
  jobs.emplace_back(expsum, [&] { tables.push_back(detail::expsum_table(k, q, a, units)); });

  // local
  u64 p = 0, n_res = 0;
  unsigned b = 12;
  auto* local = app.add_subcommand("local", "Local solution counts modulo a prime");
  local->add_option("--p", p, "Prime")->required();
  local->add_option("--n", n_res, "Residue of N")->required();
  local->add_option("--b", b, "Exponent b")->required();
  jobs.emplace_back(local, [&] { tables.push_back(detail::local_table(p, n_res, b)); });

  // sseries / omega
  u64 N = 0, pmax = 10'000;
  auto* sseries = app.add_subcommand("sseries", "Singular series with certified tail");
  sseries->add_option("--n", N, "Odd N")->required();
  sseries->add_option("--b", b, "Exponent b")->required();
  sseries->add_option("--pmax", pmax, "Largest prime in the explicit product");
  jobs.emplace_back(sseries, [&] { tables.push_back(detail::sseries_table(N, b, pmax)); });

  auto* omega = app.add_subcommand("omega", "Sieve density omega(p) for odd p <= pmax");
  omega->add_option("--n", N, "N")->required();
  omega->add_option("--b", b, "Exponent b")->required();
  omega->add_option("--pmax", pmax, "Largest prime");
  jobs.emplace_back(omega, [&] { tables.push_back(detail::omega_table(N, b, pmax)); });

  // cb / rb / lumu
  unsigned r = 0;
  auto* cb = app.add_subcommand("cb", "C(b) = sum of c_r(b) from r on");
  cb->add_option("--b", b, "Exponent b")->required();
  cb->add_option("--r", r, "Starting order (default: published r(b))");
  jobs.emplace_back(cb, [&] {
    OutputTable t("C_total", detail::cb_columns());
    t.add(detail::cb_row(b, r ? r : reference::almost_prime_order(b), opt.tol));
    tables.push_back(std::move(t));
  });

  bool all = false;
  auto* rb = app.add_subcommand("rb", "Almost-prime orders r(b)");
  auto* rb_all = rb->add_flag("--all", all, "All b in 12..35");
  rb->add_option("--b", b, "Exponent b")->excludes(rb_all);
  jobs.emplace_back(rb, [&] {
    std::vector<unsigned> bs;
    if (all) {
      for (unsigned x = 12; x <= 35; ++x) bs.push_back(x);
    } else {
      bs.push_back(b);
    }
    tables.push_back(detail::rb_table(bs, opt.tol));
  });

  unsigned lumu_a = 4;
  auto* lumu = app.add_subcommand("lumu", "Orders r(a, b) of the earlier formula");
  lumu->add_option("--a", lumu_a, "Parameter a")->required()->check(CLI::Range(1u, 100u));
  jobs.emplace_back(lumu, [&] { tables.push_back(detail::lumu_table(lumu_a)); });

  // rosser
  double D = 0, z = 0;
  std::string density = "uniform";
  auto* rosser = app.add_subcommand("rosser", "Rosser sieve sums against prod(1 - g(p))");
  rosser->add_option("--dlevel", D, "Level D")->required();
  rosser->add_option("--z", z, "Sifting limit z")->required();
  rosser->add_option("--density", density, "omega | uniform | random-seed:S");
  rosser->add_option("--b", b, "Exponent b (omega density)");
  rosser->add_option("--n", N, "N (omega density)");
  jobs.emplace_back(rosser, [&] {
    if ((density == "omega" || density == "paper") && N == 0) throw domain_error("rosser: --density omega needs --n");
    tables.push_back(detail::rosser_table(D, z, density, b, N));
  });

  // jint / jfit
  double Nd = 0;
  std::size_t bins = std::size_t{1} << 18, npoints = 6;
  auto* jint = app.add_subcommand("jint", "Singular integral J(N)");
  jint->add_option("--n", Nd, "N")->required();
  jint->add_option("--b", b, "Exponent b")->required();
  jint->add_option("--bins", bins, "Grid size");
  jobs.emplace_back(jint, [&] { tables.push_back(detail::jint_table(Nd, b, bins)); });

  auto* jfit = app.add_subcommand("jfit", "Power-law fit of J(N) over N in [1e6, 1e12]");
  jfit->add_option("--b", b, "Exponent b")->required();
  jfit->add_option("--npoints", npoints, "Number of N values");
  jfit->add_option("--bins", bins, "Grid size");
  jobs.emplace_back(jfit, [&] {
    for (auto& t : detail::jfit_tables(b, npoints, bins)) tables.push_back(std::move(t));
  });

  // verify
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run oracle suites; JSON lines, exit 0 on pass");
  verify->add_option("--suite", suite, "Suite")
      ->check(CLI::IsMember({"local", "series", "rosser", "buchstab", "archimedean", "all"}));
  jobs.emplace_back(verify, [&] {
    bool ok = true;
    for (const auto& rep : run_suite(suite)) {
      out << rep.json_line() << '\n';
      ok = ok && rep.pass;
    }
    verdict = ok ? 0 : 1;
  });

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return 2;
  }
  if (opt.threads) set_thread_count(opt.threads);
  if (!opt.cache.empty()) buchstab_cache::set_directory(opt.cache);

  try {
    for (auto& [sub, job] : jobs) {
      if (sub->parsed()) job();
    }
  } catch (const domain_error& e) {
    err << "wg: " << e.what() << '\n';
    return 2;
  } catch (const bounds_error& e) {
    err << "wg: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "wg: " << e.what() << '\n';
    return 1;
  }
  if (verdict) return *verdict;
  const Format f = parse_format(opt.format);
  for (const auto& t : tables) t.write(out, f);
  return 0;
}

}  // namespace wg::cli

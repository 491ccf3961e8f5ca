#include "ladder/app/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ladder/app/config.hpp"
#include "ladder/app/spectra_cache.hpp"
#include "ladder/errors.hpp"
#include "ladder/ground_state.hpp"
#include "ladder/qinfo.hpp"
#include "ladder/scaling.hpp"
#include "ladder/xxz_analytic.hpp"

namespace ladder::app {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : path_(path) {
    os_.open(path, std::ios::binary | std::ios::trunc);
    if (!os_) throw std::runtime_error("cannot write " + path.string());
    write_line(header);
  }
  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(num(v));
    write_line(cells);
  }
  void write_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::ofstream os_;
};

// gnuplot script plotting columns of one CSV against its first column (or
// `x_expr` when given).
void write_plot(const fs::path& csv, const std::string& title, const std::string& xlabel,
                const std::vector<std::pair<int, std::string>>& series, const std::string& x_expr = "1") {
  fs::path script = csv;
  script.replace_extension(".gp");
  std::ofstream os(script, std::ios::binary | std::ios::trunc);
  fs::path png = csv.filename();
  png.replace_extension(".png");
  os << "set datafile separator ','\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << png.string() << "'\n"
     << "set title '" << title << "'\n"
     << "set xlabel '" << xlabel << "'\n"
     << "set key outside\n"
     << "plot ";
  for (std::size_t i = 0; i < series.size(); ++i) {
    os << (i ? ", \\\n     " : "") << "'" << csv.filename().string() << "' using (" << (x_expr == "1" ? "$1" : x_expr)
       << "):" << series[i].first << " skip 1 with linespoints title '" << series[i].second << "'";
  }
  os << "\n";
}

struct Context {
  RunConfig config;
  std::ostream& out;
  std::ostream& err;
  fs::path cache_dir() const { return config.out / ".cache"; }
};

std::vector<SectorSpectrum> spectra_for(const Context& ctx, int L) {
  return cached_sweep(ctx.cache_dir(), ctx.config.geometry(L), ctx.config.sweep_options());
}

double gap_for(const Context& ctx, int L) {
  const auto geom = ctx.config.geometry(L);
  const auto options = ctx.config.sweep_options();
  if (auto hit = load_spectra(ctx.cache_dir(), cache_key(geom, options))) return spin_gap(*hit);
  return spin_gap(geom, options);
}

void require_nonnegative_fields(const RunConfig& c) {
  if (c.h_min < 0.0) throw ConfigError("field sweeps cover H >= 0 only; hmin = " + num(c.h_min));
}

int cmd_sectors(const Context& ctx) {
  for (int L : ctx.config.sizes) {
    const auto spectra = spectra_for(ctx, L);
    std::vector<std::string> header{"L", "Sz"};
    for (int k = 0; k < ctx.config.levels; ++k) header.push_back("E" + std::to_string(k));
    CsvWriter csv(ctx.config.out / ("sectors_L" + std::to_string(L) + ".csv"), header);
    for (const auto& s : spectra) {
      std::vector<std::string> cells{std::to_string(L), num(s.sz)};
      for (int k = 0; k < ctx.config.levels; ++k)
        cells.push_back(static_cast<std::size_t>(k) < s.eigenvalues.size() ? num(s.eigenvalues[k]) : "");
      csv.write_line(cells);
    }
    write_plot(csv.path(), "Sector minima, L = " + std::to_string(L), "S^z", {{3, "E_0"}}, "$2");
    ctx.out << "sectors L=" << L << " -> " << csv.path().string() << "\n";
  }
  return kSuccess;
}

int cmd_gap(const Context& ctx) {
  CsvWriter csv(ctx.config.out / "gap.csv", {"L", "Delta_L"});
  for (int L : ctx.config.sizes) {
    const double gap = gap_for(ctx, L);
    csv.row({static_cast<double>(L), gap});
    ctx.out << "L=" << L << " Delta_L=" << num(gap) << "\n";
  }
  write_plot(csv.path(), "Spin gap", "1/L", {{2, "Delta_L"}}, "1.0/$1");
  return kSuccess;
}

std::vector<GapPoint> read_gap_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open gap table " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + " is empty");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  int col_l = -1;
  int col_gap = -1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == "L") col_l = static_cast<int>(i);
    if (names[i] == "Delta_L") col_gap = static_cast<int>(i);
  }
  if (col_l < 0 || col_gap < 0) throw ConfigError(path.string() + ": header needs columns L and Delta_L");
  std::vector<GapPoint> series;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    try {
      series.push_back({std::stoi(cells.at(col_l)), std::stod(cells.at(col_gap))});
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": malformed row");
    }
  }
  return series;
}

int cmd_fit_gap(const Context& ctx) {
  std::vector<GapPoint> series;
  if (!ctx.config.input.empty()) {
    series = read_gap_csv(ctx.config.input);
  } else {
    for (int L : ctx.config.sizes) series.push_back({L, gap_for(ctx, L)});
  }
  GapFit fit;
  try {
    fit = fit_gap(series);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  CsvWriter csv(ctx.config.out / "fit_gap.csv", {"c0", "c1", "c2", "residual", "Delta_inf"});
  csv.row({fit.c0, fit.c1, fit.c2, fit.residual, fit.c0});
  {
    CsvWriter data(ctx.config.out / "fit_gap_points.csv", {"L", "Delta_L", "fit"});
    for (const auto& p : series) data.row({static_cast<double>(p.L), p.gap, fit.at(p.L)});
    write_plot(data.path(), "Gap extrapolation", "1/L", {{2, "Delta_L"}, {3, "quadratic fit"}}, "1.0/$1");
  }
  ctx.out << "Delta_L = c0 + c1/L + c2/L^2: c0=" << num(fit.c0) << " c1=" << num(fit.c1) << " c2=" << num(fit.c2)
          << " residual=" << num(fit.residual) << "\nDelta_inf=" << num(fit.c0) << "\n";
  return kSuccess;
}

int cmd_sweep(const Context& ctx) {
  const auto& c = ctx.config;
  require_nonnegative_fields(c);
  for (int L : c.sizes) {
    const auto spectra = spectra_for(ctx, L);
    const auto curve = ground_state_curve(spectra);
    const std::string tag = "_L" + std::to_string(L);
    {
      CsvWriter csv(c.out / ("crossings" + tag + ".csv"), {"L", "index", "H", "Sz_from", "Sz_to"});
      for (std::size_t k = 0; k < curve.crossings.size(); ++k)
        csv.row({static_cast<double>(L), static_cast<double>(k), curve.crossings[k],
                 static_cast<double>(curve.sz_per_interval[k]), static_cast<double>(curve.sz_per_interval[k + 1])});
    }
    CsvWriter csv(c.out / ("sweep" + tag + ".csv"), {"H", "sector", "m", "E0", "F_global"});
    for (double h : c.field_grid()) {
      const auto& a = spectra[curve.spectrum_index[curve.interval_at(h)]];
      const auto& b = spectra[curve.spectrum_index[curve.interval_at(h + c.delta)]];
      const double f = fidelity_global({a.ground_vector, a.n_up}, {b.ground_vector, b.n_up});
      csv.row({h, a.sz, a.sz / (2.0 * L), a.energy_at(h), f});
    }
    write_plot(csv.path(), "Ground state vs field, L = " + std::to_string(L), "H (K)",
               {{3, "m"}, {5, "F(H, H+delta)"}});
    ctx.out << "L=" << L << " crossings=" << curve.crossings.size();
    if (!curve.crossings.empty())
      ctx.out << " first=" << num(curve.crossings.front()) << " last=" << num(curve.crossings.back());
    ctx.out << "\n";
  }
  return kSuccess;
}

struct PlateauMeasures {
  Rdm1 rho1;
  double s1, s2_chain, s2_rung, c_chain, c_rung;
};

int cmd_measures(const Context& ctx) {
  const auto& c = ctx.config;
  require_nonnegative_fields(c);
  const int chain_a = LadderGeometry::site(1, 0);
  const int chain_b = LadderGeometry::site(1, 1);
  const int rung_b = LadderGeometry::site(2, 0);
  for (int L : c.sizes) {
    const auto geom = c.geometry(L);
    const auto spectra = spectra_for(ctx, L);
    const auto curve = ground_state_curve(spectra);
    std::map<std::size_t, PlateauMeasures> memo;
    auto measures_of = [&](std::size_t index) -> const PlateauMeasures& {
      auto it = memo.find(index);
      if (it != memo.end()) return it->second;
      const auto& s = spectra[index];
      if (s.degenerate)
        ctx.out << "warning: L=" << L << " Sz=" << num(s.sz)
                << " ground level is degenerate; measures refer to one vector of the multiplet\n";
      const auto basis = enumerate_sector(geom, s.n_up);
      PlateauMeasures m;
      m.rho1 = rdm1(s.ground_vector, basis, chain_a);
      m.s1 = entropy(m.rho1);
      const auto chain = rdm2_from_state(s.ground_vector, basis, chain_a, chain_b);
      const auto rung = rdm2_from_state(s.ground_vector, basis, chain_a, rung_b);
      m.s2_chain = entropy(chain);
      m.s2_rung = entropy(rung);
      m.c_chain = concurrence(chain);
      m.c_rung = concurrence(rung);
      return memo.emplace(index, m).first->second;
    };
    CsvWriter csv(c.out / ("measures_L" + std::to_string(L) + ".csv"),
                  {"H", "S1", "S2_nn_chain", "S2_rung", "C_nn_chain", "C_rung", "F_R", "chi_R"});
    for (double h : c.field_grid()) {
      const auto& here = measures_of(curve.spectrum_index[curve.interval_at(h)]);
      const auto& next = measures_of(curve.spectrum_index[curve.interval_at(h + c.delta)]);
      const double f = fidelity_reduced(here.rho1, next.rho1);
      const double chi = f > 0.0 ? -2.0 * std::log(f) / (c.delta * c.delta) : std::numeric_limits<double>::infinity();
      csv.row({h, here.s1, here.s2_chain, here.s2_rung, here.c_chain, here.c_rung, f, chi});
    }
    write_plot(csv.path(), "Entanglement measures, L = " + std::to_string(L), "H (K)",
               {{2, "S(i)"}, {3, "S(i,j) chain"}, {4, "S(i,j) rung"}, {5, "C chain"}, {6, "C rung"}});
    ctx.out << "measures L=" << L << " -> " << csv.path().string() << "\n";
  }
  return kSuccess;
}

// Distances from the critical field strictly inside the window.
std::vector<double> window_offsets(const RunConfig& c, double span) {
  std::vector<double> eps;
  for (int k = 1; k <= c.points; ++k) eps.push_back(span * k / (c.points + 1.0));
  return eps;
}

int cmd_analytic(const Context& ctx) {
  const auto p = ctx.config.analytic();
  p.validate();
  const auto eps = window_offsets(ctx.config, p.window_width());
  for (Side side : {Side::c1, Side::c2}) {
    const std::string name = side == Side::c1 ? "analytic_c1.csv" : "analytic_c2.csv";
    const auto m = derivative_sweep(Measure::m, side, eps, p);
    const auto s1 = derivative_sweep(Measure::s1, side, eps, p);
    const auto s2 = derivative_sweep(Measure::s2, side, eps, p);
    const auto cc = derivative_sweep(Measure::concurrence, side, eps, p);
    CsvWriter csv(ctx.config.out / name, {"H", "m", "dm_dH", "S1", "dS1_dH", "S2", "dS2_dH", "C", "dC_dH"});
    // Ascending field: c1 offsets grow with H, c2 offsets shrink.
    for (std::size_t q = 0; q < eps.size(); ++q) {
      const std::size_t i = side == Side::c1 ? q : eps.size() - 1 - q;
      csv.row({m[i].field, m[i].value, dm_dh_analytic(m[i].field, p), s1[i].value, s1[i].derivative, s2[i].value,
               s2[i].derivative, cc[i].value, cc[i].derivative});
    }
    write_plot(csv.path(), side == Side::c1 ? "Near H_c1" : "Near H_c2", "H (K)",
               {{3, "dm/dH"}, {5, "dS(i)/dH"}, {7, "dS(i,j)/dH"}, {9, "dC/dH"}});
    ctx.out << "analytic -> " << csv.path().string() << "\n";
  }
  return kSuccess;
}

int cmd_rfs(const Context& ctx) {
  const auto p = ctx.config.analytic();
  p.validate();
  if (!(p.delta < p.window_width()))
    throw ConfigError("delta = " + num(p.delta) + " does not fit in the window of width " + num(p.window_width()));
  const auto eps = window_offsets(ctx.config, p.window_width() - p.delta);
  for (Side side : {Side::c1, Side::c2}) {
    const std::string name = side == Side::c1 ? "rfs_c1.csv" : "rfs_c2.csv";
    CsvWriter csv(ctx.config.out / name, {"H", "F_R", "chi_R"});
    for (std::size_t q = 0; q < eps.size(); ++q) {
      // H and H + delta both inside the window.
      const double h = side == Side::c1 ? p.hc1() + eps[q] : p.hc2() - p.delta - eps[eps.size() - 1 - q];
      csv.row({h, measure_value(Measure::rf, h, p), measure_value(Measure::rfs, h, p)});
    }
    write_plot(csv.path(), side == Side::c1 ? "Reduced fidelity near H_c1" : "Reduced fidelity near H_c2", "H (K)",
               {{3, "chi_R"}});
    ctx.out << "rfs -> " << csv.path().string() << "\n";
  }
  return kSuccess;
}

void report(std::ostream& err, const std::string& kind, int code, const std::string& message) {
  nlohmann::json j;
  j["error"] = kind;
  j["exit_code"] = code;
  j["message"] = message;
  err << j.dump() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact diagonalization and entanglement measures of the two-leg spin-1/2 Heisenberg ladder in a field"};
  app.name("ladder");
  app.require_subcommand(1, 1);

  std::map<std::string, std::string> flag_values;
  std::string config_path;
  struct Verb {
    const char* name;
    const char* help;
    std::function<int(const Context&)> run;
    bool analytic;
  };
  const std::vector<Verb> verbs{
      {"sectors", "lowest levels of every Sz sector", cmd_sectors, false},
      {"gap", "spin gap Delta_L for each L", cmd_gap, false},
      {"sweep", "ground-state sector, energy and global fidelity on a field grid", cmd_sweep, false},
      {"measures", "entanglement measures and reduced fidelity of the ED ground state", cmd_measures, false},
      {"fit-gap", "quadratic fit of Delta_L in 1/L", cmd_fit_gap, false},
      {"analytic", "strong-coupling measures and their field derivatives near both critical fields", cmd_analytic,
       true},
      {"rfs", "reduced fidelity and its susceptibility near both critical fields", cmd_rfs, true},
  };
  const std::map<std::string, std::string> descriptions{
      {"L", "ladder sizes: 8, 4-12, 4-12:2 or 4,6,8"},
      {"Jperp", "rung coupling (K)"},
      {"Jpar", "leg coupling (K)"},
      {"hmin", "first field of the grid (K)"},
      {"hmax", "last field of the grid (K)"},
      {"hstep", "field step (K)"},
      {"delta", "fidelity offset (K)"},
      {"K", "Luttinger exponent"},
      {"Azz", "amplitude of the 1/r^2 term of <SzSz>"},
      {"Bzz", "amplitude of the oscillating term of <SzSz>"},
      {"Apm", "amplitude of the incommensurate term of <S+S->"},
      {"Bpm", "amplitude of the staggered term of <S+S->"},
      {"r", "site separation of the analytic pair"},
      {"window", "half-width of each asymptotic window in units of Jpar"},
      {"points", "grid points per asymptotic window"},
      {"levels", "levels per sector"},
      {"tol", "Lanczos tolerance (K)"},
      {"max_iter", "Lanczos matvec limit per level (0: automatic)"},
      {"seed", "Lanczos start-vector seed"},
      {"out", "output directory"},
      {"input", "fit-gap: CSV with columns L and Delta_L"},
  };

  std::map<std::string, CLI::App*> subs;
  for (const auto& verb : verbs) {
    CLI::App* sub = app.add_subcommand(verb.name, verb.help);
    sub->add_option("--config", config_path, "key = value configuration file");
    for (const auto& key : known_keys())
      sub->add_option("--" + key, flag_values[key], descriptions.at(key));
    subs[verb.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream ignored;
    return app.exit(e, out, ignored);
  } catch (const CLI::ParseError& e) {
    report(err, "config", kConfigError, e.what());
    return kConfigError;
  }

  const Verb* chosen = nullptr;
  for (const auto& verb : verbs)
    if (subs[verb.name]->parsed()) chosen = &verb;

  try {
    Settings flags;
    for (const auto& key : known_keys())
      if (subs[chosen->name]->count("--" + key) > 0) flags[key] = flag_values[key];
    Settings file;
    if (!config_path.empty()) file = read_config_file(config_path);
    Context ctx{resolve(file, read_environment(), flags), out, err};
    fs::create_directories(ctx.config.out);
    return chosen->run(ctx);
  } catch (const ConfigError& e) {
    report(err, "config", kConfigError, e.what());
    return kConfigError;
  } catch (const NonConvergenceError& e) {
    report(err, "non_convergence", kNonConvergence,
           std::string(e.what()) + " (best residual " + num(e.best_residual()) + ")");
    return kNonConvergence;
  } catch (const ParameterValidityError& e) {
    report(err, "parameter_validity", kAnalyticDomain, e.what());
    return kAnalyticDomain;
  } catch (const DomainError& e) {
    if (chosen->analytic) {
      report(err, "analytic_domain", kAnalyticDomain, e.what());
      return kAnalyticDomain;
    }
    report(err, "config", kConfigError, e.what());
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    report(err, "config", kConfigError, e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    report(err, "internal", kFailure, e.what());
    return kFailure;
  }
}

}  // namespace ladder::app

#include "ladder/app/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

namespace ladder::app {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
  Int v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "L",   "Jperp", "Jpar", "hmin", "hmax", "hstep", "delta",  "K",    "Azz", "Bzz",   "Apm",
      "Bpm", "r",     "window", "points", "levels", "tol", "max_iter", "seed", "out", "input"};
  return keys;
}

LadderGeometry RunConfig::geometry(int L) const {
  LadderGeometry g;
  g.L = L;
  g.j_perp = j_perp;
  g.j_par = j_par;
  return g;
}

SweepOptions RunConfig::sweep_options() const {
  SweepOptions o;
  o.lanczos.k = levels;
  o.lanczos.tol = tol;
  o.lanczos.max_iter = max_iter;
  o.lanczos.seed = seed;
  return o;
}

AnalyticParams RunConfig::analytic() const {
  AnalyticParams p;
  p.j_perp = j_perp;
  p.j_par = j_par;
  p.luttinger_k = luttinger_k;
  p.a_zz = a_zz;
  p.b_zz = b_zz;
  p.a_pm = a_pm;
  p.b_pm = b_pm;
  p.separation = separation;
  p.window = window;
  p.delta = delta;
  return p;
}

std::vector<double> RunConfig::field_grid() const {
  const auto n = static_cast<long>(std::floor((h_max - h_min) / h_step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) grid.push_back(h_min + static_cast<double>(k) * h_step);
  return grid;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::string item;
  auto flush = [&](const std::string& raw) {
    const auto t = trim(raw);
    if (t.empty()) throw ConfigError("L: empty entry in '" + text + "'");
    const auto dash = t.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_int<int>("L", t));
      return;
    }
    int stride = 1;
    std::string upper = t.substr(dash + 1);
    if (const auto colon = upper.find(':'); colon != std::string::npos) {
      stride = to_int<int>("L", upper.substr(colon + 1));
      upper = upper.substr(0, colon);
    }
    const int lo = to_int<int>("L", t.substr(0, dash));
    const int hi = to_int<int>("L", upper);
    require(stride >= 1 && lo <= hi, "L: bad range '" + t + "'");
    for (int L = lo; L <= hi; L += stride) out.push_back(L);
  };
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    flush(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Settings read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  const auto& keys = known_keys();
  Settings s;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path.string() + ":" + std::to_string(number);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError(where + ": unknown key '" + key + "'");
    s[key] = trim(line.substr(eq + 1));
  }
  return s;
}

Settings read_environment() {
  Settings s;
  for (const auto& key : known_keys()) {
    std::string name = "LADDER_";
    for (char c : key) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (const char* v = std::getenv(name.c_str())) s[key] = v;
  }
  return s;
}

RunConfig resolve(const Settings& file, const Settings& env, const Settings& flags) {
  Settings merged = file;
  for (const auto& [k, v] : env) merged[k] = v;
  for (const auto& [k, v] : flags) merged[k] = v;

  RunConfig c;
  for (const auto& [key, value] : merged) {
    if (key == "L") c.sizes = parse_sizes(value);
    else if (key == "Jperp") c.j_perp = to_double(key, value);
    else if (key == "Jpar") c.j_par = to_double(key, value);
    else if (key == "hmin") c.h_min = to_double(key, value);
    else if (key == "hmax") c.h_max = to_double(key, value);
    else if (key == "hstep") c.h_step = to_double(key, value);
    else if (key == "delta") c.delta = to_double(key, value);
    else if (key == "K") c.luttinger_k = to_double(key, value);
    else if (key == "Azz") c.a_zz = to_double(key, value);
    else if (key == "Bzz") c.b_zz = to_double(key, value);
    else if (key == "Apm") c.a_pm = to_double(key, value);
    else if (key == "Bpm") c.b_pm = to_double(key, value);
    else if (key == "r") c.separation = to_int<int>(key, value);
    else if (key == "window") c.window = to_double(key, value);
    else if (key == "points") c.points = to_int<int>(key, value);
    else if (key == "levels") c.levels = to_int<int>(key, value);
    else if (key == "tol") c.tol = to_double(key, value);
    else if (key == "max_iter") c.max_iter = to_int<int>(key, value);
    else if (key == "seed") c.seed = to_int<std::uint64_t>(key, value);
    else if (key == "out") c.out = value;
    else if (key == "input") c.input = value;
    else throw ConfigError("unknown key '" + key + "'");
  }

  require(!c.sizes.empty(), "L: no ladder sizes given");
  std::set<int> seen;
  for (int L : c.sizes) {
    require(L >= 2 && 2 * L <= kMaxSites, "L = " + std::to_string(L) + " outside [2, " +
                                              std::to_string(kMaxSites / 2) + "]");
    require(seen.insert(L).second, "L = " + std::to_string(L) + " listed twice");
  }
  require(c.j_perp > 0.0, "Jperp must be positive");
  require(c.j_par >= 0.0, "Jpar must be non-negative");
  require(c.h_step > 0.0, "hstep must be positive");
  require(c.h_max >= c.h_min, "hmax must not be below hmin");
  require(c.delta > 0.0, "delta must be positive");
  require(c.luttinger_k > 0.0, "K must be positive");
  require(c.separation >= 1, "r must be at least 1");
  require(c.window > 0.0, "window must be positive");
  require(c.points >= 1, "points must be at least 1");
  require(c.levels >= 1, "levels must be at least 1");
  require(c.tol > 0.0, "tol must be positive");
  require(c.max_iter >= 0, "max_iter must be non-negative");
  require(!c.out.empty(), "out must name a directory");
  return c;
}

}  // namespace ladder::app

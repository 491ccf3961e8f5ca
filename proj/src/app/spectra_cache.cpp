#include "ladder/app/spectra_cache.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <type_traits>

namespace ladder::app {

namespace {

constexpr char kMagic[8] = {'L', 'D', 'R', 'S', 'P', 'E', 'C', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
  static_assert(std::is_trivially_copyable_v<T>);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
void put_vector(std::ostream& os, const std::vector<T>& v) {
  put(os, static_cast<std::uint64_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

template <class T>
bool get_vector(std::istream& is, std::vector<T>& v, std::uint64_t limit) {
  std::uint64_t n = 0;
  if (!get(is, n) || n > limit) return false;
  v.resize(n);
  return static_cast<bool>(is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T))));
}

std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string cache_key(const LadderGeometry& geom, const SweepOptions& options) {
  return "ladder-spectra v1 L=" + std::to_string(geom.L) + " jperp=" + exact(geom.j_perp) +
         " jpar=" + exact(geom.j_par) + " periodic=" + (geom.periodic ? "1" : "0") +
         " k=" + std::to_string(options.lanczos.k) + " tol=" + exact(options.lanczos.tol) +
         " max_iter=" + std::to_string(options.lanczos.max_iter) + " seed=" + std::to_string(options.lanczos.seed) +
         " basis=" + std::to_string(options.lanczos.max_basis) + " dense_below=" + std::to_string(options.dense_below);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path cache_file(const std::filesystem::path& dir, const std::string& key) {
  return dir / (hex16(fnv1a64(key)) + ".spec");
}

std::optional<std::vector<SectorSpectrum>> load_spectra(const std::filesystem::path& dir, const std::string& key) {
  std::ifstream in(cache_file(dir, key), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return std::nullopt;
  std::vector<char> stored;
  if (!get_vector(in, stored, 1 << 16) || std::string(stored.begin(), stored.end()) != key) return std::nullopt;

  std::uint64_t count = 0;
  if (!get(in, count) || count > 1024) return std::nullopt;
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 40;
  std::vector<SectorSpectrum> out(count);
  for (auto& s : out) {
    std::uint64_t dim = 0;
    std::uint8_t degenerate = 0;
    if (!get(in, s.n_up) || !get(in, s.sz) || !get(in, dim) || !get(in, degenerate) || !get(in, s.iterations) ||
        !get_vector(in, s.eigenvalues, kLimit) || !get_vector(in, s.residuals, kLimit) ||
        !get_vector(in, s.ground_vector, kLimit))
      return std::nullopt;
    s.dim = dim;
    s.degenerate = degenerate != 0;
  }
  return out;
}

void store_spectra(const std::filesystem::path& dir, const std::string& key,
                   const std::vector<SectorSpectrum>& spectra) {
  std::filesystem::create_directories(dir);
  const auto target = cache_file(dir, key);
  auto temp = target;
  temp += ".tmp";
  {
    std::ofstream os(temp, std::ios::binary | std::ios::trunc);
    os.write(kMagic, 8);
    put_vector(os, std::vector<char>(key.begin(), key.end()));
    put(os, static_cast<std::uint64_t>(spectra.size()));
    for (const auto& s : spectra) {
      put(os, s.n_up);
      put(os, s.sz);
      put(os, static_cast<std::uint64_t>(s.dim));
      put(os, static_cast<std::uint8_t>(s.degenerate));
      put(os, s.iterations);
      put_vector(os, s.eigenvalues);
      put_vector(os, s.residuals);
      put_vector(os, s.ground_vector);
    }
    if (!os) throw std::runtime_error("failed writing spectra cache " + temp.string());
  }
  std::filesystem::rename(temp, target);
}

std::vector<SectorSpectrum> cached_sweep(const std::filesystem::path& dir, const LadderGeometry& geom,
                                         const SweepOptions& options) {
  const auto key = cache_key(geom, options);
  if (auto hit = load_spectra(dir, key)) return std::move(*hit);
  auto spectra = sector_sweep(geom, options);
  store_spectra(dir, key, spectra);
  return spectra;
}

}  // namespace ladder::app

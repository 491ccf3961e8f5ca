#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ladder/eigensolver.hpp"
#include "ladder/ground_state.hpp"

namespace ladder::app {

/// Canonical text of everything that determines a sector sweep.
std::string cache_key(const LadderGeometry& geom, const SweepOptions& options);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const std::string& text);

/// <dir>/<16 hex digits of the key hash>.spec
std::filesystem::path cache_file(const std::filesystem::path& dir, const std::string& key);

/// Spectra stored under `key`, or nothing if absent, unreadable or stored
/// under a different key with the same hash.
std::optional<std::vector<SectorSpectrum>> load_spectra(const std::filesystem::path& dir, const std::string& key);

/// Writes atomically (temporary file, then rename).
void store_spectra(const std::filesystem::path& dir, const std::string& key,
                   const std::vector<SectorSpectrum>& spectra);

/// Cached sector_sweep.
std::vector<SectorSpectrum> cached_sweep(const std::filesystem::path& dir, const LadderGeometry& geom,
                                         const SweepOptions& options);

}  // namespace ladder::app

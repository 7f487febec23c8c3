#pragma once
// Disk cache for computed spectra: one JSON file per (symbol, weights, d,
// k_max) key under TWL_CACHE_DIR (default ".twl-cache").  Files carry a
// format version; loads re-verify a 1% sample of blocks against freshly
// assembled operators before the record is accepted, so corrupt or stale
// files degrade to a miss with a warning note instead of poisoning results.

#include <optional>
#include <string>

#include "twl/spectral.hpp"

namespace twl {

inline constexpr const char* kCacheVersion = "1";

// stable hex key of the identifying tuple
std::string cache_key(const std::string& symbol_text, const Weights& w, int d,
                      int k_max);

std::string cache_directory();
std::string cache_file_path(const std::string& key);

// Serializes the record (eigenvectors included only when present).
void cache_store(const SpectrumRecord& rec);

// nullopt on any miss; when `note` is non-null it receives the reason
// (absent, version mismatch, metadata mismatch, corrupt, vectors missing).
std::optional<SpectrumRecord> cache_load(const std::string& symbol_text,
                                         const Weights& w, int d, int k_max,
                                         bool need_vectors,
                                         std::string* note = nullptr);

}  // namespace twl

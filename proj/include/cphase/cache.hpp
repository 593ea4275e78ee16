#pragma once

// Content-addressed result cache: one <sha256>.json file per sweep result.

#include "cphase/sweep.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace cphase {

inline constexpr const char* kCacheDirEnv = "CPHASE_CACHE_DIR";

class ResultCache {
public:
    /// Warnings about discarded entries go to `warnings` when non-null.
    explicit ResultCache(std::filesystem::path dir, std::ostream* warnings = nullptr);

    const std::filesystem::path& directory() const { return dir_; }
    std::filesystem::path path_for(const std::string& key) const;

    /// A hit is returned only if the file parses completely, its stored hash
    /// equals `key`, and re-hashing its spec reproduces `key`. Anything else
    /// is deleted and reported as a miss.
    std::optional<SweepResult> lookup(const std::string& key) const;

    /// Writes to a unique temporary file in the cache directory and renames
    /// it into place, so concurrent writers never expose partial files.
    void store(const SweepResult& result) const;

    /// $CPHASE_CACHE_DIR if set and non-empty, else ./.cphase-cache.
    static std::filesystem::path default_directory();

private:
    void discard(const std::filesystem::path& path, const std::string& reason) const;

    std::filesystem::path dir_;
    std::ostream* warnings_;
};

} // namespace cphase

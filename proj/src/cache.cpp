#include "cphase/cache.hpp"

#include "cphase/output.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace cphase {

namespace fs = std::filesystem;

ResultCache::ResultCache(fs::path dir, std::ostream* warnings) : dir_(std::move(dir)), warnings_(warnings) {}

fs::path ResultCache::path_for(const std::string& key) const { return dir_ / (key + ".json"); }

fs::path ResultCache::default_directory() {
    const char* env = std::getenv(kCacheDirEnv);
    if (env && *env) return fs::path(env);
    return fs::path(".cphase-cache");
}

void ResultCache::discard(const fs::path& path, const std::string& reason) const {
    if (warnings_) *warnings_ << "warning: discarding cache entry " << path.string() << ": " << reason << '\n';
    std::error_code ec;
    fs::remove(path, ec);
}

std::optional<SweepResult> ResultCache::lookup(const std::string& key) const {
    const fs::path path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buffer;
    buffer << in.rdbuf();
    in.close();
    SweepResult result;
    try {
        result = sweep_result_from_json(nlohmann::json::parse(buffer.str()));
    } catch (const std::exception& e) {
        discard(path, std::string("unreadable (") + e.what() + ")");
        return std::nullopt;
    }
    if (result.hash != key) {
        discard(path, "stored hash does not match file name");
        return std::nullopt;
    }
    if (result.engine_version != kEngineVersion || sweep_key(result.spec) != key) {
        discard(path, "spec does not reproduce the key");
        return std::nullopt;
    }
    return result;
}

void ResultCache::store(const SweepResult& result) const {
    fs::create_directories(dir_);
    static std::atomic<unsigned> counter{0};
    const fs::path final_path = path_for(result.hash);
    const fs::path tmp = dir_ / (result.hash + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        out << to_json(result).dump();
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("cannot write cache file " + tmp.string());
        }
    }
    fs::rename(tmp, final_path);
}

} // namespace cphase

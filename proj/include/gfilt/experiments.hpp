#pragma once

#include "gfilt/chebyshev.hpp"
#include "gfilt/filter.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gfilt::experiments {

/// Flat key-value configuration with [section] headers and '#' comments.
/// Lookups resolve section-local keys first, then top-level ones.
class Config {
public:
    static Config parse(std::istream& in);
    static Config load(const std::filesystem::path& path);

    void set(const std::string& section, const std::string& key, const std::string& value);
    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    /// Canonical serialization: sections and keys sorted, one "key = value"
    /// per line. Reruns of the same canonical text reproduce identical CSVs.
    std::string canonical() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// FNV-1a 64-bit content hash, hex-encoded.
std::string content_hash(const std::string& text);

struct RunResult {
    std::vector<std::filesystem::path> files;
};

/// The experiment filter from the inverse-filtering benchmark:
/// h1(t) = (9/4 - t)(3 + t), used over the interval [0, 2].
ScalarField h1_field();
MultiPoly h1_poly();

RunResult run_table1(const Config& config, const std::filesystem::path& out_dir);
RunResult run_table2(const Config& config, const std::filesystem::path& out_dir);
RunResult run_convergence(const Config& config, const std::filesystem::path& out_dir);
RunResult run_distributed_check(const Config& config, const std::filesystem::path& out_dir);
RunResult run_denoise_sweep(const Config& config, const std::filesystem::path& out_dir);

/// Dispatch by experiment name; writes outputs plus a manifest into out_dir.
RunResult run_experiment(const std::string& name, const Config& config,
                         const std::filesystem::path& out_dir);

} // namespace gfilt::experiments

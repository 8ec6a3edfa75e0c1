#pragma once

// Config-driven experiment suite: parsing and validation, block execution,
// and the on-disk artifact layout (manifest.json, <block>/trace.csv,
// <block>/summary.json, report.md).

#include "learnlab/descriptors.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace learnlab {

inline constexpr std::string_view kToolVersion = "0.1.0";

inline constexpr const char* kBlockKinds[] = {"vc", "pac", "limit-identify", "limit-generate",
                                              "adversary", "levels", "risk"};

struct BlockConfig {
    std::string name;
    std::string kind;
    Json params;
};

struct SuiteConfig {
    std::uint64_t seed = 0;
    std::optional<std::string> output;
    std::vector<BlockConfig> blocks;
    Json raw; // the effective config, after any seed override
};

/// Validates the whole config, including every block's parameters, without
/// running anything. Throws ConfigError naming the offending key.
SuiteConfig parse_suite(const Json& j);
SuiteConfig load_suite(const std::filesystem::path& path);

/// Same config with a different top-level seed.
SuiteConfig with_seed(const SuiteConfig& cfg, std::uint64_t seed);

/// FNV-1a 64 over the compact dump (keys sorted), as 16 hex digits.
std::string config_hash(const Json& j);

class BlockFailure : public std::runtime_error {
public:
    BlockFailure(std::string block, const std::string& message)
        : std::runtime_error("block \"" + block + "\" failed: " + message), block_(std::move(block)) {}
    const std::string& block() const { return block_; }

private:
    std::string block_;
};

struct BlockOutput {
    std::string trace_csv;
    Json summary;
    /// Extra files relative to the block directory (name, contents).
    std::vector<std::pair<std::string, std::string>> extra;
};

/// Runs one block with its derived seed; exposed for tests.
BlockOutput run_block(const BlockConfig& block, std::uint64_t block_seed);

/// Executes every block in order and writes the artifact tree under `out`.
/// The manifest is written last. Returns the manifest.
Json run_suite(const SuiteConfig& cfg, const std::filesystem::path& out);

} // namespace learnlab

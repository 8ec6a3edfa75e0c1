#pragma once

#include "learnlab/descriptors.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace learnlab {

class MissingManifest : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Markdown report built only from the summaries listed in `manifest`;
/// every table row names the file its numbers came from.
std::string render_report(const std::filesystem::path& dir, const Json& manifest);

/// Reads <dir>/manifest.json and renders the report. Throws MissingManifest.
std::string emit_report(const std::filesystem::path& dir);

} // namespace learnlab

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace lusin::harness {

/// Writes to a sibling temporary file, then renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

/// Directory for outputs when none is given: $LUSIN_OUTPUT_DIR, else the working directory.
std::filesystem::path default_output_dir();

}  // namespace lusin::harness

#pragma once

#include <string>

namespace footlift::io {

std::string read_file(const std::string& path);

// Writes to <path>.tmp and renames into place, so readers never observe a
// partially written file.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace footlift::io

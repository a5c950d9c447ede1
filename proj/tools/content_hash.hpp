#pragma once

#include <filesystem>
#include <string>

namespace graphpae::cli {

/// SHA-1 of "blob <size>\0<content>", the id git assigns to the file.
std::string git_blob_id(const std::filesystem::path& path);

}  // namespace graphpae::cli

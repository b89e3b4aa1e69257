#ifndef GENECLUSTER_IO_UTIL_HPP
#define GENECLUSTER_IO_UTIL_HPP

#include <filesystem>
#include <string>

namespace genecluster {

/// Writes content to path atomically: the bytes go to a sibling temp file
/// which is then renamed over the target, so readers never observe a
/// truncated file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

/// Fixed 4-decimal display form used for silhouette values in tables.
std::string format_score(double v);

}  // namespace genecluster

#endif  // GENECLUSTER_IO_UTIL_HPP

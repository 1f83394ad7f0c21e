#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "pathqv/path.hpp"

namespace pathqv {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);
/// Strict parse of a full token; throws ConfigError on junk.
double parse_double(std::string_view text);

/// Three-section CSV: "horizon", "grid" (time,value rows), "jumps"
/// (time,size,fixed_time rows). Lines starting with '#' are comments.
void write_path_csv(std::ostream& os, const CadlagPath& path);
CadlagPath read_path_csv(std::istream& is);

std::string path_to_json(const CadlagPath& path);
CadlagPath path_from_json(const std::string& text);

}  // namespace pathqv

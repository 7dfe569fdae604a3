#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace tflab {

/// Rounds to 12 significant digits so reports are stable across platforms and thread counts.
double round12(double v);

/// JSON number rounded to 12 significant digits; non-finite values become strings.
nlohmann::json jnum(double v);
nlohmann::json jvec(const std::vector<double>& v);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace tflab

#pragma once

#include <string>
#include <vector>

namespace gqlab {

// Floating output convention: 12 significant digits.
std::string fmt12(double v);

void write_text_file(const std::string& path, const std::string& content);

std::vector<double> parse_double_list(const std::string& csv);
std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace gqlab

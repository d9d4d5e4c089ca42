#pragma once

#include <string>
#include <string_view>
#include <vector>

// Minimal CSV helpers. Numbers are always printed with a fixed number of
// decimals so reruns are byte-identical.
namespace d2dsim::csv {

std::string number(double v, int decimals = 6);
std::string_view trim(std::string_view s);
// fields are trimmed of blanks and CR
std::vector<std::string> split(std::string_view line, char sep = ',');

}  // namespace d2dsim::csv

#pragma once

#include <string>
#include <vector>

namespace labelbias {

// Shortest round-trip decimal form of a double (via std::to_chars). Used for
// every numeric value we write to CSV so reruns are byte-identical and
// re-parsing recovers the exact bits.
std::string format_double(double value);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Parses a double, rejecting trailing garbage. Returns false on failure.
bool parse_double(const std::string& s, double* out);

// Glob match supporting '*' wildcards only (enough for column patterns).
bool glob_match(const std::string& pattern, const std::string& text);

}  // namespace labelbias

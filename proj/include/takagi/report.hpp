#pragma once

// JSON and text renderings of analysis results. JSON numbers are written
// with 17 significant digits so identical runs give identical bytes;
// non-finite values become null. Complex numbers are [re, im].

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "takagi/analysis.hpp"

namespace takagi {

using Json = nlohmann::ordered_json;

Json to_json(const AnalysisReport& r, bool include_timing);
Json complex_json(expr::Complex z);

// Serializes with the fixed number format, two-space indentation.
std::string dump_json(const Json& j);

// One line explaining what the verdict does and does not imply.
std::string classification_note(const Classification& c);

void print_report(std::ostream& out, const AnalysisReport& r, bool include_timing);
// Failing rows and the verdict only.
void print_check(std::ostream& out, const AnalysisReport& r);

}  // namespace takagi

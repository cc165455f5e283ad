// Serialization of analysis results, state spaces and verification reports:
// JSON documents, Graphviz DOT, and plain text.
#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "bioamb/cfa.hpp"
#include "bioamb/semantics.hpp"
#include "bioamb/verify.hpp"

namespace bioamb {

inline constexpr const char* kSchemaVersion = "1";

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// `{schema_version, command, input_digest, payload}`.
nlohmann::json make_document(std::string_view command, std::string_view input, nlohmann::json payload);

/// Keys `ambients`, `contents`, `bindings`, `top`, `stats`. Item and name
/// lists are sorted; canonical names print as `text#site`.
nlohmann::json to_json(const AnalysisResult& r);

nlohmann::json to_json(const StateSpace& s, bool with_terms);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const PrecisionReport& r);

/// Father-son graph: ambients as ovals, capabilities as boxes, one edge per
/// membership. Edges present in `initial` are black, derived ones red.
std::string to_dot(const AnalysisResult& r, const AnalysisResult& initial);

std::string to_text(const AnalysisResult& r);

/// `1 state, 0 transitions`.
std::string summary_line(const StateSpace& s);

std::string to_text(const VerificationReport& r);
std::string to_text(const PrecisionReport& r);

}  // namespace bioamb

// Concrete syntax for BioAmbients processes.
//
//   P   ::= 0 | (n) P | [P]^label | cap . P | P | P | P + P | rec X . P | X | ( P )
//   cap ::= enter n | accept n | exit n | expel n | merge+ n | merge- n
//         | n ! dir {m} | n ? dir {p}
//   dir ::= (local) | v (down) | ^ (up) | # (sibling)
//
// `.` binds tightest, then `+`, then `|`; binary operators associate to the
// right. A restriction extends as far right as its enclosing group. `//`
// starts a line comment.
#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "bioamb/ast.hpp"

namespace bioamb {

struct ParseError {
    enum class Kind { lex, syntax, unbound_process_variable, unguarded_choice };

    Kind kind = Kind::syntax;
    SourceSpan span;
    std::string message;

    /// `line:column: kind: message`
    std::string str() const;
};

const char* to_string(ParseError::Kind k);

class ParseResult {
public:
    ParseResult(Process p) : v_(std::move(p)) {}
    ParseResult(ParseError e) : v_(std::move(e)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }
    const Process& process() const { return std::get<Process>(v_); }
    const ParseError& error() const { return std::get<ParseError>(v_); }

private:
    std::variant<Process, ParseError> v_;
};

/// Parses a closed, well-formed process. Binder sites are numbered 1, 2, ...
/// in pre-order, so alpha-variant sources get identical canonical names.
ParseResult parse(std::string_view text);

/// Like `parse`, but throws `std::invalid_argument` carrying the error text.
Process parse_or_throw(std::string_view text);

/// Well-formedness of programmatically built terms: closed with respect to
/// process variables, and every choice branch prefix-headed.
std::optional<std::string> well_formedness_error(const Process& p);

/// Deterministic source text; re-parses to an alpha-equal term.
std::string pretty(const Process& p);

/// Source spelling of a capability (names rendered by their text).
std::string pretty(const Capability& c);

}  // namespace bioamb

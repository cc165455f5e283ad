// Control-flow analysis: an over-approximation of ambient contents (which
// ambients and capabilities each ambient may contain) and of name bindings
// (which names each name may stand for).
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bioamb/ast.hpp"

namespace bioamb {

/// A capability over canonical names. For inputs `arg` is the binder, for
/// outputs the payload; movements leave it empty.
struct CanonCapability {
    CapKind kind = CapKind::enter;
    Direction dir = Direction::local;
    CanonicalName channel;
    CanonicalName arg;

    static CanonCapability movement(CapKind k, CanonicalName ch) { return {k, Direction::local, std::move(ch), {}}; }
    static CanonCapability output(Direction d, CanonicalName ch, CanonicalName payload) {
        return {CapKind::output, d, std::move(ch), std::move(payload)};
    }
    static CanonCapability input(Direction d, CanonicalName ch, CanonicalName binder) {
        return {CapKind::input, d, std::move(ch), std::move(binder)};
    }

    /// Source-like spelling with `text#site` names, e.g. `c#1!v{cell3#4}`.
    std::string str() const;

    friend auto operator<=>(const CanonCapability&, const CanonCapability&) = default;
    friend bool operator==(const CanonCapability&, const CanonCapability&) = default;
};

using ContentItem = std::variant<AmbientId, CanonCapability>;

std::string to_string(const ContentItem& item);

using ContentsRelation = std::map<AmbientId, std::set<ContentItem>>;
using BindingRelation = std::map<CanonicalName, std::set<CanonicalName>>;

struct SolverStats {
    std::size_t constraints = 0;
    std::size_t iterations = 0;  // worklist facts processed
};

struct AnalysisResult {
    ContentsRelation contents;
    BindingRelation bindings;
    AmbientId top = AmbientId::top();
    SolverStats stats;

    bool contains(const AmbientId& parent, const ContentItem& item) const;
    bool binds(const CanonicalName& name, const CanonicalName& value) const;
    const std::set<CanonicalName>& values(const CanonicalName& name) const;

    /// Ambient-ambient memberships `(parent, child)`.
    std::set<std::pair<AmbientId, AmbientId>> ambient_pairs() const;

    friend bool operator==(const AnalysisResult& a, const AnalysisResult& b) {
        return a.contents == b.contents && a.bindings == b.bindings && a.top == b.top;
    }
};

/// `item ∈ contents(at)`.
struct ContentsFact {
    AmbientId at;
    ContentItem item;
    friend auto operator<=>(const ContentsFact&, const ContentsFact&) = default;
};

/// `value ∈ bindings(name)`.
struct BindingFact {
    CanonicalName name;
    CanonicalName value;
    friend auto operator<=>(const BindingFact&, const BindingFact&) = default;
};

/// For every `c ∈ bindings(channel)` (and, for outputs, every
/// `m ∈ bindings(arg)`), the capability over `c` (and `m`) is in
/// `contents(at)`. Inputs keep `arg` (their binder) unquantified.
struct CapabilityRule {
    AmbientId at;
    CanonCapability pattern;
    friend auto operator<=>(const CapabilityRule&, const CapabilityRule&) = default;
};

using Constraint = std::variant<ContentsFact, BindingFact, CapabilityRule>;

std::string to_string(const Constraint& c);

struct ConstraintSet {
    AmbientId top = AmbientId::top();
    std::set<AmbientId> ambients;  // universe, including `top`
    std::set<Constraint> constraints;
};

class OpenTermError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Judgment constraints of `p` with enclosing ambient `top`, plus the
/// `⌊n⌋ ∈ bindings(⌊n⌋)` seed for every free name. A `rec` body is also
/// judged at every ambient where its identifier recurs, so the result stays
/// valid for unfolded copies. Throws `OpenTermError` on unbound process
/// identifiers.
ConstraintSet generate_constraints(const Process& p, const AmbientId& top = AmbientId::top());

/// Least relations satisfying `cs` and the closure conditions for movement
/// and communication, by worklist iteration.
AnalysisResult solve(const ConstraintSet& cs);

/// `solve(generate_constraints(p))`.
AnalysisResult analyze(const Process& p);

/// Memberships that hold without any closure step: the direct judgment of
/// the initial term under the seeded bindings.
AnalysisResult initial_structure(const ConstraintSet& cs);

/// Every membership of `r` as an unconditional constraint.
std::vector<Constraint> memberships_of(const AnalysisResult& r);

struct JudgmentFailure {
    std::string rule;    // e.g. "ambient", "restriction", "enter", "output"
    std::string detail;  // the missing membership
};

/// Checks `(contents, bindings) ⊨_star p` directly, without solving.
std::optional<JudgmentFailure> check_judgment(const AnalysisResult& r, const Process& p, const AmbientId& star);

inline bool validate(const AnalysisResult& r, const Process& p, const AmbientId& star) {
    return !check_judgment(r, p, star).has_value();
}

/// First closure condition that `r` violates, if any.
std::optional<std::string> closure_violation(const AnalysisResult& r);

}  // namespace bioamb

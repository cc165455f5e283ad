// Term language for BioAmbients processes: names, capabilities, processes,
// and the name-level operations (free names, canonical names, substitution,
// alpha equivalence).
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace bioamb {

/// A channel name.
///
/// Identity is the binder site: `site == 0` marks a free name, identified by
/// its text alone. A bound name is identified by `(site, instance)`; `site` is
/// the syntactic binder it originates from and never changes under
/// alpha-renaming, while `instance` distinguishes copies of that binder
/// (after recursion unfolding or renaming). `text` is only a display hint for
/// bound names.
struct Name {
    std::string text;
    std::uint32_t site = 0;
    std::uint32_t instance = 0;

    static Name free(std::string text) { return Name{std::move(text), 0, 0}; }

    bool is_free() const { return site == 0; }

    friend bool operator==(const Name& a, const Name& b) {
        if (a.site != b.site) return false;
        if (a.site == 0) return a.text == b.text;
        return a.instance == b.instance;
    }
    friend std::strong_ordering operator<=>(const Name& a, const Name& b) {
        if (auto c = a.site <=> b.site; c != 0) return c;
        if (a.site == 0) return a.text <=> b.text;
        return a.instance <=> b.instance;
    }
};

/// Alpha-renaming-stable identity of a name: the originating binder site, or
/// the text for free names.
struct CanonicalName {
    std::uint32_t site = 0;
    std::string text;

    friend bool operator==(const CanonicalName& a, const CanonicalName& b) {
        return a.site == b.site && (a.site != 0 || a.text == b.text);
    }
    friend std::strong_ordering operator<=>(const CanonicalName& a, const CanonicalName& b) {
        if (auto c = a.site <=> b.site; c != 0) return c;
        if (a.site == 0) return a.text <=> b.text;
        return std::strong_ordering::equal;
    }

    /// `text` for free names, `text#site` for bound ones.
    std::string str() const;
};

inline CanonicalName canonical(const Name& n) { return CanonicalName{n.site, n.text}; }

/// Ambient annotation. Identities are labels, never values.
struct AmbientId {
    std::string label;

    /// The reserved enclosing ambient of top-level processes. Its label cannot
    /// be written in source text.
    static AmbientId top() { return AmbientId{"⊤"}; }
    bool is_top() const { return label == top().label; }

    friend auto operator<=>(const AmbientId&, const AmbientId&) = default;
};

enum class Direction { local, down, up, sibling };

enum class CapKind { enter, accept, exit, expel, merge_plus, merge_minus, output, input };

const char* to_string(CapKind k);
const char* to_string(Direction d);

/// Movement kinds carry only a channel. Outputs carry `payload`, inputs carry
/// `binder`, which scopes over the prefix's continuation.
struct Capability {
    CapKind kind = CapKind::enter;
    Name channel;
    Direction dir = Direction::local;
    Name payload;
    Name binder;

    bool is_movement() const { return kind != CapKind::output && kind != CapKind::input; }
    bool is_communication() const { return !is_movement(); }

    static Capability movement(CapKind k, Name ch) { return {k, std::move(ch), Direction::local, {}, {}}; }
    static Capability output(Name ch, Direction d, Name payload) {
        return {CapKind::output, std::move(ch), d, std::move(payload), {}};
    }
    static Capability input(Name ch, Direction d, Name binder) {
        return {CapKind::input, std::move(ch), d, {}, std::move(binder)};
    }

    friend bool operator==(const Capability& a, const Capability& b);
};

struct SourceSpan {
    std::size_t offset = 0;
    std::size_t length = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Process;

struct Zero {};
struct Restriction;
struct Ambient;
struct Prefix;
struct Parallel;
struct Choice;
struct Rec;
struct Var {
    std::string name;
};

/// Immutable, shared process term.
class Process {
public:
    enum class Kind { zero, restriction, ambient, prefix, parallel, choice, rec, var };

    Process();  // 0

    Kind kind() const;
    const Restriction& as_restriction() const;
    const Ambient& as_ambient() const;
    const Prefix& as_prefix() const;
    const Parallel& as_parallel() const;
    const Choice& as_choice() const;
    const Rec& as_rec() const;
    const Var& as_var() const;

    bool is_zero() const { return kind() == Kind::zero; }

    /// Location in the source text, when the term came from the parser.
    const std::optional<SourceSpan>& span() const;
    Process with_span(SourceSpan s) const;

    /// Pointer identity; cheap equality for unchanged subterms.
    bool same(const Process& o) const { return node_ == o.node_; }
    const void* identity() const { return node_.get(); }

    struct Node;
    static Process from_node(Node n);

private:
    explicit Process(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Restriction {
    Name name;
    Process body;
};
struct Ambient {
    AmbientId id;
    Process body;
};
struct Prefix {
    Capability cap;
    Process cont;
};
struct Parallel {
    Process left, right;
};
struct Choice {
    Process left, right;
};
struct Rec {
    std::string var;
    Process body;
};

struct Process::Node {
    std::variant<Zero, Restriction, Ambient, Prefix, Parallel, Choice, Rec, Var> v;
    std::optional<SourceSpan> span;
};

Process zero();
Process restrict(Name n, Process body);
Process ambient(AmbientId id, Process body);
Process prefix(Capability cap, Process cont);
Process par(Process l, Process r);
Process choice(Process l, Process r);
Process rec(std::string var, Process body);
Process var(std::string name);

/// Right-nested parallel composition; `0` when empty.
Process par_all(const std::vector<Process>& ps);
/// Right-nested choice; requires a non-empty list.
Process choice_all(const std::vector<Process>& ps);

/// Parallel components with nested `|` flattened and `0` dropped.
std::vector<Process> parallel_components(const Process& p);
/// Branches of a (possibly nested) choice; a non-choice is a single branch.
std::vector<Process> choice_branches(const Process& p);

/// Names with no enclosing restriction or input binder.
std::set<Name> free_names(const Process& p);

/// Canonical name of every name occurrence (binding and used), in pre-order:
/// restriction names, then for each prefix its channel, payload or binder.
std::vector<CanonicalName> canonicalize(const Process& p);

/// `p[value/variable]`, renaming binders whose identity would capture `value`.
Process substitute(const Process& p, const Name& value, const Name& variable);

/// Replaces free occurrences of process variable `x` by `replacement`.
Process substitute_process_var(const Process& p, const std::string& x, const Process& replacement);

/// Equal up to the choice of bound names (and source spans).
bool alpha_equal(const Process& p, const Process& q);

/// Largest name instance occurring anywhere in `p`.
std::uint32_t max_instance(const Process& p);

/// Renames every binder in `p` to a fresh instance above `next`, advancing it.
Process freshen_binders(const Process& p, std::uint32_t& next);

/// Process variables with no enclosing `rec` of the same identifier.
std::set<std::string> free_process_vars(const Process& p);

/// Ambient labels of every syntactic ambient occurrence, sorted.
std::vector<AmbientId> ambient_occurrences(const Process& p);

/// Number of syntactic nodes.
std::size_t term_size(const Process& p);

}  // namespace bioamb

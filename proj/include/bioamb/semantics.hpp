// Reduction semantics: structural congruence normal form, the one-step
// transition relation, and bounded breadth-first exploration.
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bioamb/ast.hpp"

namespace bioamb {

enum class Rule { enter_accept, exit_expel, merge, comm_local, comm_p2c, comm_c2p, comm_s2s, rec_unfold };

const char* to_string(Rule r);
inline constexpr Rule kAllRules[] = {Rule::enter_accept, Rule::exit_expel, Rule::merge,    Rule::comm_local,
                                     Rule::comm_p2c,     Rule::comm_c2p,   Rule::comm_s2s, Rule::rec_unfold};

/// One application of a reduction axiom.
///
/// `rule` is the axiom that fired; `unfolded` records that the redex was only
/// reachable after unfolding one or more `rec` components. `locus` is the path
/// of ambient labels from the top to the level where the redex sits;
/// `participants` are the two consumed prefixes (for communication: output
/// first, input second; for movements: the moving side first).
struct Redex {
    Rule rule = Rule::comm_local;
    bool unfolded = false;
    std::vector<AmbientId> locus;
    Capability participants[2];

    /// Rule name, suffixed with `+rec_unfold` when unfolding was needed.
    std::string label() const;
};

/// Canonical representative of the congruence class of `p`: restrictions
/// hoisted to the front (through parallel composition and ambients), unused
/// restrictions dropped, parallel components and choice branches sorted,
/// `0` units removed, bound names renamed to a canonical scheme.
Process normalize(const Process& p);

/// Deterministic text key of `normalize(p)`; equal keys mean congruent terms.
std::string state_key(const Process& p);

struct Transition {
    Redex redex;
    Process target;  // normalized
};

/// Every successor of `p` by one axiom application in context.
std::vector<Transition> step(const Process& p);

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    Redex redex;
};

inline constexpr int kDefaultMaxDepth = 64;
inline constexpr std::size_t kDefaultMaxStates = 100000;

struct StateSpace {
    Process initial;
    std::vector<Process> states;      // normalized; states[0] is the initial state
    std::vector<int> depth;           // BFS depth of each state
    std::vector<Edge> edges;
    int depth_reached = 0;
    bool truncated = false;
    bool state_limit_hit = false;
};

/// Breadth-first closure of `step` from `p` up to `max_depth` steps and
/// `max_states` distinct states.
StateSpace explore(const Process& p, int max_depth = kDefaultMaxDepth, std::size_t max_states = kDefaultMaxStates);

}  // namespace bioamb

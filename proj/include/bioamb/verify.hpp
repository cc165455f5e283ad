// Desk-scale check of the analysis theorem: every state reachable from P is
// still described by analyze(P). Also measures how much the analysis
// over-approximates, and generates random small terms for property runs.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bioamb/ast.hpp"
#include "bioamb/cfa.hpp"
#include "bioamb/semantics.hpp"

namespace bioamb {

struct Violation {
    std::size_t state = 0;  // index into the explored state list
    std::string term;       // pretty-printed state
    std::string rule;       // judgment rule that failed
    std::string detail;
};

struct VerificationReport {
    std::string process;
    std::size_t states_checked = 0;
    std::size_t transitions = 0;
    int depth = 0;
    bool truncated = false;
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

using AmbientPair = std::pair<AmbientId, AmbientId>;  // (parent, child)

struct PrecisionReport {
    std::set<AmbientPair> exact;
    std::set<AmbientPair> predicted;
    std::set<AmbientPair> spurious;  // predicted \ exact
    std::set<AmbientPair> missed;    // exact \ predicted
    bool truncated = false;
};

/// Parent-child pairs of ambients in `p`, with ⊤ as the parent of top-level
/// ambients.
std::set<AmbientPair> containment_pairs(const Process& p);

/// Validates `analysis` against every state of `space`.
VerificationReport check_theorem(const AnalysisResult& analysis, const StateSpace& space);

VerificationReport check_theorem(const Process& p, int depth, std::size_t max_states = kDefaultMaxStates);

PrecisionReport measure_precision(const AnalysisResult& analysis, const StateSpace& space);

PrecisionReport measure_precision(const Process& p, int depth, std::size_t max_states = kDefaultMaxStates);

/// Local re-check of one edge: the two participants are the complementary
/// pair of the edge's rule on one channel, and, for sources without choice or
/// recursion, the ambient occurrences change only as the rule allows (kept by
/// movements and communication, one fewer after a merge).
std::optional<std::string> recheck_edge(const StateSpace& space, const Edge& edge);

/// Rule families fired anywhere in `space`; `rec_unfold` counts every redex
/// that needed an unfolding.
std::set<Rule> rules_exercised(const StateSpace& space);

struct GeneratorConfig {
    int max_ambients = 4;
    int max_prefixes = 8;
    std::vector<std::string> channels{"n", "m", "k"};
};

/// Random closed terms with guarded choice, built around interaction seeds
/// so that every rule family has a reasonable chance to fire.
class TermGenerator {
public:
    explicit TermGenerator(std::uint64_t seed, GeneratorConfig config = {});

    /// Source text of the next term.
    std::string next_source();

    /// The next term, parsed.
    Process next();

private:
    struct Budget;

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    bool chance(unsigned percent) { return pick(100) < percent; }

    std::string label();
    std::string channel(const std::vector<std::string>& scope);
    std::string binder();
    std::string random_prefix(std::vector<std::string>& scope);
    std::string continuation(std::vector<std::string> scope, Budget& b, int depth);
    std::string seed_term(Budget& b);

    std::mt19937_64 rng_;
    GeneratorConfig config_;
    int labels_used_ = 0;
    int binders_used_ = 0;
    int recs_used_ = 0;
};

}  // namespace bioamb

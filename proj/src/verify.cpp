#include "bioamb/verify.hpp"

#include <algorithm>

#include "bioamb/parser.hpp"

namespace bioamb {

namespace {

void collect_pairs(const Process& p, const AmbientId& parent, std::set<AmbientPair>& out) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return;
        case Process::Kind::restriction: collect_pairs(p.as_restriction().body, parent, out); return;
        case Process::Kind::ambient:
            out.emplace(parent, p.as_ambient().id);
            collect_pairs(p.as_ambient().body, p.as_ambient().id, out);
            return;
        case Process::Kind::prefix: return;  // guarded ambients are not yet present
        case Process::Kind::parallel:
            collect_pairs(p.as_parallel().left, parent, out);
            collect_pairs(p.as_parallel().right, parent, out);
            return;
        case Process::Kind::choice: return;
        case Process::Kind::rec: collect_pairs(p.as_rec().body, parent, out); return;
    }
}

}  // namespace

std::set<AmbientPair> containment_pairs(const Process& p) {
    std::set<AmbientPair> out;
    collect_pairs(p, AmbientId::top(), out);
    return out;
}

VerificationReport check_theorem(const AnalysisResult& analysis, const StateSpace& space) {
    VerificationReport report;
    report.process = pretty(space.initial);
    report.states_checked = space.states.size();
    report.transitions = space.edges.size();
    report.depth = space.depth_reached;
    report.truncated = space.truncated;

    // Hypothesis of the theorem: the result is closed and seeds every free name.
    if (auto v = closure_violation(analysis)) report.violations.push_back({0, report.process, "closure", *v});
    for (const auto& n : free_names(space.initial)) {
        auto c = canonical(n);
        if (!analysis.binds(c, c))
            report.violations.push_back({0, report.process, "free-name", c.str() + " ∉ R(" + c.str() + ")"});
    }
    for (std::size_t i = 0; i < space.states.size(); ++i) {
        if (auto f = check_judgment(analysis, space.states[i], analysis.top))
            report.violations.push_back({i, pretty(space.states[i]), f->rule, f->detail});
    }
    return report;
}

VerificationReport check_theorem(const Process& p, int depth, std::size_t max_states) {
    auto report = check_theorem(analyze(p), explore(p, depth, max_states));
    report.depth = depth;
    return report;
}

PrecisionReport measure_precision(const AnalysisResult& analysis, const StateSpace& space) {
    PrecisionReport r;
    r.truncated = space.truncated;
    for (const auto& s : space.states) r.exact.merge(containment_pairs(s));
    r.predicted = analysis.ambient_pairs();
    std::ranges::set_difference(r.predicted, r.exact, std::inserter(r.spurious, r.spurious.end()));
    std::ranges::set_difference(r.exact, r.predicted, std::inserter(r.missed, r.missed.end()));
    return r;
}

PrecisionReport measure_precision(const Process& p, int depth, std::size_t max_states) {
    return measure_precision(analyze(p), explore(p, depth, max_states));
}

namespace {

bool has_choice_or_rec(const Process& p) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return false;
        case Process::Kind::choice:
        case Process::Kind::rec: return true;
        case Process::Kind::restriction: return has_choice_or_rec(p.as_restriction().body);
        case Process::Kind::ambient: return has_choice_or_rec(p.as_ambient().body);
        case Process::Kind::prefix: return has_choice_or_rec(p.as_prefix().cont);
        case Process::Kind::parallel:
            return has_choice_or_rec(p.as_parallel().left) || has_choice_or_rec(p.as_parallel().right);
    }
    return false;
}

std::optional<std::pair<CapKind, CapKind>> movement_pair(Rule r) {
    switch (r) {
        case Rule::enter_accept: return std::pair{CapKind::enter, CapKind::accept};
        case Rule::exit_expel: return std::pair{CapKind::exit, CapKind::expel};
        case Rule::merge: return std::pair{CapKind::merge_plus, CapKind::merge_minus};
        default: return std::nullopt;
    }
}

// Directions of (output, input) for each communication rule.
std::optional<std::pair<Direction, Direction>> comm_dirs(Rule r) {
    switch (r) {
        case Rule::comm_local: return std::pair{Direction::local, Direction::local};
        case Rule::comm_p2c: return std::pair{Direction::down, Direction::up};
        case Rule::comm_c2p: return std::pair{Direction::up, Direction::down};
        case Rule::comm_s2s: return std::pair{Direction::sibling, Direction::sibling};
        default: return std::nullopt;
    }
}

}  // namespace

std::optional<std::string> recheck_edge(const StateSpace& space, const Edge& edge) {
    const auto& rx = edge.redex;
    const auto& a = rx.participants[0];
    const auto& b = rx.participants[1];
    if (!(a.channel == b.channel)) return "participants use different channels";
    if (auto kinds = movement_pair(rx.rule)) {
        if (a.kind != kinds->first || b.kind != kinds->second) return "participants do not match the movement rule";
    } else if (auto dirs = comm_dirs(rx.rule)) {
        if (a.kind != CapKind::output || b.kind != CapKind::input) return "participants are not an output/input pair";
        if (a.dir != dirs->first || b.dir != dirs->second) return "directions do not match the communication rule";
    } else {
        return "rec_unfold is a flag, not a rule of its own";
    }

    const Process& from = space.states.at(edge.from);
    const Process& to = space.states.at(edge.to);
    if (rx.unfolded || has_choice_or_rec(from)) return std::nullopt;
    auto before = ambient_occurrences(from);
    auto after = ambient_occurrences(to);
    if (rx.rule != Rule::merge) {
        if (before != after) return "ambient occurrences changed";
    } else {
        if (after.size() + 1 != before.size() || !std::ranges::includes(before, after))
            return "merge must remove exactly one ambient occurrence";
    }
    return std::nullopt;
}

std::set<Rule> rules_exercised(const StateSpace& space) {
    std::set<Rule> out;
    for (const auto& e : space.edges) {
        out.insert(e.redex.rule);
        if (e.redex.unfolded) out.insert(Rule::rec_unfold);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Term generator

struct TermGenerator::Budget {
    int ambients;
    int prefixes;
};

TermGenerator::TermGenerator(std::uint64_t seed, GeneratorConfig config)
    : rng_(seed), config_(std::move(config)) {}

std::string TermGenerator::label() {
    static const char* const labels[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
    if (labels_used_ > 0 && chance(5)) return labels[pick(static_cast<std::size_t>(labels_used_))];
    return labels[labels_used_++ % 8];
}

std::string TermGenerator::channel(const std::vector<std::string>& scope) {
    // Bound input names sit after the pool in `scope`.
    if (scope.size() > config_.channels.size() && chance(30))
        return scope[config_.channels.size() + pick(scope.size() - config_.channels.size())];
    return config_.channels[pick(config_.channels.size())];
}

std::string TermGenerator::binder() { return "x" + std::to_string(binders_used_++); }

std::string TermGenerator::random_prefix(std::vector<std::string>& scope) {
    static const char* const marks[] = {"", "v", "^", "#"};
    switch (pick(8)) {
        case 0: return "enter " + channel(scope);
        case 1: return "accept " + channel(scope);
        case 2: return "exit " + channel(scope);
        case 3: return "expel " + channel(scope);
        case 4: return "merge+ " + channel(scope);
        case 5: return "merge- " + channel(scope);
        case 6: return channel(scope) + "!" + marks[pick(4)] + "{" + channel(scope) + "}";
        default: {
            std::string ch = channel(scope);
            std::string x = binder();
            scope.push_back(x);
            return ch + "?" + marks[pick(4)] + "{" + x + "}";
        }
    }
}

std::string TermGenerator::continuation(std::vector<std::string> scope, Budget& b, int depth) {
    if (b.prefixes == 0 || depth >= 3 || chance(45)) return "0";
    if (b.ambients > 0 && chance(10)) {
        --b.ambients;
        std::string l = label();
        return "[" + continuation(scope, b, depth + 1) + "]^" + l;
    }
    if (b.prefixes >= 2 && chance(20)) {
        b.prefixes -= 2;
        auto s1 = scope, s2 = scope;
        std::string p1 = random_prefix(s1);
        std::string p2 = random_prefix(s2);
        std::string c1 = continuation(s1, b, depth + 1);
        std::string c2 = continuation(s2, b, depth + 1);
        return "(" + p1 + ". " + c1 + " + " + p2 + ". " + c2 + ")";
    }
    --b.prefixes;
    std::string p = random_prefix(scope);
    return p + ". " + continuation(scope, b, depth + 1);
}

std::string TermGenerator::seed_term(Budget& b) {
    struct Family {
        int ambients;
        int prefixes;
    };
    // enter/accept, exit/expel, merge, local, p2c, c2p, s2s
    static constexpr Family families[] = {{2, 2}, {2, 2}, {2, 2}, {0, 2}, {1, 2}, {1, 2}, {2, 2}};
    std::vector<int> fits;
    for (int f = 0; f < 7; ++f)
        if (families[f].ambients <= b.ambients && families[f].prefixes <= b.prefixes) fits.push_back(f);
    if (fits.empty()) return "";
    const int f = fits[pick(fits.size())];
    b.ambients -= families[f].ambients;
    b.prefixes -= families[f].prefixes;

    const std::vector<std::string> pool = config_.channels;
    const std::string n = channel(pool);
    const std::string m = channel(pool);
    // Either side may loop through a recursion instead of continuing.
    const int looped = chance(30) ? static_cast<int>(pick(2)) : -1;
    auto side = [&](int which, const std::string& cap, const std::string& bound) {
        if (which == looped) {
            std::string x = "X" + std::to_string(recs_used_++);
            return "rec " + x + ". " + cap + ". " + x;
        }
        auto scope = pool;
        if (!bound.empty()) scope.push_back(bound);
        return cap + ". " + continuation(scope, b, 1);
    };
    const std::string la = families[f].ambients >= 1 ? label() : "";
    const std::string lb = families[f].ambients >= 2 ? label() : "";
    // Sides are generated in a fixed order so the output depends on the seed alone.
    std::string x = f >= 3 ? binder() : "";
    std::string out_cap, in_cap;
    switch (f) {
        case 0: out_cap = "enter " + n, in_cap = "accept " + n; break;
        case 1: out_cap = "exit " + n, in_cap = "expel " + n; break;
        case 2: out_cap = "merge+ " + n, in_cap = "merge- " + n; break;
        case 3: out_cap = n + "!{" + m + "}", in_cap = n + "?{" + x + "}"; break;
        case 4: out_cap = n + "!v{" + m + "}", in_cap = n + "?^{" + x + "}"; break;
        case 5: out_cap = n + "!^{" + m + "}", in_cap = n + "?v{" + x + "}"; break;
        default: out_cap = n + "!#{" + m + "}", in_cap = n + "?#{" + x + "}"; break;
    }
    const std::string s0 = side(0, out_cap, "");
    const std::string s1 = side(1, in_cap, x);
    switch (f) {
        case 0:
        case 2:
        case 6: return "[" + s0 + "]^" + la + " | [" + s1 + "]^" + lb;
        case 1: return "[[" + s0 + "]^" + la + " | " + s1 + "]^" + lb;
        case 3: return s0 + " | " + s1;
        case 4: return s0 + " | [" + s1 + "]^" + la;
        default: return "[" + s0 + "]^" + la + " | " + s1;
    }
}

std::string TermGenerator::next_source() {
    labels_used_ = 0;
    binders_used_ = 0;
    recs_used_ = 0;
    Budget b{config_.max_ambients, config_.max_prefixes};

    std::vector<std::string> parts;
    parts.push_back(seed_term(b));
    while (b.prefixes >= 2 && chance(50)) {
        std::string s = seed_term(b);
        if (s.empty()) break;
        parts.push_back(s);
    }
    if (b.prefixes > 0 && chance(30)) {
        std::string c = continuation(config_.channels, b, 0);
        if (c != "0") parts.push_back(c);
    }
    if (b.ambients > 0 && chance(25)) {
        --b.ambients;
        std::size_t i = pick(parts.size());
        parts[i] = "[" + parts[i] + "]^" + label();
    }
    std::string text;
    for (std::size_t i = 0; i < parts.size(); ++i) text += (i ? " | " : "") + parts[i];
    if (chance(30)) text = "(" + config_.channels[pick(config_.channels.size())] + ") " + text;
    return text;
}

Process TermGenerator::next() { return parse_or_throw(next_source()); }

}  // namespace bioamb

// One-step transitions and bounded exploration.
//
// A state is viewed as a tree of levels (the top level and each ambient
// body). Each level holds ambients, prefix-guarded choices, and `rec`
// components. Every `rec` component is tentatively unfolded once per chain so
// its prefixes become visible; after a redex fires, unfoldings that the redex
// did not touch are folded back, which keeps unfolding lazy.
#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "bioamb/semantics.hpp"
#include "term_internal.hpp"

namespace bioamb {

const char* to_string(Rule r) {
    switch (r) {
        case Rule::enter_accept: return "enter_accept";
        case Rule::exit_expel: return "exit_expel";
        case Rule::merge: return "merge";
        case Rule::comm_local: return "comm_local";
        case Rule::comm_p2c: return "comm_p2c";
        case Rule::comm_c2p: return "comm_c2p";
        case Rule::comm_s2s: return "comm_s2s";
        case Rule::rec_unfold: return "rec_unfold";
    }
    return "?";
}

std::string Redex::label() const {
    std::string s = to_string(rule);
    if (unfolded && rule != Rule::rec_unfold) s += "+rec_unfold";
    return s;
}

namespace {

struct Item {
    enum class Kind { amb, act, inert, raw } kind = Kind::inert;
    Process original;
    AmbientId label;
    std::vector<Item> inner;
    std::vector<Prefix> branches;
    int group = -1;
    bool touched = false;
    Process raw;
};

struct Group {
    Process rec;
    std::vector<Name> restricted;
    int parent = -1;
    bool kept = false;
};

struct View {
    std::vector<Name> restricted;
    std::vector<Item> top;
    std::vector<Group> groups;
};

class Expander {
public:
    Expander(std::vector<Group>& groups, std::uint32_t& next) : groups_(groups), next_(next) {}

    std::vector<Item> expand(const std::vector<Process>& comps, int group) {
        std::vector<Item> out;
        for (const auto& c : comps) add(c, group, out);
        return out;
    }

private:
    void add(const Process& c, int group, std::vector<Item>& out) {
        Item it;
        it.original = c;
        it.group = group;
        switch (c.kind()) {
            case Process::Kind::zero: return;
            case Process::Kind::ambient:
                it.kind = Item::Kind::amb;
                it.label = c.as_ambient().id;
                it.inner = expand(parallel_components(c.as_ambient().body), -1);
                break;
            case Process::Kind::prefix:
            case Process::Kind::choice: {
                it.kind = Item::Kind::act;
                for (const auto& b : choice_branches(c)) {
                    if (b.kind() != Process::Kind::prefix) {
                        it.kind = Item::Kind::inert;
                        it.branches.clear();
                        break;
                    }
                    it.branches.push_back(b.as_prefix());
                }
                break;
            }
            case Process::Kind::rec: {
                std::string key = detail::term_key(c);
                if (std::find(ancestors_.begin(), ancestors_.end(), key) != ancestors_.end()) break;
                Process body = freshen_binders(c.as_rec().body, next_);
                Process unfolded = substitute_process_var(body, c.as_rec().var, c);
                Group g;
                g.rec = c;
                g.parent = group;
                std::vector<Process> comps;
                detail::hoist(unfolded, next_, g.restricted, comps);
                int id = static_cast<int>(groups_.size());
                groups_.push_back(std::move(g));
                ancestors_.push_back(key);
                for (const auto& u : comps) add(u, id, out);
                ancestors_.pop_back();
                return;
            }
            default: break;  // var, restriction (not present after hoisting)
        }
        out.push_back(std::move(it));
    }

    std::vector<Group>& groups_;
    std::uint32_t& next_;
    std::vector<std::string> ancestors_;
};

using Path = std::vector<int>;

struct Match {
    Rule rule;
    Path level;
    Path first;  // relative to level
    int first_branch;
    Path second;
    int second_branch;
};

std::vector<Item>& level_at(std::vector<Item>& top, const Path& level) {
    std::vector<Item>* cur = &top;
    for (int i : level) cur = &(*cur)[static_cast<std::size_t>(i)].inner;
    return *cur;
}

Item& item_at(std::vector<Item>& lvl, const Path& rel) {
    std::vector<Item>* cur = &lvl;
    Item* it = nullptr;
    for (std::size_t k = 0; k < rel.size(); ++k) {
        it = &(*cur)[static_cast<std::size_t>(rel[k])];
        cur = &it->inner;
    }
    return *it;
}

bool same_channel(const Capability& a, const Capability& b) { return a.channel == b.channel; }

bool is_out(const Capability& c, Direction d) { return c.kind == CapKind::output && c.dir == d; }
bool is_in(const Capability& c, Direction d) { return c.kind == CapKind::input && c.dir == d; }

class Matcher {
public:
    std::vector<Match> run(const std::vector<Item>& top) {
        Path level;
        scan(top, level);
        return std::move(found_);
    }

private:
    template <class Pred>
    void pair_prefixes(const std::vector<Item>& xs, const std::vector<Item>& ys, bool same_list, Pred&& pred,
                       Rule rule, const Path& level, Path first_prefix, Path second_prefix) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i].kind != Item::Kind::act) continue;
            for (std::size_t j = 0; j < ys.size(); ++j) {
                if (ys[j].kind != Item::Kind::act || (same_list && i == j)) continue;
                for (std::size_t bi = 0; bi < xs[i].branches.size(); ++bi)
                    for (std::size_t bj = 0; bj < ys[j].branches.size(); ++bj) {
                        const auto& a = xs[i].branches[bi].cap;
                        const auto& b = ys[j].branches[bj].cap;
                        if (!same_channel(a, b) || !pred(a, b)) continue;
                        Path f = first_prefix, s = second_prefix;
                        f.push_back(static_cast<int>(i));
                        s.push_back(static_cast<int>(j));
                        found_.push_back({rule, level, f, static_cast<int>(bi), s, static_cast<int>(bj)});
                    }
            }
        }
    }

    static auto kinds(CapKind a, CapKind b) {
        return [a, b](const Capability& x, const Capability& y) { return x.kind == a && y.kind == b; };
    }
    static auto comm(Direction out, Direction in) {
        return [out, in](const Capability& x, const Capability& y) { return is_out(x, out) && is_in(y, in); };
    }

    void scan(const std::vector<Item>& lvl, Path& level) {
        pair_prefixes(lvl, lvl, true, comm(Direction::local, Direction::local), Rule::comm_local, level, {}, {});
        for (std::size_t c = 0; c < lvl.size(); ++c) {
            if (lvl[c].kind != Item::Kind::amb) continue;
            int ci = static_cast<int>(c);
            pair_prefixes(lvl, lvl[c].inner, false, comm(Direction::down, Direction::up), Rule::comm_p2c, level, {},
                          {ci});
            pair_prefixes(lvl[c].inner, lvl, false, comm(Direction::up, Direction::down), Rule::comm_c2p, level, {ci},
                          {});
        }
        for (std::size_t a = 0; a < lvl.size(); ++a) {
            if (lvl[a].kind != Item::Kind::amb) continue;
            int ai = static_cast<int>(a);
            for (std::size_t b = 0; b < lvl.size(); ++b) {
                if (a == b || lvl[b].kind != Item::Kind::amb) continue;
                int bi = static_cast<int>(b);
                const auto& ia = lvl[a].inner;
                const auto& ib = lvl[b].inner;
                pair_prefixes(ia, ib, false, kinds(CapKind::enter, CapKind::accept), Rule::enter_accept, level, {ai},
                              {bi});
                pair_prefixes(ia, ib, false, kinds(CapKind::merge_plus, CapKind::merge_minus), Rule::merge, level,
                              {ai}, {bi});
                pair_prefixes(ia, ib, false, comm(Direction::sibling, Direction::sibling), Rule::comm_s2s, level, {ai},
                              {bi});
            }
            // lvl[a] as the expelling parent of one of its children.
            const auto& inner = lvl[a].inner;
            for (std::size_t k = 0; k < inner.size(); ++k) {
                if (inner[k].kind != Item::Kind::amb) continue;
                pair_prefixes(inner[k].inner, inner, false, kinds(CapKind::exit, CapKind::expel), Rule::exit_expel,
                              level, {ai, static_cast<int>(k)}, {ai});
            }
        }
        for (std::size_t c = 0; c < lvl.size(); ++c) {
            if (lvl[c].kind != Item::Kind::amb) continue;
            level.push_back(static_cast<int>(c));
            scan(lvl[c].inner, level);
            level.pop_back();
        }
    }

    std::vector<Match> found_;
};

void touch_path(std::vector<Item>& lvl, const Path& rel) {
    std::vector<Item>* cur = &lvl;
    for (int i : rel) {
        Item& it = (*cur)[static_cast<std::size_t>(i)];
        it.touched = true;
        cur = &it.inner;
    }
}

void mark_kept(const std::vector<Item>& lvl, std::vector<Group>& groups) {
    for (const auto& it : lvl) {
        if (it.touched)
            for (int g = it.group; g >= 0 && !groups[static_cast<std::size_t>(g)].kept;
                 g = groups[static_cast<std::size_t>(g)].parent)
                groups[static_cast<std::size_t>(g)].kept = true;
        mark_kept(it.inner, groups);
    }
}

std::vector<Process> emit(const std::vector<Item>& lvl, const std::vector<Group>& groups) {
    std::vector<Process> out;
    std::set<int> folded;
    for (const auto& it : lvl) {
        // Outermost untouched unfolding containing this item.
        int fold = -1;
        for (int g = it.group; g >= 0; g = groups[static_cast<std::size_t>(g)].parent)
            if (!groups[static_cast<std::size_t>(g)].kept) fold = g;
        if (fold >= 0) {
            if (folded.insert(fold).second) out.push_back(groups[static_cast<std::size_t>(fold)].rec);
            continue;
        }
        switch (it.kind) {
            case Item::Kind::amb: out.push_back(ambient(it.label, par_all(emit(it.inner, groups)))); break;
            case Item::Kind::raw: out.push_back(it.raw); break;
            default: out.push_back(it.original); break;
        }
    }
    return out;
}

std::vector<AmbientId> locus_of(const std::vector<Item>& top, const Path& level) {
    std::vector<AmbientId> out;
    const std::vector<Item>* cur = &top;
    for (int i : level) {
        const Item& it = (*cur)[static_cast<std::size_t>(i)];
        out.push_back(it.label);
        cur = &it.inner;
    }
    return out;
}

Transition apply(const View& base, const Match& m) {
    View v = base;
    std::vector<Item>& lvl = level_at(v.top, m.level);
    touch_path(v.top, m.level);
    touch_path(lvl, m.first);
    touch_path(lvl, m.second);

    Item& first = item_at(lvl, m.first);
    Item& second = item_at(lvl, m.second);
    Prefix p1 = first.branches[static_cast<std::size_t>(m.first_branch)];
    Prefix p2 = second.branches[static_cast<std::size_t>(m.second_branch)];

    Redex redex;
    redex.rule = m.rule;
    redex.locus = locus_of(base.top, m.level);
    redex.participants[0] = p1.cap;
    redex.participants[1] = p2.cap;

    first.kind = Item::Kind::raw;
    second.kind = Item::Kind::raw;
    first.raw = p1.cont;
    if (p1.cap.kind == CapKind::output) {
        second.raw = substitute(p2.cont, p1.cap.payload, p2.cap.binder);
    } else {
        second.raw = p2.cont;
    }

    auto idx = [](int i) { return static_cast<std::size_t>(i); };
    switch (m.rule) {
        case Rule::enter_accept: {
            int a = m.first[0], b = m.second[0];
            Item moving = std::move(lvl[idx(a)]);
            lvl[idx(b)].inner.push_back(std::move(moving));
            lvl.erase(lvl.begin() + a);
            break;
        }
        case Rule::exit_expel: {
            int b = m.first[0], a = m.first[1];
            auto& inner = lvl[idx(b)].inner;
            Item leaving = std::move(inner[idx(a)]);
            inner.erase(inner.begin() + a);
            lvl.push_back(std::move(leaving));
            break;
        }
        case Rule::merge: {
            int a = m.first[0], b = m.second[0];
            auto absorbed = std::move(lvl[idx(b)].inner);
            auto& into = lvl[idx(a)].inner;
            for (auto& it : absorbed) into.push_back(std::move(it));
            lvl.erase(lvl.begin() + b);
            break;
        }
        default: break;
    }

    mark_kept(v.top, v.groups);
    std::vector<Name> restricted = v.restricted;
    for (const auto& g : v.groups) {
        if (!g.kept) continue;
        redex.unfolded = true;
        restricted.insert(restricted.end(), g.restricted.begin(), g.restricted.end());
    }
    Process next = detail::restrict_all(restricted, par_all(emit(v.top, v.groups)));
    return {redex, normalize(next)};
}

}  // namespace

std::vector<Transition> step(const Process& p) {
    Process state = normalize(p);
    View view;
    Process body = state;
    while (body.kind() == Process::Kind::restriction) {
        view.restricted.push_back(body.as_restriction().name);
        body = body.as_restriction().body;
    }
    std::uint32_t next = max_instance(state) + 1;
    Expander ex(view.groups, next);
    view.top = ex.expand(parallel_components(body), -1);

    std::vector<std::pair<std::string, Transition>> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& m : Matcher().run(view.top)) {
        Transition t = apply(view, m);
        std::string key = detail::term_key(t.target);
        if (!seen.insert({key, t.redex.label()}).second) continue;
        out.emplace_back(std::move(key), std::move(t));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.redex.label() < b.second.redex.label();
    });
    std::vector<Transition> result;
    result.reserve(out.size());
    for (auto& [k, t] : out) result.push_back(std::move(t));
    return result;
}

StateSpace explore(const Process& p, int max_depth, std::size_t max_states) {
    StateSpace ss;
    ss.initial = p;
    std::unordered_map<std::string, std::size_t> index;
    Process init = normalize(p);
    index.emplace(detail::term_key(init), 0);
    ss.states.push_back(init);
    ss.depth.push_back(0);
    std::set<std::tuple<std::size_t, std::size_t, std::string>> edge_seen;

    auto add_edge = [&](std::size_t from, std::size_t to, const Redex& r) {
        if (edge_seen.insert({from, to, r.label()}).second) ss.edges.push_back({from, to, r});
    };

    std::vector<std::size_t> frontier{0};
    for (int d = 0; !frontier.empty(); ++d) {
        bool at_bound = d >= max_depth;
        std::vector<std::size_t> next_frontier;
        for (std::size_t s : frontier) {
            for (auto& t : step(ss.states[s])) {
                std::string key = detail::term_key(t.target);
                auto it = index.find(key);
                if (it != index.end()) {
                    add_edge(s, it->second, t.redex);
                    continue;
                }
                if (at_bound) {
                    ss.truncated = true;
                    continue;
                }
                if (ss.states.size() >= max_states) {
                    ss.truncated = true;
                    ss.state_limit_hit = true;
                    continue;
                }
                std::size_t id = ss.states.size();
                index.emplace(std::move(key), id);
                ss.states.push_back(t.target);
                ss.depth.push_back(d + 1);
                ss.depth_reached = std::max(ss.depth_reached, d + 1);
                next_frontier.push_back(id);
                add_edge(s, id, t.redex);
            }
        }
        if (at_bound) break;
        frontier = std::move(next_frontier);
    }
    return ss;
}

}  // namespace bioamb

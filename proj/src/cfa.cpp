#include "bioamb/cfa.hpp"

#include <deque>
#include <map>
#include <memory>
#include <tuple>

namespace bioamb {

namespace {

const char* direction_mark(Direction d) {
    switch (d) {
        case Direction::local: return "";
        case Direction::down: return "v";
        case Direction::up: return "^";
        case Direction::sibling: return "#";
    }
    return "";
}

CanonCapability canon_cap(const Capability& c) {
    switch (c.kind) {
        case CapKind::output: return CanonCapability::output(c.dir, canonical(c.channel), canonical(c.payload));
        case CapKind::input: return CanonCapability::input(c.dir, canonical(c.channel), canonical(c.binder));
        default: return CanonCapability::movement(c.kind, canonical(c.channel));
    }
}

}  // namespace

std::string CanonCapability::str() const {
    switch (kind) {
        case CapKind::output: return channel.str() + "!" + direction_mark(dir) + "{" + arg.str() + "}";
        case CapKind::input: return channel.str() + "?" + direction_mark(dir) + "{" + arg.str() + "}";
        default: return std::string(to_string(kind)) + " " + channel.str();
    }
}

std::string to_string(const ContentItem& item) {
    if (const auto* a = std::get_if<AmbientId>(&item)) return a->label;
    return std::get<CanonCapability>(item).str();
}

std::string to_string(const Constraint& c) {
    if (const auto* f = std::get_if<ContentsFact>(&c)) return to_string(f->item) + " ∈ J(" + f->at.label + ")";
    if (const auto* b = std::get_if<BindingFact>(&c)) return b->value.str() + " ∈ R(" + b->name.str() + ")";
    const auto& r = std::get<CapabilityRule>(c);
    std::string q = "∀v ∈ R(" + r.pattern.channel.str() + ")";
    if (r.pattern.kind == CapKind::output) q += ", ∀w ∈ R(" + r.pattern.arg.str() + ")";
    return q + ": " + r.pattern.str() + "[v" + (r.pattern.kind == CapKind::output ? ",w" : "") + "] ∈ J(" +
           r.at.label + ")";
}

bool AnalysisResult::contains(const AmbientId& parent, const ContentItem& item) const {
    auto it = contents.find(parent);
    return it != contents.end() && it->second.contains(item);
}

bool AnalysisResult::binds(const CanonicalName& name, const CanonicalName& value) const {
    auto it = bindings.find(name);
    return it != bindings.end() && it->second.contains(value);
}

const std::set<CanonicalName>& AnalysisResult::values(const CanonicalName& name) const {
    static const std::set<CanonicalName> empty;
    auto it = bindings.find(name);
    return it == bindings.end() ? empty : it->second;
}

std::set<std::pair<AmbientId, AmbientId>> AnalysisResult::ambient_pairs() const {
    std::set<std::pair<AmbientId, AmbientId>> out;
    for (const auto& [parent, items] : contents)
        for (const auto& item : items)
            if (const auto* a = std::get_if<AmbientId>(&item)) out.emplace(parent, *a);
    return out;
}

// ---------------------------------------------------------------------------
// Constraint generation

namespace {

struct RecInfo {
    Process body;
    std::vector<std::pair<std::string, RecInfo*>> env;  // scope inside the body
    std::set<AmbientId> stars;
};

class Generator {
public:
    explicit Generator(ConstraintSet& cs) : cs_(cs) {}

    void gen(const Process& p, const AmbientId& star, const std::vector<std::pair<std::string, RecInfo*>>& env) {
        switch (p.kind()) {
            case Process::Kind::zero: return;
            case Process::Kind::var: {
                for (auto it = env.rbegin(); it != env.rend(); ++it) {
                    if (it->first != p.as_var().name) continue;
                    RecInfo* info = it->second;
                    if (info->stars.insert(star).second) gen(info->body, star, info->env);
                    return;
                }
                throw OpenTermError("unbound process identifier '" + p.as_var().name + "'");
            }
            case Process::Kind::restriction: {
                auto n = canonical(p.as_restriction().name);
                cs_.constraints.insert(BindingFact{n, n});
                gen(p.as_restriction().body, star, env);
                return;
            }
            case Process::Kind::ambient:
                cs_.ambients.insert(p.as_ambient().id);
                cs_.constraints.insert(ContentsFact{star, p.as_ambient().id});
                gen(p.as_ambient().body, p.as_ambient().id, env);
                return;
            case Process::Kind::prefix:
                cs_.constraints.insert(CapabilityRule{star, canon_cap(p.as_prefix().cap)});
                gen(p.as_prefix().cont, star, env);
                return;
            case Process::Kind::parallel:
                gen(p.as_parallel().left, star, env);
                gen(p.as_parallel().right, star, env);
                return;
            case Process::Kind::choice:
                gen(p.as_choice().left, star, env);
                gen(p.as_choice().right, star, env);
                return;
            case Process::Kind::rec: {
                auto& slot = infos_[p.identity()];
                if (!slot) {
                    slot = std::make_unique<RecInfo>();
                    slot->body = p.as_rec().body;
                    slot->env = env;
                    slot->env.emplace_back(p.as_rec().var, slot.get());
                }
                RecInfo* info = slot.get();
                if (info->stars.insert(star).second) gen(info->body, star, info->env);
                return;
            }
        }
    }

private:
    ConstraintSet& cs_;
    std::map<const void*, std::unique_ptr<RecInfo>> infos_;
};

}  // namespace

ConstraintSet generate_constraints(const Process& p, const AmbientId& top) {
    ConstraintSet cs;
    cs.top = top;
    cs.ambients.insert(top);
    for (const auto& n : free_names(p)) {
        auto c = canonical(n);
        cs.constraints.insert(BindingFact{c, c});
    }
    Generator g(cs);
    g.gen(p, top, {});
    return cs;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

class Solver {
public:
    explicit Solver(const ConstraintSet& cs) : cs_(cs) {
        for (const auto& a : cs.ambients) amb(a);
        amb(cs.top);
        for (const auto& c : cs.constraints) {
            if (const auto* f = std::get_if<ContentsFact>(&c)) {
                amb(f->at);
                if (const auto* a = std::get_if<AmbientId>(&f->item)) amb(*a);
                else intern_names(std::get<CanonCapability>(f->item));
            } else if (const auto* b = std::get_if<BindingFact>(&c)) {
                name(b->name);
                name(b->value);
            } else {
                const auto& r = std::get<CapabilityRule>(c);
                amb(r.at);
                intern_names(r.pattern);
            }
        }
        bindings_.resize(names_.size());
        by_channel_.resize(names_.size());
        by_payload_.resize(names_.size());
    }

    AnalysisResult run() {
        for (const auto& c : cs_.constraints) {
            if (const auto* r = std::get_if<CapabilityRule>(&c)) {
                Template t{amb(r->at), r->pattern.kind, r->pattern.dir, name(r->pattern.channel), -1};
                if (r->pattern.kind == CapKind::output || r->pattern.kind == CapKind::input) t.arg = name(r->pattern.arg);
                int id = static_cast<int>(templates_.size());
                templates_.push_back(t);
                by_channel_[static_cast<std::size_t>(t.channel)].push_back(id);
                if (t.kind == CapKind::output) by_payload_[static_cast<std::size_t>(t.arg)].push_back(id);
            }
        }
        for (const auto& c : cs_.constraints) {
            if (const auto* f = std::get_if<ContentsFact>(&c)) {
                if (const auto* a = std::get_if<AmbientId>(&f->item)) add_amb(amb(f->at), amb(*a));
                else add_cap(amb(f->at), cap_of(std::get<CanonCapability>(f->item)));
            } else if (const auto* b = std::get_if<BindingFact>(&c)) {
                add_binding(name(b->name), name(b->value));
            }
        }
        std::size_t iterations = 0;
        while (!work_.empty()) {
            Fact f = work_.front();
            work_.pop_front();
            ++iterations;
            switch (f.type) {
                case FactType::amb: on_amb(f.a, f.b); break;
                case FactType::cap: on_cap(f.a, f.b); break;
                case FactType::binding: on_binding(f.a, f.b); break;
            }
        }
        AnalysisResult r;
        r.top = cs_.top;
        r.stats.constraints = cs_.constraints.size();
        r.stats.iterations = iterations;
        for (std::size_t a = 0; a < ambs_.size(); ++a) {
            auto& items = r.contents[ambs_[a]];
            for (int c : node(static_cast<int>(a)).children) items.insert(ambs_[static_cast<std::size_t>(c)]);
            for (int k : node(static_cast<int>(a)).caps) items.insert(to_canon(k));
        }
        for (std::size_t n = 0; n < names_.size(); ++n) {
            if (bindings_[n].empty()) continue;
            auto& vals = r.bindings[names_[n]];
            for (int v : bindings_[n]) vals.insert(names_[static_cast<std::size_t>(v)]);
        }
        return r;
    }

private:
    enum class FactType { amb, cap, binding };
    struct Fact {
        FactType type;
        int a, b;
    };
    struct CapKey {
        CapKind kind;
        Direction dir;
        int channel;
        int arg;
        friend auto operator<=>(const CapKey&, const CapKey&) = default;
    };
    struct Template {
        int at;
        CapKind kind;
        Direction dir;
        int channel;
        int arg;
    };
    struct AmbNode {
        std::set<int> children, parents, caps, subset_of;
        // (kind, dir, channel) -> payloads (outputs) or binders (inputs)
        std::map<std::tuple<CapKind, Direction, int>, std::set<int>> comm;
    };

    int amb(const AmbientId& a) {
        auto [it, fresh] = amb_ids_.emplace(a, static_cast<int>(ambs_.size()));
        if (fresh) {
            ambs_.push_back(a);
            nodes_.emplace_back();
        }
        return it->second;
    }
    int name(const CanonicalName& n) {
        auto [it, fresh] = name_ids_.emplace(n, static_cast<int>(names_.size()));
        if (fresh) names_.push_back(n);
        return it->second;
    }
    void intern_names(const CanonCapability& c) {
        name(c.channel);
        if (c.kind == CapKind::output || c.kind == CapKind::input) name(c.arg);
    }
    AmbNode& node(int a) { return nodes_[static_cast<std::size_t>(a)]; }

    int cap_of(const CanonCapability& c) {
        CapKey k{c.kind, c.kind == CapKind::output || c.kind == CapKind::input ? c.dir : Direction::local,
                 name(c.channel), c.kind == CapKind::output || c.kind == CapKind::input ? name(c.arg) : -1};
        return cap_id(k);
    }
    int cap_id(const CapKey& k) {
        auto [it, fresh] = cap_ids_.emplace(k, static_cast<int>(caps_.size()));
        if (fresh) caps_.push_back(k);
        return it->second;
    }
    CanonCapability to_canon(int id) const {
        const auto& k = caps_[static_cast<std::size_t>(id)];
        const auto& ch = names_[static_cast<std::size_t>(k.channel)];
        if (k.kind == CapKind::output) return CanonCapability::output(k.dir, ch, names_[static_cast<std::size_t>(k.arg)]);
        if (k.kind == CapKind::input) return CanonCapability::input(k.dir, ch, names_[static_cast<std::size_t>(k.arg)]);
        return CanonCapability::movement(k.kind, ch);
    }

    bool has_move(int a, CapKind kind, int channel) const {
        auto it = cap_ids_.find(CapKey{kind, Direction::local, channel, -1});
        return it != cap_ids_.end() && nodes_[static_cast<std::size_t>(a)].caps.contains(it->second);
    }
    std::set<int> comm_args(int a, CapKind kind, Direction dir, int channel) const {
        const auto& m = nodes_[static_cast<std::size_t>(a)].comm;
        auto it = m.find({kind, dir, channel});
        return it == m.end() ? std::set<int>{} : it->second;
    }

    void add_amb(int parent, int child) {
        if (node(parent).children.insert(child).second) {
            node(child).parents.insert(parent);
            work_.push_back({FactType::amb, parent, child});
        }
    }
    void add_cap(int a, int cap) {
        if (node(a).caps.insert(cap).second) {
            const auto& k = caps_[static_cast<std::size_t>(cap)];
            if (k.kind == CapKind::output || k.kind == CapKind::input) node(a).comm[{k.kind, k.dir, k.channel}].insert(k.arg);
            work_.push_back({FactType::cap, a, cap});
        }
    }
    void add_binding(int n, int value) {
        if (bindings_[static_cast<std::size_t>(n)].insert(value).second) work_.push_back({FactType::binding, n, value});
    }
    // contents(from) ⊆ contents(to)
    void add_subset(int from, int to) {
        if (!node(from).subset_of.insert(to).second) return;
        for (int c : std::set<int>(node(from).children)) add_amb(to, c);
        for (int k : std::set<int>(node(from).caps)) add_cap(to, k);
    }

    // A new membership `c ∈ contents(mu)`.
    void on_amb(int mu, int c) {
        for (int t : std::set<int>(node(mu).subset_of)) add_amb(t, c);
        for (int k : std::set<int>(node(c).caps)) {
            const CapKey key = caps_[static_cast<std::size_t>(k)];
            const int n = key.channel;
            switch (key.kind) {
                case CapKind::enter:
                    for (int m2 : std::set<int>(node(mu).children))
                        if (has_move(m2, CapKind::accept, n)) add_amb(m2, c);
                    break;
                case CapKind::accept:
                    for (int m1 : std::set<int>(node(mu).children))
                        if (has_move(m1, CapKind::enter, n)) add_amb(c, m1);
                    break;
                case CapKind::merge_plus:
                    for (int m2 : std::set<int>(node(mu).children))
                        if (has_move(m2, CapKind::merge_minus, n)) add_subset(m2, c);
                    break;
                case CapKind::merge_minus:
                    for (int m1 : std::set<int>(node(mu).children))
                        if (has_move(m1, CapKind::merge_plus, n)) add_subset(c, m1);
                    break;
                case CapKind::exit:
                    if (has_move(mu, CapKind::expel, n))
                        for (int g : std::set<int>(node(mu).parents)) add_amb(g, c);
                    break;
                case CapKind::expel:
                    for (int m1 : std::set<int>(node(c).children))
                        if (has_move(m1, CapKind::exit, n)) add_amb(mu, m1);
                    break;
                case CapKind::output:
                    if (key.dir == Direction::up)
                        for (int p : comm_args(mu, CapKind::input, Direction::down, n)) add_binding(p, key.arg);
                    if (key.dir == Direction::sibling)
                        for (int m2 : std::set<int>(node(mu).children))
                            for (int p : comm_args(m2, CapKind::input, Direction::sibling, n)) add_binding(p, key.arg);
                    break;
                case CapKind::input:
                    if (key.dir == Direction::up)
                        for (int m : comm_args(mu, CapKind::output, Direction::down, n)) add_binding(key.arg, m);
                    if (key.dir == Direction::sibling)
                        for (int m1 : std::set<int>(node(mu).children))
                            for (int m : comm_args(m1, CapKind::output, Direction::sibling, n)) add_binding(key.arg, m);
                    break;
            }
        }
    }

    // A new capability in contents(a).
    void on_cap(int a, int k) {
        for (int t : std::set<int>(node(a).subset_of)) add_cap(t, k);
        const CapKey key = caps_[static_cast<std::size_t>(k)];
        const int n = key.channel;
        switch (key.kind) {
            case CapKind::enter:
                for (int mu : std::set<int>(node(a).parents))
                    for (int m2 : std::set<int>(node(mu).children))
                        if (has_move(m2, CapKind::accept, n)) add_amb(m2, a);
                break;
            case CapKind::accept:
                for (int mu : std::set<int>(node(a).parents))
                    for (int m1 : std::set<int>(node(mu).children))
                        if (has_move(m1, CapKind::enter, n)) add_amb(a, m1);
                break;
            case CapKind::exit:
                for (int m2 : std::set<int>(node(a).parents))
                    if (has_move(m2, CapKind::expel, n))
                        for (int g : std::set<int>(node(m2).parents)) add_amb(g, a);
                break;
            case CapKind::expel:
                for (int m1 : std::set<int>(node(a).children))
                    if (has_move(m1, CapKind::exit, n))
                        for (int g : std::set<int>(node(a).parents)) add_amb(g, m1);
                break;
            case CapKind::merge_plus:
                for (int mu : std::set<int>(node(a).parents))
                    for (int m2 : std::set<int>(node(mu).children))
                        if (has_move(m2, CapKind::merge_minus, n)) add_subset(m2, a);
                break;
            case CapKind::merge_minus:
                for (int mu : std::set<int>(node(a).parents))
                    for (int m1 : std::set<int>(node(mu).children))
                        if (has_move(m1, CapKind::merge_plus, n)) add_subset(a, m1);
                break;
            case CapKind::output: {
                const int m = key.arg;
                switch (key.dir) {
                    case Direction::local:
                        for (int p : comm_args(a, CapKind::input, Direction::local, n)) add_binding(p, m);
                        break;
                    case Direction::down:
                        for (int c : std::set<int>(node(a).children))
                            for (int p : comm_args(c, CapKind::input, Direction::up, n)) add_binding(p, m);
                        break;
                    case Direction::up:
                        for (int mu : std::set<int>(node(a).parents))
                            for (int p : comm_args(mu, CapKind::input, Direction::down, n)) add_binding(p, m);
                        break;
                    case Direction::sibling:
                        for (int mu : std::set<int>(node(a).parents))
                            for (int m2 : std::set<int>(node(mu).children))
                                for (int p : comm_args(m2, CapKind::input, Direction::sibling, n)) add_binding(p, m);
                        break;
                }
                break;
            }
            case CapKind::input: {
                const int p = key.arg;
                switch (key.dir) {
                    case Direction::local:
                        for (int m : comm_args(a, CapKind::output, Direction::local, n)) add_binding(p, m);
                        break;
                    case Direction::up:
                        for (int mu : std::set<int>(node(a).parents))
                            for (int m : comm_args(mu, CapKind::output, Direction::down, n)) add_binding(p, m);
                        break;
                    case Direction::down:
                        for (int c : std::set<int>(node(a).children))
                            for (int m : comm_args(c, CapKind::output, Direction::up, n)) add_binding(p, m);
                        break;
                    case Direction::sibling:
                        for (int mu : std::set<int>(node(a).parents))
                            for (int m1 : std::set<int>(node(mu).children))
                                for (int m : comm_args(m1, CapKind::output, Direction::sibling, n)) add_binding(p, m);
                        break;
                }
                break;
            }
        }
    }

    // A new value `v ∈ bindings(n)` re-fires every capability rule watching n.
    void on_binding(int n, int v) {
        for (int id : by_channel_[static_cast<std::size_t>(n)]) {
            const auto& t = templates_[static_cast<std::size_t>(id)];
            if (t.kind == CapKind::output) {
                for (int m : std::set<int>(bindings_[static_cast<std::size_t>(t.arg)]))
                    add_cap(t.at, cap_id({t.kind, t.dir, v, m}));
            } else if (t.kind == CapKind::input) {
                add_cap(t.at, cap_id({t.kind, t.dir, v, t.arg}));
            } else {
                add_cap(t.at, cap_id({t.kind, Direction::local, v, -1}));
            }
        }
        for (int id : by_payload_[static_cast<std::size_t>(n)]) {
            const auto& t = templates_[static_cast<std::size_t>(id)];
            for (int c : std::set<int>(bindings_[static_cast<std::size_t>(t.channel)]))
                add_cap(t.at, cap_id({t.kind, t.dir, c, v}));
        }
    }

    const ConstraintSet& cs_;
    std::map<AmbientId, int> amb_ids_;
    std::vector<AmbientId> ambs_;
    std::vector<AmbNode> nodes_;
    std::map<CanonicalName, int> name_ids_;
    std::vector<CanonicalName> names_;
    std::map<CapKey, int> cap_ids_;
    std::vector<CapKey> caps_;
    std::vector<std::set<int>> bindings_;
    std::vector<std::vector<int>> by_channel_, by_payload_;
    std::vector<Template> templates_;
    std::deque<Fact> work_;
};

}  // namespace

AnalysisResult solve(const ConstraintSet& cs) { return Solver(cs).run(); }

AnalysisResult analyze(const Process& p) { return solve(generate_constraints(p, AmbientId::top())); }

AnalysisResult initial_structure(const ConstraintSet& cs) {
    AnalysisResult r;
    r.top = cs.top;
    r.stats.constraints = cs.constraints.size();
    for (const auto& a : cs.ambients) r.contents[a];
    for (const auto& c : cs.constraints) {
        if (const auto* f = std::get_if<ContentsFact>(&c)) {
            r.contents[f->at].insert(f->item);
            if (const auto* a = std::get_if<AmbientId>(&f->item)) r.contents[*a];
        } else if (const auto* b = std::get_if<BindingFact>(&c)) {
            r.bindings[b->name].insert(b->value);
        }
    }
    const BindingRelation seeds = r.bindings;
    auto values = [&](const CanonicalName& n) {
        auto it = seeds.find(n);
        return it == seeds.end() ? std::set<CanonicalName>{} : it->second;
    };
    for (const auto& c : cs.constraints) {
        const auto* rule = std::get_if<CapabilityRule>(&c);
        if (!rule) continue;
        auto& items = r.contents[rule->at];
        for (const auto& ch : values(rule->pattern.channel)) {
            CanonCapability inst = rule->pattern;
            inst.channel = ch;
            if (inst.kind == CapKind::output) {
                for (const auto& m : values(rule->pattern.arg)) {
                    inst.arg = m;
                    items.insert(inst);
                }
            } else {
                items.insert(inst);
            }
        }
    }
    return r;
}

std::vector<Constraint> memberships_of(const AnalysisResult& r) {
    std::vector<Constraint> out;
    for (const auto& [at, items] : r.contents)
        for (const auto& item : items) out.push_back(ContentsFact{at, item});
    for (const auto& [n, vals] : r.bindings)
        for (const auto& v : vals) out.push_back(BindingFact{n, v});
    return out;
}

// ---------------------------------------------------------------------------
// Judgment

namespace {

std::optional<JudgmentFailure> judge_cap(const AnalysisResult& r, const Capability& c, const AmbientId& star) {
    CanonCapability pattern = canon_cap(c);
    for (const auto& ch : r.values(pattern.channel)) {
        CanonCapability inst = pattern;
        inst.channel = ch;
        if (inst.kind == CapKind::output) {
            for (const auto& m : r.values(pattern.arg)) {
                inst.arg = m;
                if (!r.contains(star, inst))
                    return JudgmentFailure{"output", inst.str() + " ∉ J(" + star.label + ")"};
            }
        } else if (!r.contains(star, inst)) {
            return JudgmentFailure{to_string(c.kind), inst.str() + " ∉ J(" + star.label + ")"};
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<JudgmentFailure> check_judgment(const AnalysisResult& r, const Process& p, const AmbientId& star) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return std::nullopt;
        case Process::Kind::restriction: {
            auto n = canonical(p.as_restriction().name);
            if (!r.binds(n, n)) return JudgmentFailure{"restriction", n.str() + " ∉ R(" + n.str() + ")"};
            return check_judgment(r, p.as_restriction().body, star);
        }
        case Process::Kind::ambient: {
            const auto& id = p.as_ambient().id;
            if (!r.contains(star, id)) return JudgmentFailure{"ambient", id.label + " ∉ J(" + star.label + ")"};
            return check_judgment(r, p.as_ambient().body, id);
        }
        case Process::Kind::prefix:
            if (auto f = judge_cap(r, p.as_prefix().cap, star)) return f;
            return check_judgment(r, p.as_prefix().cont, star);
        case Process::Kind::parallel:
            if (auto f = check_judgment(r, p.as_parallel().left, star)) return f;
            return check_judgment(r, p.as_parallel().right, star);
        case Process::Kind::choice:
            if (auto f = check_judgment(r, p.as_choice().left, star)) return f;
            return check_judgment(r, p.as_choice().right, star);
        case Process::Kind::rec: return check_judgment(r, p.as_rec().body, star);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Closure conditions, checked by enumeration

std::optional<std::string> closure_violation(const AnalysisResult& r) {
    std::vector<AmbientId> ambs;
    for (const auto& [a, items] : r.contents) ambs.push_back(a);
    auto children = [&](const AmbientId& a) {
        std::vector<AmbientId> out;
        auto it = r.contents.find(a);
        if (it == r.contents.end()) return out;
        for (const auto& item : it->second)
            if (const auto* c = std::get_if<AmbientId>(&item)) out.push_back(*c);
        return out;
    };
    auto caps = [&](const AmbientId& a) {
        std::vector<CanonCapability> out;
        auto it = r.contents.find(a);
        if (it == r.contents.end()) return out;
        for (const auto& item : it->second)
            if (const auto* c = std::get_if<CanonCapability>(&item)) out.push_back(*c);
        return out;
    };
    auto comm_pairs = [&](const AmbientId& out_at, Direction od, const AmbientId& in_at, Direction id,
                          const char* rule) -> std::optional<std::string> {
        for (const auto& o : caps(out_at)) {
            if (o.kind != CapKind::output || o.dir != od) continue;
            for (const auto& i : caps(in_at)) {
                if (i.kind != CapKind::input || i.dir != id || !(i.channel == o.channel)) continue;
                if (!r.binds(i.arg, o.arg))
                    return std::string(rule) + ": " + o.arg.str() + " ∉ R(" + i.arg.str() + ")";
            }
        }
        return std::nullopt;
    };

    for (const auto& mu : ambs) {
        if (auto v = comm_pairs(mu, Direction::local, mu, Direction::local, "to local")) return v;
        for (const auto& m1 : children(mu)) {
            if (auto v = comm_pairs(mu, Direction::down, m1, Direction::up, "to child")) return v;
            if (auto v = comm_pairs(m1, Direction::up, mu, Direction::down, "to parent")) return v;
            for (const auto& m2 : children(mu)) {
                if (auto v = comm_pairs(m1, Direction::sibling, m2, Direction::sibling, "to sibling")) return v;
                for (const auto& c1 : caps(m1)) {
                    if (c1.kind == CapKind::enter &&
                        r.contains(m2, CanonCapability::movement(CapKind::accept, c1.channel)) && !r.contains(m2, m1))
                        return "enter/accept: " + m1.label + " ∉ J(" + m2.label + ")";
                    if (c1.kind == CapKind::merge_plus &&
                        r.contains(m2, CanonCapability::movement(CapKind::merge_minus, c1.channel))) {
                        for (const auto& item : r.contents.at(m2))
                            if (!r.contains(m1, item))
                                return "merge: " + to_string(item) + " ∉ J(" + m1.label + ")";
                    }
                }
            }
            // mu as the expelling parent of m1's children
            for (const auto& inner : children(m1))
                for (const auto& c : caps(inner))
                    if (c.kind == CapKind::exit &&
                        r.contains(m1, CanonCapability::movement(CapKind::expel, c.channel)) && !r.contains(mu, inner))
                        return "exit/expel: " + inner.label + " ∉ J(" + mu.label + ")";
        }
    }
    return std::nullopt;
}

}  // namespace bioamb

#include "bioamb/ast.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace bioamb {

std::string CanonicalName::str() const {
    if (site == 0) return text;
    return text + "#" + std::to_string(site);
}

const char* to_string(CapKind k) {
    switch (k) {
        case CapKind::enter: return "enter";
        case CapKind::accept: return "accept";
        case CapKind::exit: return "exit";
        case CapKind::expel: return "expel";
        case CapKind::merge_plus: return "merge+";
        case CapKind::merge_minus: return "merge-";
        case CapKind::output: return "output";
        case CapKind::input: return "input";
    }
    return "?";
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::local: return "local";
        case Direction::down: return "down";
        case Direction::up: return "up";
        case Direction::sibling: return "sibling";
    }
    return "?";
}

bool operator==(const Capability& a, const Capability& b) {
    if (a.kind != b.kind || !(a.channel == b.channel)) return false;
    switch (a.kind) {
        case CapKind::output: return a.dir == b.dir && a.payload == b.payload;
        case CapKind::input: return a.dir == b.dir && a.binder == b.binder;
        default: return true;
    }
}

// ---------------------------------------------------------------------------
// Process representation

namespace {

const std::shared_ptr<const Process::Node>& zero_node() {
    static const auto node = std::make_shared<const Process::Node>(Process::Node{Zero{}, std::nullopt});
    return node;
}

}  // namespace

Process::Process() : node_(zero_node()) {}

Process Process::from_node(Node n) { return Process(std::make_shared<const Node>(std::move(n))); }

Process::Kind Process::kind() const { return static_cast<Kind>(node_->v.index()); }

const Restriction& Process::as_restriction() const { return std::get<Restriction>(node_->v); }
const Ambient& Process::as_ambient() const { return std::get<Ambient>(node_->v); }
const Prefix& Process::as_prefix() const { return std::get<Prefix>(node_->v); }
const Parallel& Process::as_parallel() const { return std::get<Parallel>(node_->v); }
const Choice& Process::as_choice() const { return std::get<Choice>(node_->v); }
const Rec& Process::as_rec() const { return std::get<Rec>(node_->v); }
const Var& Process::as_var() const { return std::get<Var>(node_->v); }

const std::optional<SourceSpan>& Process::span() const { return node_->span; }

Process Process::with_span(SourceSpan s) const { return from_node(Node{node_->v, s}); }

Process zero() { return Process(); }
Process restrict(Name n, Process body) { return Process::from_node({Restriction{std::move(n), std::move(body)}, {}}); }
Process ambient(AmbientId id, Process body) { return Process::from_node({Ambient{std::move(id), std::move(body)}, {}}); }
Process prefix(Capability cap, Process cont) { return Process::from_node({Prefix{std::move(cap), std::move(cont)}, {}}); }
Process par(Process l, Process r) { return Process::from_node({Parallel{std::move(l), std::move(r)}, {}}); }
Process choice(Process l, Process r) { return Process::from_node({Choice{std::move(l), std::move(r)}, {}}); }
Process rec(std::string v, Process body) { return Process::from_node({Rec{std::move(v), std::move(body)}, {}}); }
Process var(std::string name) { return Process::from_node({Var{std::move(name)}, {}}); }

Process par_all(const std::vector<Process>& ps) {
    if (ps.empty()) return zero();
    Process acc = ps.back();
    for (auto it = ps.rbegin() + 1; it != ps.rend(); ++it) acc = par(*it, acc);
    return acc;
}

Process choice_all(const std::vector<Process>& ps) {
    if (ps.empty()) throw std::invalid_argument("choice_all: empty branch list");
    Process acc = ps.back();
    for (auto it = ps.rbegin() + 1; it != ps.rend(); ++it) acc = choice(*it, acc);
    return acc;
}

namespace {

void collect_components(const Process& p, std::vector<Process>& out) {
    switch (p.kind()) {
        case Process::Kind::zero: return;
        case Process::Kind::parallel:
            collect_components(p.as_parallel().left, out);
            collect_components(p.as_parallel().right, out);
            return;
        default: out.push_back(p);
    }
}

void collect_branches(const Process& p, std::vector<Process>& out) {
    if (p.kind() == Process::Kind::choice) {
        collect_branches(p.as_choice().left, out);
        collect_branches(p.as_choice().right, out);
    } else {
        out.push_back(p);
    }
}

}  // namespace

std::vector<Process> parallel_components(const Process& p) {
    std::vector<Process> out;
    collect_components(p, out);
    return out;
}

std::vector<Process> choice_branches(const Process& p) {
    std::vector<Process> out;
    collect_branches(p, out);
    return out;
}

// ---------------------------------------------------------------------------
// Names

namespace {

void cap_free_names(const Capability& c, std::set<Name>& out) {
    out.insert(c.channel);
    if (c.kind == CapKind::output) out.insert(c.payload);
}

std::set<Name> free_names_rec(const Process& p) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return {};
        case Process::Kind::restriction: {
            auto s = free_names_rec(p.as_restriction().body);
            s.erase(p.as_restriction().name);
            return s;
        }
        case Process::Kind::ambient: return free_names_rec(p.as_ambient().body);
        case Process::Kind::prefix: {
            const auto& pre = p.as_prefix();
            auto s = free_names_rec(pre.cont);
            if (pre.cap.kind == CapKind::input) s.erase(pre.cap.binder);
            cap_free_names(pre.cap, s);
            return s;
        }
        case Process::Kind::parallel: {
            auto s = free_names_rec(p.as_parallel().left);
            s.merge(free_names_rec(p.as_parallel().right));
            return s;
        }
        case Process::Kind::choice: {
            auto s = free_names_rec(p.as_choice().left);
            s.merge(free_names_rec(p.as_choice().right));
            return s;
        }
        case Process::Kind::rec: return free_names_rec(p.as_rec().body);
    }
    return {};
}

void canonicalize_rec(const Process& p, std::vector<CanonicalName>& out) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return;
        case Process::Kind::restriction:
            out.push_back(canonical(p.as_restriction().name));
            canonicalize_rec(p.as_restriction().body, out);
            return;
        case Process::Kind::ambient: canonicalize_rec(p.as_ambient().body, out); return;
        case Process::Kind::prefix: {
            const auto& c = p.as_prefix().cap;
            out.push_back(canonical(c.channel));
            if (c.kind == CapKind::output) out.push_back(canonical(c.payload));
            if (c.kind == CapKind::input) out.push_back(canonical(c.binder));
            canonicalize_rec(p.as_prefix().cont, out);
            return;
        }
        case Process::Kind::parallel:
            canonicalize_rec(p.as_parallel().left, out);
            canonicalize_rec(p.as_parallel().right, out);
            return;
        case Process::Kind::choice:
            canonicalize_rec(p.as_choice().left, out);
            canonicalize_rec(p.as_choice().right, out);
            return;
        case Process::Kind::rec: canonicalize_rec(p.as_rec().body, out); return;
    }
}

Name rename_if(const Name& n, const Name& value, const Name& variable) { return n == variable ? value : n; }

// Capture-avoiding substitution. `next` supplies fresh instances.
Process subst(const Process& p, const Name& value, const Name& variable, std::uint32_t& next) {
    if (!free_names_rec(p).contains(variable)) return p;
    const auto& span = p.span();
    auto keep_span = [&](Process q) { return span ? q.with_span(*span) : q; };
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return p;
        case Process::Kind::restriction: {
            Name n = p.as_restriction().name;
            Process body = p.as_restriction().body;
            if (n == value) {
                Name fresh{n.text, n.site, next++};
                body = subst(body, fresh, n, next);
                n = fresh;
            }
            return keep_span(restrict(n, subst(body, value, variable, next)));
        }
        case Process::Kind::ambient:
            return keep_span(ambient(p.as_ambient().id, subst(p.as_ambient().body, value, variable, next)));
        case Process::Kind::prefix: {
            Capability c = p.as_prefix().cap;
            Process cont = p.as_prefix().cont;
            c.channel = rename_if(c.channel, value, variable);
            if (c.kind == CapKind::output) c.payload = rename_if(c.payload, value, variable);
            if (c.kind == CapKind::input) {
                if (c.binder == variable) return keep_span(prefix(c, cont));
                if (c.binder == value) {
                    Name fresh{c.binder.text, c.binder.site, next++};
                    cont = subst(cont, fresh, c.binder, next);
                    c.binder = fresh;
                }
            }
            return keep_span(prefix(c, subst(cont, value, variable, next)));
        }
        case Process::Kind::parallel:
            return keep_span(par(subst(p.as_parallel().left, value, variable, next),
                                 subst(p.as_parallel().right, value, variable, next)));
        case Process::Kind::choice:
            return keep_span(choice(subst(p.as_choice().left, value, variable, next),
                                    subst(p.as_choice().right, value, variable, next)));
        case Process::Kind::rec:
            return keep_span(rec(p.as_rec().var, subst(p.as_rec().body, value, variable, next)));
    }
    return p;
}

}  // namespace

std::set<Name> free_names(const Process& p) { return free_names_rec(p); }

std::vector<CanonicalName> canonicalize(const Process& p) {
    std::vector<CanonicalName> out;
    canonicalize_rec(p, out);
    return out;
}

std::uint32_t max_instance(const Process& p) {
    std::uint32_t m = 0;
    auto see = [&](const Name& n) { m = std::max(m, n.instance); };
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return 0;
        case Process::Kind::restriction:
            see(p.as_restriction().name);
            return std::max(m, max_instance(p.as_restriction().body));
        case Process::Kind::ambient: return max_instance(p.as_ambient().body);
        case Process::Kind::prefix: {
            const auto& c = p.as_prefix().cap;
            see(c.channel);
            if (c.kind == CapKind::output) see(c.payload);
            if (c.kind == CapKind::input) see(c.binder);
            return std::max(m, max_instance(p.as_prefix().cont));
        }
        case Process::Kind::parallel:
            return std::max(max_instance(p.as_parallel().left), max_instance(p.as_parallel().right));
        case Process::Kind::choice:
            return std::max(max_instance(p.as_choice().left), max_instance(p.as_choice().right));
        case Process::Kind::rec: return max_instance(p.as_rec().body);
    }
    return m;
}

Process substitute(const Process& p, const Name& value, const Name& variable) {
    if (value == variable) return p;
    std::uint32_t next = std::max(max_instance(p), value.instance) + 1;
    return subst(p, value, variable, next);
}

Process freshen_binders(const Process& p, std::uint32_t& next) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return p;
        case Process::Kind::restriction: {
            const auto& r = p.as_restriction();
            if (r.name.is_free()) return restrict(r.name, freshen_binders(r.body, next));
            Name fresh{r.name.text, r.name.site, next++};
            return restrict(fresh, freshen_binders(subst(r.body, fresh, r.name, next), next));
        }
        case Process::Kind::ambient: return ambient(p.as_ambient().id, freshen_binders(p.as_ambient().body, next));
        case Process::Kind::prefix: {
            Capability c = p.as_prefix().cap;
            Process cont = p.as_prefix().cont;
            if (c.kind == CapKind::input && !c.binder.is_free()) {
                Name fresh{c.binder.text, c.binder.site, next++};
                cont = subst(cont, fresh, c.binder, next);
                c.binder = fresh;
            }
            return prefix(c, freshen_binders(cont, next));
        }
        case Process::Kind::parallel:
            return par(freshen_binders(p.as_parallel().left, next), freshen_binders(p.as_parallel().right, next));
        case Process::Kind::choice:
            return choice(freshen_binders(p.as_choice().left, next), freshen_binders(p.as_choice().right, next));
        case Process::Kind::rec: return rec(p.as_rec().var, freshen_binders(p.as_rec().body, next));
    }
    return p;
}

Process substitute_process_var(const Process& p, const std::string& x, const Process& replacement) {
    switch (p.kind()) {
        case Process::Kind::zero: return p;
        case Process::Kind::var: return p.as_var().name == x ? replacement : p;
        case Process::Kind::restriction:
            return restrict(p.as_restriction().name, substitute_process_var(p.as_restriction().body, x, replacement));
        case Process::Kind::ambient:
            return ambient(p.as_ambient().id, substitute_process_var(p.as_ambient().body, x, replacement));
        case Process::Kind::prefix:
            return prefix(p.as_prefix().cap, substitute_process_var(p.as_prefix().cont, x, replacement));
        case Process::Kind::parallel:
            return par(substitute_process_var(p.as_parallel().left, x, replacement),
                       substitute_process_var(p.as_parallel().right, x, replacement));
        case Process::Kind::choice:
            return choice(substitute_process_var(p.as_choice().left, x, replacement),
                          substitute_process_var(p.as_choice().right, x, replacement));
        case Process::Kind::rec:
            if (p.as_rec().var == x) return p;
            return rec(p.as_rec().var, substitute_process_var(p.as_rec().body, x, replacement));
    }
    return p;
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

struct AlphaEnv {
    std::vector<std::pair<Name, Name>> names;
    std::vector<std::pair<std::string, std::string>> vars;
};

bool names_alpha(const Name& a, const Name& b, const AlphaEnv& env) {
    for (auto it = env.names.rbegin(); it != env.names.rend(); ++it) {
        bool la = it->first == a;
        bool lb = it->second == b;
        if (la || lb) return la && lb;
    }
    return a == b;
}

bool vars_alpha(const std::string& a, const std::string& b, const AlphaEnv& env) {
    for (auto it = env.vars.rbegin(); it != env.vars.rend(); ++it) {
        bool la = it->first == a;
        bool lb = it->second == b;
        if (la || lb) return la && lb;
    }
    return a == b;
}

bool alpha_rec(const Process& p, const Process& q, AlphaEnv& env) {
    if (p.kind() != q.kind()) return false;
    switch (p.kind()) {
        case Process::Kind::zero: return true;
        case Process::Kind::var: return vars_alpha(p.as_var().name, q.as_var().name, env);
        case Process::Kind::restriction: {
            env.names.emplace_back(p.as_restriction().name, q.as_restriction().name);
            bool ok = alpha_rec(p.as_restriction().body, q.as_restriction().body, env);
            env.names.pop_back();
            return ok;
        }
        case Process::Kind::ambient:
            return p.as_ambient().id == q.as_ambient().id && alpha_rec(p.as_ambient().body, q.as_ambient().body, env);
        case Process::Kind::prefix: {
            const auto& a = p.as_prefix().cap;
            const auto& b = q.as_prefix().cap;
            if (a.kind != b.kind || !names_alpha(a.channel, b.channel, env)) return false;
            if (a.is_communication() && a.dir != b.dir) return false;
            if (a.kind == CapKind::output && !names_alpha(a.payload, b.payload, env)) return false;
            if (a.kind == CapKind::input) {
                env.names.emplace_back(a.binder, b.binder);
                bool ok = alpha_rec(p.as_prefix().cont, q.as_prefix().cont, env);
                env.names.pop_back();
                return ok;
            }
            return alpha_rec(p.as_prefix().cont, q.as_prefix().cont, env);
        }
        case Process::Kind::parallel:
            return alpha_rec(p.as_parallel().left, q.as_parallel().left, env) &&
                   alpha_rec(p.as_parallel().right, q.as_parallel().right, env);
        case Process::Kind::choice:
            return alpha_rec(p.as_choice().left, q.as_choice().left, env) &&
                   alpha_rec(p.as_choice().right, q.as_choice().right, env);
        case Process::Kind::rec: {
            env.vars.emplace_back(p.as_rec().var, q.as_rec().var);
            bool ok = alpha_rec(p.as_rec().body, q.as_rec().body, env);
            env.vars.pop_back();
            return ok;
        }
    }
    return false;
}

void free_vars_rec(const Process& p, std::vector<std::string>& bound, std::set<std::string>& out) {
    switch (p.kind()) {
        case Process::Kind::zero: return;
        case Process::Kind::var:
            if (std::find(bound.begin(), bound.end(), p.as_var().name) == bound.end()) out.insert(p.as_var().name);
            return;
        case Process::Kind::restriction: free_vars_rec(p.as_restriction().body, bound, out); return;
        case Process::Kind::ambient: free_vars_rec(p.as_ambient().body, bound, out); return;
        case Process::Kind::prefix: free_vars_rec(p.as_prefix().cont, bound, out); return;
        case Process::Kind::parallel:
            free_vars_rec(p.as_parallel().left, bound, out);
            free_vars_rec(p.as_parallel().right, bound, out);
            return;
        case Process::Kind::choice:
            free_vars_rec(p.as_choice().left, bound, out);
            free_vars_rec(p.as_choice().right, bound, out);
            return;
        case Process::Kind::rec:
            bound.push_back(p.as_rec().var);
            free_vars_rec(p.as_rec().body, bound, out);
            bound.pop_back();
            return;
    }
}

void ambients_rec(const Process& p, std::vector<AmbientId>& out) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return;
        case Process::Kind::restriction: ambients_rec(p.as_restriction().body, out); return;
        case Process::Kind::ambient:
            out.push_back(p.as_ambient().id);
            ambients_rec(p.as_ambient().body, out);
            return;
        case Process::Kind::prefix: ambients_rec(p.as_prefix().cont, out); return;
        case Process::Kind::parallel:
            ambients_rec(p.as_parallel().left, out);
            ambients_rec(p.as_parallel().right, out);
            return;
        case Process::Kind::choice:
            ambients_rec(p.as_choice().left, out);
            ambients_rec(p.as_choice().right, out);
            return;
        case Process::Kind::rec: ambients_rec(p.as_rec().body, out); return;
    }
}

}  // namespace

bool alpha_equal(const Process& p, const Process& q) {
    AlphaEnv env;
    return alpha_rec(p, q, env);
}

std::set<std::string> free_process_vars(const Process& p) {
    std::vector<std::string> bound;
    std::set<std::string> out;
    free_vars_rec(p, bound, out);
    return out;
}

std::vector<AmbientId> ambient_occurrences(const Process& p) {
    std::vector<AmbientId> out;
    ambients_rec(p, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t term_size(const Process& p) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return 1;
        case Process::Kind::restriction: return 1 + term_size(p.as_restriction().body);
        case Process::Kind::ambient: return 1 + term_size(p.as_ambient().body);
        case Process::Kind::prefix: return 1 + term_size(p.as_prefix().cont);
        case Process::Kind::parallel: return 1 + term_size(p.as_parallel().left) + term_size(p.as_parallel().right);
        case Process::Kind::choice: return 1 + term_size(p.as_choice().left) + term_size(p.as_choice().right);
        case Process::Kind::rec: return 1 + term_size(p.as_rec().body);
    }
    return 1;
}

}  // namespace bioamb

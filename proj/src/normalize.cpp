// Structural congruence normal form.
//
// Congruence axioms: `|` is associative and commutative with unit 0, `+` is
// associative and commutative, alpha-conversion, scope extrusion
// `(n)(P | Q) == P | (n)Q` for n not free in P, `(n)[P]^m == [(n)P]^m`,
// `(n)0 == 0`, and restrictions commute. Together they let every restriction
// that is not under a prefix float to the front of the term.
#include <algorithm>
#include <map>
#include <sstream>

#include "bioamb/semantics.hpp"
#include "term_internal.hpp"

namespace bioamb {
namespace detail {

void hoist(const Process& p, std::uint32_t& next, std::vector<Name>& restricted, std::vector<Process>& components) {
    switch (p.kind()) {
        case Process::Kind::zero: return;
        case Process::Kind::restriction: {
            const auto& r = p.as_restriction();
            Name fresh{r.name.text, r.name.site, next++};
            restricted.push_back(fresh);
            hoist(substitute(r.body, fresh, r.name), next, restricted, components);
            return;
        }
        case Process::Kind::parallel:
            hoist(p.as_parallel().left, next, restricted, components);
            hoist(p.as_parallel().right, next, restricted, components);
            return;
        case Process::Kind::ambient: {
            std::vector<Process> inner;
            hoist(p.as_ambient().body, next, restricted, inner);
            components.push_back(ambient(p.as_ambient().id, par_all(inner)));
            return;
        }
        default: components.push_back(p);
    }
}

Process restrict_all(const std::vector<Name>& names, Process body) {
    for (auto it = names.rbegin(); it != names.rend(); ++it) body = restrict(*it, body);
    return body;
}

namespace {

class KeyWriter {
public:
    KeyWriter(bool shape, std::uint32_t floor) : shape_(shape), floor_(floor) {}

    void name(const Name& n) {
        if (n.is_free()) {
            os_ << "'" << n.text;
        } else if (shape_ && n.instance >= floor_) {
            os_ << "s" << n.site << ".?";
        } else {
            os_ << "s" << n.site << "." << n.instance;
        }
    }

    void cap(const Capability& c) {
        os_ << to_string(c.kind);
        if (c.is_communication()) os_ << "/" << to_string(c.dir);
        os_ << " ";
        name(c.channel);
        if (c.kind == CapKind::output) {
            os_ << "{";
            name(c.payload);
            os_ << "}";
        }
        if (c.kind == CapKind::input) {
            os_ << "{";
            name(c.binder);
            os_ << "}";
        }
    }

    void term(const Process& p) {
        switch (p.kind()) {
            case Process::Kind::zero: os_ << "0"; return;
            case Process::Kind::var: os_ << "$" << p.as_var().name; return;
            case Process::Kind::restriction:
                os_ << "(";
                name(p.as_restriction().name);
                os_ << ")";
                term(p.as_restriction().body);
                return;
            case Process::Kind::ambient:
                os_ << "[";
                term(p.as_ambient().body);
                os_ << "]^" << p.as_ambient().id.label << ";";
                return;
            case Process::Kind::prefix:
                cap(p.as_prefix().cap);
                os_ << ".";
                term(p.as_prefix().cont);
                return;
            case Process::Kind::parallel:
                os_ << "(";
                term(p.as_parallel().left);
                os_ << "|";
                term(p.as_parallel().right);
                os_ << ")";
                return;
            case Process::Kind::choice:
                os_ << "(";
                term(p.as_choice().left);
                os_ << "+";
                term(p.as_choice().right);
                os_ << ")";
                return;
            case Process::Kind::rec:
                os_ << "rec $" << p.as_rec().var << ".";
                term(p.as_rec().body);
                return;
        }
    }

    std::string str() const { return os_.str(); }

private:
    bool shape_;
    std::uint32_t floor_;
    std::ostringstream os_;
};

}  // namespace

std::string term_key(const Process& p, bool shape, std::uint32_t placeholder_floor) {
    KeyWriter w(shape, placeholder_floor);
    w.term(p);
    return w.str();
}

}  // namespace detail

namespace {

using detail::term_key;

// Instances at or above this value are transient placeholders.
constexpr std::uint32_t kPlaceholderFloor = 1u << 30;

std::string rec_var_name(int depth) { return "X" + std::to_string(depth); }

// Renames every rec identifier by its nesting depth.
Process canonical_rec_vars(const Process& p, std::vector<std::pair<std::string, std::string>>& env) {
    switch (p.kind()) {
        case Process::Kind::zero: return p;
        case Process::Kind::var:
            for (auto it = env.rbegin(); it != env.rend(); ++it)
                if (it->first == p.as_var().name) return var(it->second);
            return p;
        case Process::Kind::restriction:
            return restrict(p.as_restriction().name, canonical_rec_vars(p.as_restriction().body, env));
        case Process::Kind::ambient: return ambient(p.as_ambient().id, canonical_rec_vars(p.as_ambient().body, env));
        case Process::Kind::prefix: return prefix(p.as_prefix().cap, canonical_rec_vars(p.as_prefix().cont, env));
        case Process::Kind::parallel:
            return par(canonical_rec_vars(p.as_parallel().left, env), canonical_rec_vars(p.as_parallel().right, env));
        case Process::Kind::choice:
            return choice(canonical_rec_vars(p.as_choice().left, env), canonical_rec_vars(p.as_choice().right, env));
        case Process::Kind::rec: {
            std::string fresh = rec_var_name(static_cast<int>(env.size()));
            env.emplace_back(p.as_rec().var, fresh);
            Process body = canonical_rec_vars(p.as_rec().body, env);
            env.pop_back();
            return rec(fresh, body);
        }
    }
    return p;
}

struct Keyed {
    std::string shape;
    Process term;
};

void sort_by_shape(std::vector<Process>& ps) {
    std::vector<Keyed> keyed;
    keyed.reserve(ps.size());
    for (auto& p : ps) keyed.push_back({term_key(p, true, kPlaceholderFloor), p});
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) { return a.shape < b.shape; });
    for (std::size_t i = 0; i < ps.size(); ++i) ps[i] = keyed[i].term;
}

void collect_placeholders(const Process& p, const std::set<Name>& wanted, std::vector<Name>& order) {
    auto see = [&](const Name& n) {
        if (wanted.contains(n) && std::find(order.begin(), order.end(), n) == order.end()) order.push_back(n);
    };
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return;
        case Process::Kind::restriction: collect_placeholders(p.as_restriction().body, wanted, order); return;
        case Process::Kind::ambient: collect_placeholders(p.as_ambient().body, wanted, order); return;
        case Process::Kind::prefix: {
            const auto& c = p.as_prefix().cap;
            see(c.channel);
            if (c.kind == CapKind::output) see(c.payload);
            collect_placeholders(p.as_prefix().cont, wanted, order);
            return;
        }
        case Process::Kind::parallel:
            collect_placeholders(p.as_parallel().left, wanted, order);
            collect_placeholders(p.as_parallel().right, wanted, order);
            return;
        case Process::Kind::choice:
            collect_placeholders(p.as_choice().left, wanted, order);
            collect_placeholders(p.as_choice().right, wanted, order);
            return;
        case Process::Kind::rec: collect_placeholders(p.as_rec().body, wanted, order); return;
    }
}

Process canon(const Process& p, std::uint32_t depth, std::uint32_t& placeholder);

Process canon_component(const Process& c, std::uint32_t depth, std::uint32_t& placeholder) {
    switch (c.kind()) {
        case Process::Kind::ambient: return ambient(c.as_ambient().id, canon(c.as_ambient().body, depth, placeholder));
        case Process::Kind::rec: return rec(c.as_rec().var, canon(c.as_rec().body, depth, placeholder));
        case Process::Kind::prefix:
        case Process::Kind::choice: {
            std::vector<Process> branches;
            for (const auto& b : choice_branches(c)) {
                if (b.kind() != Process::Kind::prefix) {
                    branches.push_back(canon(b, depth, placeholder));
                    continue;
                }
                Capability cap = b.as_prefix().cap;
                Process cont = b.as_prefix().cont;
                if (cap.kind == CapKind::input) {
                    Name nb{cap.binder.text, cap.binder.site, depth + 1};
                    cont = canon(substitute(cont, nb, cap.binder), depth + 1, placeholder);
                    cap.binder = nb;
                } else {
                    cont = canon(cont, depth, placeholder);
                }
                branches.push_back(prefix(cap, cont));
            }
            sort_by_shape(branches);
            return choice_all(branches);
        }
        default: return canon(c, depth, placeholder);
    }
}

// Bound names get instance `depth + k` for the k-th binder on the path from
// the root, so distinct nested binders never share an identity.
Process canon(const Process& p, std::uint32_t depth, std::uint32_t& placeholder) {
    if (p.kind() == Process::Kind::var) return p;
    std::vector<Name> hoisted;
    std::vector<Process> comps;
    detail::hoist(p, placeholder, hoisted, comps);

    std::set<Name> used;
    for (const auto& c : comps) used.merge(free_names(c));
    std::set<Name> live;
    for (const auto& n : hoisted)
        if (used.contains(n)) live.insert(n);

    auto inner_depth = depth + static_cast<std::uint32_t>(live.size());
    for (auto& c : comps) c = canon_component(c, inner_depth, placeholder);
    sort_by_shape(comps);

    std::vector<Name> order;
    for (const auto& c : comps) collect_placeholders(c, live, order);
    std::vector<Name> finals;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Name f{order[i].text, order[i].site, depth + 1 + static_cast<std::uint32_t>(i)};
        for (auto& c : comps) c = substitute(c, f, order[i]);
        finals.push_back(f);
    }
    return detail::restrict_all(finals, par_all(comps));
}

// Sorts parallel components and choice branches by full key, bottom-up.
Process resort(const Process& p) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return p;
        case Process::Kind::restriction: return restrict(p.as_restriction().name, resort(p.as_restriction().body));
        case Process::Kind::ambient: return ambient(p.as_ambient().id, resort(p.as_ambient().body));
        case Process::Kind::prefix: return prefix(p.as_prefix().cap, resort(p.as_prefix().cont));
        case Process::Kind::rec: return rec(p.as_rec().var, resort(p.as_rec().body));
        case Process::Kind::parallel:
        case Process::Kind::choice: {
            bool is_par = p.kind() == Process::Kind::parallel;
            std::vector<Process> parts = is_par ? parallel_components(p) : choice_branches(p);
            std::vector<std::pair<std::string, Process>> keyed;
            for (const auto& q : parts) {
                Process r = resort(q);
                keyed.emplace_back(term_key(r), r);
            }
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            parts.clear();
            for (auto& [k, q] : keyed) parts.push_back(q);
            return is_par ? par_all(parts) : choice_all(parts);
        }
    }
    return p;
}

}  // namespace

Process normalize(const Process& p) {
    std::vector<std::pair<std::string, std::string>> env;
    Process q = canonical_rec_vars(p, env);
    std::uint32_t placeholder = std::max(kPlaceholderFloor, max_instance(q) + 1);
    return resort(canon(q, 0, placeholder));
}

std::string state_key(const Process& p) { return term_key(normalize(p)); }

}  // namespace bioamb

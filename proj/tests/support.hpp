// Shared helpers for the test binaries.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bioamb/ast.hpp"
#include "bioamb/parser.hpp"

namespace testing {

using namespace bioamb;

inline std::filesystem::path corpus_dir() { return BIOAMB_CORPUS_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline Process load(const std::string& name) { return parse_or_throw(read_file(corpus_dir() / (name + ".bioamb"))); }

inline std::vector<std::string> corpus_names() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
        if (e.path().extension() == ".bioamb") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

inline const char* const kCellMol =
    "(c)(cell1)(cell2)(cell3) [rec X. (enter cell1. X + exit cell2. X + c?^{x}. expel x. X) | "
    "[exit cell3. 0]^D]^mol | [rec X. (accept cell1. X + expel cell2. X + c!v{cell3}. X)]^cell";

/// Random well-formed terms built directly as syntax trees. Binder texts come
/// from a tiny pool so shadowing is common, and occurrences may refer to a
/// shadowed binder by identity, which only a careful printer survives.
class RandomProcess {
public:
    explicit RandomProcess(std::uint64_t seed) : rng_(seed) {}

    Process next(int size = 12) {
        site_ = 0;
        names_.clear();
        recs_.clear();
        return gen(size);
    }

private:
    std::size_t pick(std::size_t n) { return rng_() % n; }

    Name any_name() {
        if (!names_.empty() && pick(3) != 0) return names_[pick(names_.size())];
        static const char* const pool[] = {"n", "m", "k"};
        return Name::free(pool[pick(3)]);
    }

    Name fresh_binder() {
        static const char* const pool[] = {"n", "m", "x"};
        ++site_;
        return Name{pool[pick(3)], site_, 0};
    }

    Capability cap(Name* bound) {
        static const Direction dirs[] = {Direction::local, Direction::down, Direction::up, Direction::sibling};
        switch (pick(8)) {
            case 0: return Capability::movement(CapKind::enter, any_name());
            case 1: return Capability::movement(CapKind::accept, any_name());
            case 2: return Capability::movement(CapKind::exit, any_name());
            case 3: return Capability::movement(CapKind::expel, any_name());
            case 4: return Capability::movement(CapKind::merge_plus, any_name());
            case 5: return Capability::movement(CapKind::merge_minus, any_name());
            case 6: {
                Name ch = any_name();
                return Capability::output(ch, dirs[pick(4)], any_name());
            }
            default: {
                Name ch = any_name();
                *bound = fresh_binder();
                return Capability::input(ch, dirs[pick(4)], *bound);
            }
        }
    }

    Process guarded(int size) {
        Name bound;
        Capability c = cap(&bound);
        const bool binds = c.kind == CapKind::input;
        if (binds) names_.push_back(bound);
        Process cont = !recs_.empty() && pick(4) == 0 ? var(recs_[pick(recs_.size())]) : gen(size - 1);
        if (binds) names_.pop_back();
        return prefix(c, cont);
    }

    Process gen(int size) {
        if (size <= 1) return pick(3) == 0 ? guarded(1) : zero();
        switch (pick(7)) {
            case 0: {
                Name b = fresh_binder();
                names_.push_back(b);
                Process body = gen(size - 1);
                names_.pop_back();
                return restrict(b, body);
            }
            case 1: {
                static const char* const labels[] = {"a", "b", "c"};
                return ambient(AmbientId{labels[pick(3)]}, gen(size - 1));
            }
            case 2: return guarded(size);
            case 3: {
                Process l = gen(size / 2);
                Process r = gen(size - size / 2);
                return par(l, r);
            }
            case 4: {
                Process l = guarded(size / 2);
                Process r = pick(2) ? guarded(size - size / 2) : choice(guarded(size / 4 + 1), guarded(size / 4 + 1));
                return choice(l, r);
            }
            case 5: {
                std::string x = pick(2) ? "X" : "Y";
                recs_.push_back(x);
                Process body = guarded(size - 1);
                recs_.pop_back();
                return rec(x, body);
            }
            default: return zero();
        }
    }

    std::mt19937_64 rng_;
    std::uint32_t site_ = 0;
    std::vector<Name> names_;
    std::vector<std::string> recs_;
};

/// Renames every binder (text and instance, never the site) by a fixed
/// scheme, giving an alpha-variant with the same canonical names.
inline Process alpha_rename(const Process& p, std::uint32_t& next) {
    auto renamed = [&](const Name& n) { return Name{"r" + std::to_string(next), n.site, next++}; };
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return p;
        case Process::Kind::restriction: {
            Name fresh = renamed(p.as_restriction().name);
            return restrict(fresh, alpha_rename(substitute(p.as_restriction().body, fresh, p.as_restriction().name), next));
        }
        case Process::Kind::ambient: return ambient(p.as_ambient().id, alpha_rename(p.as_ambient().body, next));
        case Process::Kind::prefix: {
            Capability c = p.as_prefix().cap;
            Process cont = p.as_prefix().cont;
            if (c.kind == CapKind::input) {
                Name fresh = renamed(c.binder);
                cont = substitute(cont, fresh, c.binder);
                c.binder = fresh;
            }
            return prefix(c, alpha_rename(cont, next));
        }
        case Process::Kind::parallel:
            return par(alpha_rename(p.as_parallel().left, next), alpha_rename(p.as_parallel().right, next));
        case Process::Kind::choice:
            return choice(alpha_rename(p.as_choice().left, next), alpha_rename(p.as_choice().right, next));
        case Process::Kind::rec: return rec(p.as_rec().var, alpha_rename(p.as_rec().body, next));
    }
    return p;
}

/// Applies `f` to every name occurrence and binder.
template <class F>
Process map_names(const Process& p, const F& f) {
    auto cap = [&](Capability c) {
        c.channel = f(c.channel);
        if (c.kind == CapKind::output) c.payload = f(c.payload);
        if (c.kind == CapKind::input) c.binder = f(c.binder);
        return c;
    };
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return p;
        case Process::Kind::restriction: return restrict(f(p.as_restriction().name), map_names(p.as_restriction().body, f));
        case Process::Kind::ambient: return ambient(p.as_ambient().id, map_names(p.as_ambient().body, f));
        case Process::Kind::prefix: return prefix(cap(p.as_prefix().cap), map_names(p.as_prefix().cont, f));
        case Process::Kind::parallel:
            return par(map_names(p.as_parallel().left, f), map_names(p.as_parallel().right, f));
        case Process::Kind::choice:
            return choice(map_names(p.as_choice().left, f), map_names(p.as_choice().right, f));
        case Process::Kind::rec: return rec(p.as_rec().var, map_names(p.as_rec().body, f));
    }
    return p;
}

inline std::vector<std::uint32_t> binder_sites(const Process& p) {
    std::set<std::uint32_t> sites;
    map_names(p, [&](const Name& n) {
        if (n.site) sites.insert(n.site);
        return n;
    });
    return {sites.begin(), sites.end()};
}

/// Congruence up to a renumbering of binder sites, for comparing states with
/// terms parsed from separately written source. Tries every bijection.
template <class KeyFn>
bool same_up_to_sites(const Process& p, const Process& q, const KeyFn& key) {
    auto ps = binder_sites(p);
    auto qs = binder_sites(q);
    if (ps.size() != qs.size()) return false;
    const auto target = key(p);
    std::sort(ps.begin(), ps.end());
    do {
        std::map<std::uint32_t, std::uint32_t> to;
        for (std::size_t i = 0; i < qs.size(); ++i) to[qs[i]] = ps[i];
        auto renamed = map_names(q, [&](const Name& n) {
            return n.site ? Name{n.text, to.at(n.site), n.instance} : n;
        });
        if (key(renamed) == target) return true;
    } while (std::next_permutation(ps.begin(), ps.end()));
    return false;
}

inline Process alpha_rename(const Process& p) {
    std::uint32_t next = max_instance(p) + 1000;
    return alpha_rename(p, next);
}

}  // namespace testing

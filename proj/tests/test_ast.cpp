#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace bioamb;
using testing::RandomProcess;

namespace {

Name free(const char* t) { return Name::free(t); }

std::set<std::string> texts(const std::set<Name>& ns) {
    std::set<std::string> out;
    for (const auto& n : ns) out.insert(n.text);
    return out;
}

Name find_binder(const Process& p, const std::string& text) {
    switch (p.kind()) {
        case Process::Kind::restriction:
            if (p.as_restriction().name.text == text) return p.as_restriction().name;
            return find_binder(p.as_restriction().body, text);
        case Process::Kind::ambient: return find_binder(p.as_ambient().body, text);
        case Process::Kind::prefix:
            if (p.as_prefix().cap.kind == CapKind::input && p.as_prefix().cap.binder.text == text)
                return p.as_prefix().cap.binder;
            return find_binder(p.as_prefix().cont, text);
        case Process::Kind::parallel: {
            Name l = find_binder(p.as_parallel().left, text);
            return l.site ? l : find_binder(p.as_parallel().right, text);
        }
        case Process::Kind::choice: {
            Name l = find_binder(p.as_choice().left, text);
            return l.site ? l : find_binder(p.as_choice().right, text);
        }
        case Process::Kind::rec: return find_binder(p.as_rec().body, text);
        default: return Name{};
    }
}

}  // namespace

TEST_CASE("name identity") {
    CHECK(free("n") == free("n"));
    CHECK_FALSE(free("n") == free("m"));
    CHECK(Name{"n", 3, 0} == Name{"other", 3, 0});
    CHECK_FALSE(Name{"n", 3, 0} == Name{"n", 3, 1});
    CHECK_FALSE(Name{"n", 3, 0} == Name{"n", 4, 0});
    CHECK_FALSE(Name{"n", 3, 0} == free("n"));
    CHECK(canonical(Name{"n", 3, 7}) == canonical(Name{"k", 3, 1}));
    CHECK(canonical(Name{"n", 3, 7}).str() == "n#3");
    CHECK(canonical(free("m")).str() == "m");
}

TEST_CASE("free names") {
    CHECK(free_names(zero()).empty());
    CHECK(texts(free_names(parse_or_throw("(n) n!{m}. 0"))) == std::set<std::string>{"m"});
    CHECK(free_names(parse_or_throw(testing::kCellMol)).empty());
    CHECK(texts(free_names(parse_or_throw("n?{x}. x!{y}. 0 | x!{n}. 0"))) == std::set<std::string>{"n", "x", "y"});
}

TEST_CASE("canonical names") {
    SUBCASE("one binder, one canonical id") {
        auto cs = canonicalize(parse_or_throw("(n) n!{n}. 0"));
        REQUIRE(cs.size() == 3);
        CHECK(cs[0] == cs[1]);
        CHECK(cs[1] == cs[2]);
    }
    SUBCASE("two binders with the same text") {
        auto p = parse_or_throw("(n)( n!{x}. 0 | (n) n?{p}. 0 )");
        auto cs = canonicalize(p);
        // (n) n x (n) n p
        REQUIRE(cs.size() == 6);
        CHECK(cs[0] == cs[1]);
        CHECK(cs[3] == cs[4]);
        CHECK_FALSE(cs[0] == cs[3]);
        auto renamed = canonicalize(parse_or_throw("(n)( n!{x}. 0 | (q) q?{p}. 0 )"));
        CHECK(renamed == cs);
    }
    SUBCASE("alpha variants agree") {
        RandomProcess gen(11);
        for (int i = 0; i < 200; ++i) {
            auto p = gen.next();
            auto q = testing::alpha_rename(p);
            CHECK(alpha_equal(p, q));
            CHECK(canonicalize(p) == canonicalize(q));
        }
    }
}

TEST_CASE("substitution") {
    SUBCASE("absent variable leaves the term alone") {
        auto q = parse_or_throw("enter n. 0 | [exit k. 0]^a");
        CHECK(alpha_equal(substitute(q, free("m"), free("p")), q));
    }
    SUBCASE("expel x becomes expel cell3") {
        auto p = parse_or_throw("expel x. 0");
        CHECK(alpha_equal(substitute(p, free("cell3"), free("x")), parse_or_throw("expel cell3. 0")));
    }
    SUBCASE("a bound name is renamed instead of capturing") {
        auto p = parse_or_throw("(m) x!{m}. 0");
        auto q = substitute(p, free("m"), free("x"));
        REQUIRE(q.kind() == Process::Kind::restriction);
        const auto& body = q.as_restriction().body.as_prefix().cap;
        CHECK(body.channel == free("m"));
        CHECK(body.payload == q.as_restriction().name);
        CHECK_FALSE(body.payload == free("m"));
        CHECK(texts(free_names(q)) == std::set<std::string>{"m"});
        CHECK(alpha_equal(q, parse_or_throw("(z) m!{z}. 0")));
    }
    SUBCASE("input binders shadow") {
        auto p = parse_or_throw("x?{x}. x!{x}. 0 | x!{k}. 0");
        auto q = substitute(p, free("a"), free("x"));
        CHECK(alpha_equal(q, parse_or_throw("a?{x}. x!{x}. 0 | a!{k}. 0")));
    }
    SUBCASE("bound variable substitution") {
        auto p = parse_or_throw("c?{x}. expel x. 0");
        Name x = find_binder(p, "x");
        auto body = p.as_prefix().cont;
        CHECK(alpha_equal(substitute(body, free("cell3"), x), parse_or_throw("expel cell3. 0")));
    }
}

TEST_CASE("substitution properties on random terms") {
    RandomProcess gen(7);
    const Name candidates[] = {free("n"), free("m"), free("k"), free("fresh")};
    for (int i = 0; i < 300; ++i) {
        auto p = gen.next(14);
        auto fn = free_names(p);
        for (const auto& x : candidates) {
            for (const auto& v : candidates) {
                auto q = substitute(p, v, x);
                auto fq = free_names(q);
                std::set<Name> allowed = fn;
                allowed.erase(x);
                if (fn.contains(x)) allowed.insert(v);
                CHECK(std::includes(allowed.begin(), allowed.end(), fq.begin(), fq.end()));
                if (fn.contains(x) && !(x == v)) CHECK(fq.contains(v));
                if (!fn.contains(x)) CHECK(alpha_equal(q, p));
                CHECK(ambient_occurrences(q) == ambient_occurrences(p));
            }
        }
    }
}

TEST_CASE("alpha equivalence") {
    CHECK(alpha_equal(parse_or_throw("(n) n!{m}. 0"), parse_or_throw("(k) k!{m}. 0")));
    CHECK_FALSE(alpha_equal(parse_or_throw("(n) n!{m}. 0"), parse_or_throw("(n) n!{w}. 0")));
    CHECK_FALSE(alpha_equal(parse_or_throw("(n)(m) n!{m}. 0"), parse_or_throw("(n)(m) m!{n}. 0")));
    CHECK(alpha_equal(parse_or_throw("rec X. enter n. X"), parse_or_throw("rec Y. enter n. Y")));
    CHECK_FALSE(alpha_equal(parse_or_throw("[0]^a"), parse_or_throw("[0]^b")));
    CHECK_FALSE(alpha_equal(parse_or_throw("n!{m}. 0"), parse_or_throw("n!v{m}. 0")));

    SUBCASE("equivalence relation on random triples") {
        RandomProcess gen(3);
        for (int i = 0; i < 200; ++i) {
            auto p = gen.next();
            auto q = testing::alpha_rename(p);
            auto r = testing::alpha_rename(q);
            auto other = gen.next();
            CHECK(alpha_equal(p, p));
            CHECK(alpha_equal(p, q) == alpha_equal(q, p));
            CHECK(alpha_equal(p, r));
            CHECK(alpha_equal(p, other) == alpha_equal(other, p));
            if (alpha_equal(p, other)) CHECK(alpha_equal(q, other));
        }
    }
}

TEST_CASE("process variables and helpers") {
    auto p = parse_or_throw("rec X. (enter n. X + exit n. 0)");
    CHECK(free_process_vars(p).empty());
    CHECK(free_process_vars(p.as_rec().body) == std::set<std::string>{"X"});
    auto unfolded = substitute_process_var(p.as_rec().body, "X", p);
    CHECK(free_process_vars(unfolded).empty());
    CHECK(term_size(zero()) == 1);
    CHECK(ambient_occurrences(parse_or_throw("[[0]^b]^a | [0]^a")) ==
          std::vector<AmbientId>{{"a"}, {"a"}, {"b"}});
}

TEST_CASE("freshened binders keep their sites") {
    auto p = parse_or_throw("(n) n?{x}. x!{n}. 0");
    std::uint32_t next = 100;
    auto q = freshen_binders(p, next);
    CHECK(alpha_equal(p, q));
    CHECK(canonicalize(p) == canonicalize(q));
    CHECK(next > 100);
    CHECK_FALSE(q.as_restriction().name == p.as_restriction().name);
}

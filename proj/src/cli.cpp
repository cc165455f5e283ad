#include "bioamb/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bioamb/output.hpp"
#include "bioamb/parser.hpp"

namespace bioamb::cli {

namespace {

using nlohmann::json;

enum class Format { text, json, dot };

struct Options {
    std::string file = "-";
    bool json = false;
    bool dot = false;
    bool text = false;
    int depth = -1;
    std::size_t max_states = kDefaultMaxStates;
    std::uint64_t seed = 42;
    int random = 0;
    bool trace = false;
    bool states = false;
};

struct InputError {
    std::string message;
};

Format format_of(const Options& o) {
    if (o.dot) return Format::dot;
    if (o.json) return Format::json;
    return Format::text;
}

std::string read_input(const std::string& file, std::istream& in) {
    std::ostringstream ss;
    if (file == "-") {
        ss << in.rdbuf();
        return ss.str();
    }
    std::ifstream f(file, std::ios::binary);
    if (!f) throw InputError{file + ": cannot open file"};
    ss << f.rdbuf();
    return ss.str();
}

Process parse_input(const std::string& file, const std::string& text) {
    auto r = parse(text);
    if (!r) throw InputError{(file == "-" ? std::string("<stdin>") : file) + ":" + r.error().str()};
    return r.process();
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

int cmd_fmt(const Options& o, std::istream& in, std::ostream& out) {
    auto text = read_input(o.file, in);
    out << pretty(parse_input(o.file, text)) << "\n";
    return kOk;
}

int cmd_analyze(const Options& o, std::istream& in, std::ostream& out) {
    auto text = read_input(o.file, in);
    auto p = parse_input(o.file, text);
    auto cs = generate_constraints(p);
    auto r = solve(cs);
    switch (format_of(o)) {
        case Format::json: emit_json(out, make_document("analyze", text, to_json(r))); break;
        case Format::dot: out << to_dot(r, initial_structure(cs)); break;
        case Format::text: out << to_text(r); break;
    }
    return kOk;
}

int cmd_simulate(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
    auto text = read_input(o.file, in);
    auto p = parse_input(o.file, text);
    auto space = explore(p, o.depth < 0 ? kDefaultMaxDepth : o.depth, o.max_states);
    if (format_of(o) == Format::json) {
        emit_json(out, make_document("simulate", text, to_json(space, o.states)));
    } else {
        out << summary_line(space) << "\n";
        if (o.trace)
            for (const auto& e : space.edges) out << "s" << e.from << " --" << e.redex.label() << "--> s" << e.to << "\n";
        if (o.states)
            for (std::size_t i = 0; i < space.states.size(); ++i) out << "s" << i << " = " << pretty(space.states[i]) << "\n";
    }
    if (space.truncated)
        err << "warning: exploration truncated"
            << (space.state_limit_hit ? " (state limit reached)" : " (depth bound reached)") << "\n";
    return kOk;
}

bool sound(const PrecisionReport& pr) { return pr.truncated || pr.missed.empty(); }

int cmd_verify(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
    const int depth = o.depth < 0 ? 6 : o.depth;
    const bool as_json = format_of(o) == Format::json;

    if (o.random <= 0) {
        auto text = read_input(o.file, in);
        auto p = parse_input(o.file, text);
        auto analysis = analyze(p);
        auto space = explore(p, depth, o.max_states);
        auto vr = check_theorem(analysis, space);
        vr.depth = depth;
        auto pr = measure_precision(analysis, space);
        if (as_json) {
            emit_json(out, make_document("verify", text, json{{"verification", to_json(vr)}, {"precision", to_json(pr)}}));
        } else {
            out << to_text(vr) << to_text(pr);
        }
        if (vr.truncated) err << "warning: exploration truncated; the check covers the explored states only\n";
        return vr.ok() && sound(pr) ? kOk : kViolation;
    }

    TermGenerator gen(o.seed);
    json terms = json::array();
    std::string sources;
    std::set<Rule> exercised;
    std::size_t violations = 0, missed = 0, states = 0, truncated = 0;
    for (int i = 0; i < o.random; ++i) {
        auto src = gen.next_source();
        sources += src + "\n";
        auto p = parse_or_throw(src);
        auto analysis = analyze(p);
        auto space = explore(p, depth, o.max_states);
        auto vr = check_theorem(analysis, space);
        vr.depth = depth;
        auto pr = measure_precision(analysis, space);
        exercised.merge(rules_exercised(space));
        violations += vr.violations.size();
        missed += sound(pr) ? 0 : 1;
        states += vr.states_checked;
        truncated += vr.truncated ? 1 : 0;
        if (as_json) {
            terms.push_back({{"source", src}, {"verification", to_json(vr)}, {"precision", to_json(pr)}});
        } else if (!vr.ok() || !sound(pr)) {
            out << "term " << i << ": " << src << "\n" << to_text(vr) << to_text(pr);
        }
    }
    const bool self_test = exercised.size() == std::size(kAllRules);
    if (as_json) {
        json rules = json::array();
        for (auto r : exercised) rules.push_back(to_string(r));
        emit_json(out, make_document("verify", sources,
                                     json{{"seed", o.seed},
                                          {"count", o.random},
                                          {"depth", depth},
                                          {"states_checked", states},
                                          {"violations", violations},
                                          {"unsound_precision", missed},
                                          {"truncated_runs", truncated},
                                          {"rules_exercised", rules},
                                          {"generator_self_test", self_test},
                                          {"terms", terms}}));
    } else {
        out << o.random << " random terms (seed " << o.seed << ", depth " << depth << "): " << states
            << " states checked, " << violations << (violations == 1 ? " violation" : " violations") << "\n";
        out << "rule families exercised: " << exercised.size() << "/" << std::size(kAllRules);
        for (auto r : exercised) out << " " << to_string(r);
        out << "\n";
        out << "generator self-test: " << (self_test ? "pass" : "FAIL") << "\n";
    }
    if (!self_test) err << "warning: not every rule family fired; raise --random or --depth\n";
    return violations == 0 && missed == 0 ? kOk : kViolation;
}

void add_file(CLI::App* sub, Options& o) { sub->add_option("file", o.file, "input file, or - for standard input"); }

void add_common(CLI::App* sub, Options& o, bool with_dot) {
    add_file(sub, o);
    auto* j = sub->add_flag("--json", o.json, "JSON document output");
    auto* t = sub->add_flag("--text", o.text, "plain text output (default)");
    if (with_dot) {
        auto* d = sub->add_flag("--dot", o.dot, "Graphviz output of the contents graph");
        d->excludes(j)->excludes(t);
        j->excludes(d);
        t->excludes(d);
    }
    j->excludes(t);
    t->excludes(j);
}

void add_bounds(CLI::App* sub, Options& o) {
    sub->add_option("--depth", o.depth, "exploration depth bound")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-states", o.max_states, "exploration state limit")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"BioAmbients parser, simulator and control-flow analysis", "bioamb"};
    app.require_subcommand(1, 1);
    Options o;

    auto* fmt = app.add_subcommand("fmt", "pretty-print a process");
    add_file(fmt, o);

    auto* an = app.add_subcommand("analyze", "control-flow analysis");
    add_common(an, o, true);

    auto* sim = app.add_subcommand("simulate", "explore the reduction state space");
    add_common(sim, o, false);
    add_bounds(sim, o);
    sim->add_flag("--trace", o.trace, "print every transition");
    sim->add_flag("--states", o.states, "print every state");

    auto* ver = app.add_subcommand("verify", "check the analysis against every reachable state");
    add_common(ver, o, false);
    add_bounds(ver, o);
    ver->add_option("--seed", o.seed, "generator seed for --random");
    ver->add_option("--random", o.random, "check K generated terms instead of a file")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (fmt->parsed()) return cmd_fmt(o, in, out);
        if (an->parsed()) return cmd_analyze(o, in, out);
        if (sim->parsed()) return cmd_simulate(o, in, out, err);
        return cmd_verify(o, in, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.message << "\n";
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
    }
    return kInputError;
}

}  // namespace bioamb::cli

#include "bioamb/output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bioamb/parser.hpp"

namespace bioamb {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* const hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

json make_document(std::string_view command, std::string_view input, json payload) {
    return json{{"schema_version", kSchemaVersion},
                {"command", std::string(command)},
                {"input_digest", "sha256:" + sha256_hex(input)},
                {"payload", std::move(payload)}};
}

namespace {

std::vector<std::string> sorted_items(const std::set<ContentItem>& items) {
    std::vector<std::string> out;
    for (const auto& i : items) out.push_back(to_string(i));
    std::ranges::sort(out);
    return out;
}

json pairs_json(const std::set<AmbientPair>& pairs) {
    json out = json::array();
    for (const auto& [parent, child] : pairs) out.push_back({parent.label, child.label});
    return out;
}

std::string pairs_text(const std::set<AmbientPair>& pairs) {
    if (pairs.empty()) return "none";
    std::string out;
    for (const auto& [parent, child] : pairs) {
        if (!out.empty()) out += ", ";
        out += child.label + " in " + parent.label;
    }
    return out;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

json to_json(const AnalysisResult& r) {
    json ambients = json::array();
    json contents = json::object();
    for (const auto& [a, items] : r.contents) {
        ambients.push_back(a.label);
        contents[a.label] = sorted_items(items);
    }
    json bindings = json::object();
    for (const auto& [n, vals] : r.bindings) {
        std::vector<std::string> v;
        for (const auto& x : vals) v.push_back(x.str());
        std::ranges::sort(v);
        bindings[n.str()] = v;
    }
    return json{{"ambients", ambients},
                {"contents", contents},
                {"bindings", bindings},
                {"top", r.top.label},
                {"stats", {{"constraints", r.stats.constraints}, {"iterations", r.stats.iterations}}}};
}

json to_json(const StateSpace& s, bool with_terms) {
    std::map<std::string, std::size_t> rules;
    json edges = json::array();
    for (const auto& e : s.edges) {
        ++rules[e.redex.label()];
        edges.push_back({{"from", e.from}, {"to", e.to}, {"rule", e.redex.label()}});
    }
    json out{{"states", s.states.size()},
             {"transitions", s.edges.size()},
             {"depth_reached", s.depth_reached},
             {"truncated", s.truncated},
             {"state_limit_hit", s.state_limit_hit},
             {"rules", rules},
             {"edges", edges}};
    if (with_terms) {
        json terms = json::array();
        for (const auto& p : s.states) terms.push_back(pretty(p));
        out["terms"] = terms;
    }
    return out;
}

json to_json(const VerificationReport& r) {
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"state", v.state}, {"term", v.term}, {"rule", v.rule}, {"detail", v.detail}});
    return json{{"process", r.process},
                {"states_checked", r.states_checked},
                {"transitions", r.transitions},
                {"depth", r.depth},
                {"truncated", r.truncated},
                {"violations", violations}};
}

json to_json(const PrecisionReport& r) {
    return json{{"exact_pairs", pairs_json(r.exact)},
                {"predicted_pairs", pairs_json(r.predicted)},
                {"spurious", pairs_json(r.spurious)},
                {"missed", pairs_json(r.missed)},
                {"truncated", r.truncated}};
}

std::string to_dot(const AnalysisResult& r, const AnalysisResult& initial) {
    std::ostringstream os;
    os << "digraph analysis {\n";
    os << "  node [shape=oval];\n";
    for (const auto& [a, items] : r.contents) os << "  " << dot_quote("amb:" + a.label) << " [label=" << dot_quote(a.label) << "];\n";
    for (const auto& [a, items] : r.contents) {
        const std::string from = dot_quote("amb:" + a.label);
        for (const auto& item : items) {
            const char* color = initial.contains(a, item) ? "black" : "red";
            if (const auto* child = std::get_if<AmbientId>(&item)) {
                os << "  " << from << " -> " << dot_quote("amb:" + child->label) << " [color=" << color << "];\n";
            } else {
                const std::string text = to_string(item);
                const std::string id = dot_quote("cap:" + a.label + ":" + text);
                os << "  " << id << " [shape=box, label=" << dot_quote(text) << "];\n";
                os << "  " << from << " -> " << id << " [color=" << color << "];\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

std::string to_text(const AnalysisResult& r) {
    std::ostringstream os;
    os << "contents:\n";
    for (const auto& [a, items] : r.contents) {
        os << "  " << a.label << ":";
        bool first = true;
        for (const auto& s : sorted_items(items)) {
            os << (first ? " " : ", ") << s;
            first = false;
        }
        os << "\n";
    }
    os << "bindings:\n";
    for (const auto& [n, vals] : r.bindings) {
        os << "  " << n.str() << ":";
        bool first = true;
        for (const auto& v : vals) {
            os << (first ? " " : ", ") << v.str();
            first = false;
        }
        os << "\n";
    }
    os << "stats: " << r.stats.constraints << " constraints, " << r.stats.iterations << " iterations\n";
    return os.str();
}

std::string summary_line(const StateSpace& s) {
    auto n = s.states.size();
    auto m = s.edges.size();
    return std::to_string(n) + (n == 1 ? " state, " : " states, ") + std::to_string(m) +
           (m == 1 ? " transition" : " transitions");
}

std::string to_text(const VerificationReport& r) {
    std::ostringstream os;
    os << "checked " << r.states_checked << (r.states_checked == 1 ? " state" : " states") << " (depth " << r.depth
       << (r.truncated ? ", truncated" : "") << "): " << r.violations.size()
       << (r.violations.size() == 1 ? " violation" : " violations") << "\n";
    for (const auto& v : r.violations)
        os << "  s" << v.state << " [" << v.rule << "] " << v.detail << "\n    " << v.term << "\n";
    return os.str();
}

std::string to_text(const PrecisionReport& r) {
    std::ostringstream os;
    os << "exact:     " << pairs_text(r.exact) << "\n";
    os << "predicted: " << pairs_text(r.predicted) << "\n";
    os << "spurious:  " << pairs_text(r.spurious) << "\n";
    os << "missed:    " << pairs_text(r.missed) << "\n";
    return os.str();
}

}  // namespace bioamb

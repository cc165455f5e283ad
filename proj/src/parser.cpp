#include "bioamb/parser.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bioamb {

const char* to_string(ParseError::Kind k) {
    switch (k) {
        case ParseError::Kind::lex: return "lex";
        case ParseError::Kind::syntax: return "syntax";
        case ParseError::Kind::unbound_process_variable: return "unbound-process-variable";
        case ParseError::Kind::unguarded_choice: return "unguarded-choice";
    }
    return "?";
}

std::string ParseError::str() const {
    std::ostringstream os;
    os << span.line << ":" << span.column << ": " << to_string(kind) << ": " << message;
    return os.str();
}

namespace {

enum class Tok {
    zero,
    ident,
    lparen,
    rparen,
    lbracket,
    rbracket,
    lbrace,
    rbrace,
    caret,
    hash,
    bang,
    question,
    dot,
    bar,
    plus,
    kw_rec,
    kw_enter,
    kw_accept,
    kw_exit,
    kw_expel,
    kw_merge_plus,
    kw_merge_minus,
    end,
};

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

struct Failure {
    ParseError error;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            SourceSpan start = here();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::end, "", start});
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t b = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                std::string word(src_.substr(b, pos_ - b));
                Tok k = Tok::ident;
                if (word == "rec") k = Tok::kw_rec;
                else if (word == "enter") k = Tok::kw_enter;
                else if (word == "accept") k = Tok::kw_accept;
                else if (word == "exit") k = Tok::kw_exit;
                else if (word == "expel") k = Tok::kw_expel;
                else if (word == "merge") {
                    if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                        k = src_[pos_] == '+' ? Tok::kw_merge_plus : Tok::kw_merge_minus;
                        word += src_[pos_];
                        advance();
                    } else {
                        throw Failure{{ParseError::Kind::lex, finish(start), "'merge' must be followed by '+' or '-'"}};
                    }
                }
                out.push_back({k, word, finish(start)});
                continue;
            }
            if (c == '0') {
                advance();
                if (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_])))
                    throw Failure{{ParseError::Kind::lex, finish(start), "identifiers cannot start with a digit"}};
                out.push_back({Tok::zero, "0", finish(start)});
                continue;
            }
            Tok k;
            switch (c) {
                case '(': k = Tok::lparen; break;
                case ')': k = Tok::rparen; break;
                case '[': k = Tok::lbracket; break;
                case ']': k = Tok::rbracket; break;
                case '{': k = Tok::lbrace; break;
                case '}': k = Tok::rbrace; break;
                case '^': k = Tok::caret; break;
                case '#': k = Tok::hash; break;
                case '!': k = Tok::bang; break;
                case '?': k = Tok::question; break;
                case '.': k = Tok::dot; break;
                case '|': k = Tok::bar; break;
                case '+': k = Tok::plus; break;
                default: {
                    advance();
                    std::string shown = std::isprint(static_cast<unsigned char>(c))
                                            ? std::string(1, c)
                                            : "\\x" + hex(static_cast<unsigned char>(c));
                    throw Failure{{ParseError::Kind::lex, finish(start), "unexpected character '" + shown + "'"}};
                }
            }
            advance();
            out.push_back({k, std::string(1, c), finish(start)});
        }
    }

private:
    static std::string hex(unsigned char c) {
        const char* digits = "0123456789abcdef";
        return {digits[c >> 4], digits[c & 15]};
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    SourceSpan here() const { return {pos_, 0, line_, col_}; }
    SourceSpan finish(SourceSpan s) const {
        s.length = pos_ - s.offset;
        return s;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

constexpr int kMaxNesting = 2000;

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Process run() {
        Process p = parse_group();
        if (peek().kind != Tok::end) fail(peek().span, "unexpected '" + peek().text + "'");
        return p;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        std::size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    const Token& take() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    [[noreturn]] void fail(SourceSpan s, std::string msg, ParseError::Kind k = ParseError::Kind::syntax) {
        throw Failure{{k, s, std::move(msg)}};
    }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) {
            std::string got = peek().kind == Tok::end ? "end of input" : "'" + peek().text + "'";
            fail(peek().span, std::string("expected ") + what + ", found " + got);
        }
        return take();
    }

    SourceSpan span_from(const SourceSpan& start) const {
        const Token& last = toks_[pos_ == 0 ? 0 : pos_ - 1];
        SourceSpan s = start;
        std::size_t end = last.span.offset + last.span.length;
        s.length = end > start.offset ? end - start.offset : 0;
        return s;
    }

    static bool starts_process(Tok k) {
        switch (k) {
            case Tok::zero:
            case Tok::ident:
            case Tok::lparen:
            case Tok::lbracket:
            case Tok::kw_rec:
            case Tok::kw_enter:
            case Tok::kw_accept:
            case Tok::kw_exit:
            case Tok::kw_expel:
            case Tok::kw_merge_plus:
            case Tok::kw_merge_minus: return true;
            default: return false;
        }
    }

    struct Depth {
        explicit Depth(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxNesting) p_.fail(p_.peek().span, "nesting too deep");
        }
        ~Depth() { --p_.depth_; }
        Parser& p_;
    };

    Process parse_group() {
        Depth guard(*this);
        SourceSpan start = peek().span;
        Process left = parse_sum();
        if (peek().kind == Tok::bar) {
            take();
            Process right = parse_group();
            return par(left, right).with_span(span_from(start));
        }
        return left;
    }

    static bool guarded(const Process& p) {
        return p.kind() == Process::Kind::prefix || p.kind() == Process::Kind::choice;
    }

    Process parse_sum() {
        Depth guard(*this);
        SourceSpan start = peek().span;
        Process left = parse_unary();
        if (peek().kind == Tok::plus) {
            take();
            SourceSpan rstart = peek().span;
            Process right = parse_sum();
            if (!guarded(left))
                fail(left.span().value_or(start), "choice branch must start with a capability prefix",
                     ParseError::Kind::unguarded_choice);
            if (!guarded(right))
                fail(right.span().value_or(rstart), "choice branch must start with a capability prefix",
                     ParseError::Kind::unguarded_choice);
            return choice(left, right).with_span(span_from(start));
        }
        return left;
    }

    Name bind(const std::string& text) {
        Name n{text, ++site_counter_, 0};
        return n;
    }

    Name lookup(const Token& t) const {
        for (auto it = names_.rbegin(); it != names_.rend(); ++it)
            if (it->text == t.text) return *it;
        return Name::free(t.text);
    }

    Process parse_unary() {
        Depth guard(*this);
        const Token& t = peek();
        SourceSpan start = t.span;
        switch (t.kind) {
            case Tok::zero: take(); return zero().with_span(start);
            case Tok::lparen: {
                if (peek(1).kind == Tok::ident && peek(2).kind == Tok::rparen && starts_process(peek(3).kind)) {
                    take();
                    std::string text = take().text;
                    take();
                    Name n = bind(text);
                    names_.push_back(n);
                    Process body = parse_group();
                    names_.pop_back();
                    return restrict(n, body).with_span(span_from(start));
                }
                take();
                Process inner = parse_group();
                expect(Tok::rparen, "')'");
                return inner;
            }
            case Tok::lbracket: {
                take();
                Process body = parse_group();
                expect(Tok::rbracket, "']'");
                expect(Tok::caret, "'^' before ambient label");
                const Token& label = expect(Tok::ident, "ambient label");
                return ambient(AmbientId{label.text}, body).with_span(span_from(start));
            }
            case Tok::kw_rec: {
                take();
                const Token& x = expect(Tok::ident, "process identifier after 'rec'");
                std::string var_name = x.text;
                expect(Tok::dot, "'.' after recursion identifier");
                rec_vars_.push_back(var_name);
                Process body = parse_unary();
                rec_vars_.pop_back();
                return rec(var_name, body).with_span(span_from(start));
            }
            case Tok::kw_enter:
            case Tok::kw_accept:
            case Tok::kw_exit:
            case Tok::kw_expel:
            case Tok::kw_merge_plus:
            case Tok::kw_merge_minus: {
                Tok k = take().kind;
                const Token& ch = expect(Tok::ident, "channel name");
                CapKind kind = k == Tok::kw_enter    ? CapKind::enter
                               : k == Tok::kw_accept ? CapKind::accept
                               : k == Tok::kw_exit   ? CapKind::exit
                               : k == Tok::kw_expel  ? CapKind::expel
                               : k == Tok::kw_merge_plus ? CapKind::merge_plus
                                                         : CapKind::merge_minus;
                Capability cap = Capability::movement(kind, lookup(ch));
                expect(Tok::dot, "'.' after capability");
                Process cont = parse_unary();
                return prefix(cap, cont).with_span(span_from(start));
            }
            case Tok::ident: {
                if (peek(1).kind == Tok::bang || peek(1).kind == Tok::question) return parse_communication();
                const Token& x = take();
                bool bound = false;
                for (const auto& v : rec_vars_) bound = bound || v == x.text;
                if (!bound)
                    fail(x.span, "process identifier '" + x.text + "' is not bound by an enclosing rec",
                         ParseError::Kind::unbound_process_variable);
                return var(x.text).with_span(x.span);
            }
            case Tok::end: fail(t.span, "unexpected end of input, expected a process");
            default: fail(t.span, "unexpected '" + t.text + "', expected a process");
        }
    }

    Direction parse_direction() {
        const Token& t = peek();
        if (t.kind == Tok::lbrace) return Direction::local;
        if (t.kind == Tok::caret) {
            take();
            return Direction::up;
        }
        if (t.kind == Tok::hash) {
            take();
            return Direction::sibling;
        }
        if (t.kind == Tok::ident && t.text == "v") {
            take();
            return Direction::down;
        }
        fail(t.span, "expected direction 'v', '^', '#' or '{'");
    }

    Process parse_communication() {
        SourceSpan start = peek().span;
        Name channel = lookup(take());
        bool is_output = take().kind == Tok::bang;
        Direction dir = parse_direction();
        expect(Tok::lbrace, "'{'");
        const Token& arg = expect(Tok::ident, is_output ? "payload name" : "binder name");
        std::string arg_text = arg.text;
        expect(Tok::rbrace, "'}'");
        expect(Tok::dot, "'.' after capability");
        if (is_output) {
            Capability cap = Capability::output(channel, dir, lookup(arg));
            Process cont = parse_unary();
            return prefix(cap, cont).with_span(span_from(start));
        }
        Name binder = bind(arg_text);
        names_.push_back(binder);
        Process cont = parse_unary();
        names_.pop_back();
        return prefix(Capability::input(channel, dir, binder), cont).with_span(span_from(start));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    std::uint32_t site_counter_ = 0;
    std::vector<Name> names_;
    std::vector<std::string> rec_vars_;
};

}  // namespace

ParseResult parse(std::string_view text) {
    try {
        auto toks = Lexer(text).run();
        return Parser(std::move(toks)).run();
    } catch (const Failure& f) {
        return f.error;
    }
}

Process parse_or_throw(std::string_view text) {
    auto r = parse(text);
    if (!r) throw std::invalid_argument(r.error().str());
    return r.process();
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

std::optional<std::string> guard_error(const Process& p) {
    switch (p.kind()) {
        case Process::Kind::zero:
        case Process::Kind::var: return std::nullopt;
        case Process::Kind::restriction: return guard_error(p.as_restriction().body);
        case Process::Kind::ambient: return guard_error(p.as_ambient().body);
        case Process::Kind::prefix: return guard_error(p.as_prefix().cont);
        case Process::Kind::parallel: {
            if (auto e = guard_error(p.as_parallel().left)) return e;
            return guard_error(p.as_parallel().right);
        }
        case Process::Kind::choice: {
            for (const auto& b : choice_branches(p)) {
                if (b.kind() != Process::Kind::prefix) return "choice branch " + pretty(b) + " is not prefix-headed";
                if (auto e = guard_error(b)) return e;
            }
            return std::nullopt;
        }
        case Process::Kind::rec: return guard_error(p.as_rec().body);
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> well_formedness_error(const Process& p) {
    auto open = free_process_vars(p);
    if (!open.empty()) return "unbound process identifier '" + *open.begin() + "'";
    return guard_error(p);
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace {

bool is_identifier_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Display strings for names: one string per identity, so re-parsing cannot
// confuse two distinct names.
class NameTable {
public:
    explicit NameTable(const Process& p) {
        collect(p);
        std::set<std::string> used;
        for (const auto& n : order_)
            if (n.is_free()) used.insert(n.text);
        for (const auto& n : order_) {
            if (n.is_free()) {
                display_[n] = n.text;
                continue;
            }
            std::string base = sanitize(n.text);
            std::string s = base;
            for (int k = 1; used.contains(s) || reserved(s); ++k) s = base + "_" + std::to_string(k);
            used.insert(s);
            display_[n] = s;
        }
    }

    const std::string& operator()(const Name& n) const {
        auto it = display_.find(n);
        if (it != display_.end()) return it->second;
        static thread_local std::string fallback;
        fallback = n.text;
        return fallback;
    }

private:
    static bool reserved(const std::string& s) {
        return s == "rec" || s == "enter" || s == "accept" || s == "exit" || s == "expel" || s == "merge";
    }
    static std::string sanitize(const std::string& s) {
        if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return "n";
        for (char c : s)
            if (!is_identifier_char(c)) return "n";
        return s;
    }
    void see(const Name& n) {
        if (!display_.contains(n)) {
            display_[n] = "";
            order_.push_back(n);
        }
    }
    void collect(const Process& p) {
        switch (p.kind()) {
            case Process::Kind::zero:
            case Process::Kind::var: return;
            case Process::Kind::restriction:
                see(p.as_restriction().name);
                collect(p.as_restriction().body);
                return;
            case Process::Kind::ambient: collect(p.as_ambient().body); return;
            case Process::Kind::prefix: {
                const auto& c = p.as_prefix().cap;
                see(c.channel);
                if (c.kind == CapKind::output) see(c.payload);
                if (c.kind == CapKind::input) see(c.binder);
                collect(p.as_prefix().cont);
                return;
            }
            case Process::Kind::parallel:
                collect(p.as_parallel().left);
                collect(p.as_parallel().right);
                return;
            case Process::Kind::choice:
                collect(p.as_choice().left);
                collect(p.as_choice().right);
                return;
            case Process::Kind::rec: collect(p.as_rec().body); return;
        }
    }

    std::map<Name, std::string> display_;
    std::vector<Name> order_;
};

const char* direction_mark(Direction d) {
    switch (d) {
        case Direction::local: return "";
        case Direction::down: return "v";
        case Direction::up: return "^";
        case Direction::sibling: return "#";
    }
    return "";
}

template <class NameFn>
std::string cap_text(const Capability& c, NameFn&& show) {
    switch (c.kind) {
        case CapKind::output: return show(c.channel) + "!" + direction_mark(c.dir) + "{" + show(c.payload) + "}";
        case CapKind::input: return show(c.channel) + "?" + direction_mark(c.dir) + "{" + show(c.binder) + "}";
        default: return std::string(to_string(c.kind)) + " " + show(c.channel);
    }
}

enum Prec { kPar = 0, kSum = 1, kUnary = 2 };

class Printer {
public:
    explicit Printer(const NameTable& names) : names_(names) {}

    // `tail`: nothing follows this term inside its enclosing group, so a
    // greedy restriction needs no parentheses.
    void print(const Process& p, int prec, bool tail) {
        switch (p.kind()) {
            case Process::Kind::zero: out_ << "0"; return;
            case Process::Kind::var: out_ << p.as_var().name; return;
            case Process::Kind::restriction: {
                bool wrap = !tail;
                if (wrap) out_ << "(";
                out_ << "(" << names_(p.as_restriction().name) << ")";
                const Process& body = p.as_restriction().body;
                if (body.kind() != Process::Kind::restriction) out_ << " ";
                print(body, kPar, true);
                if (wrap) out_ << ")";
                return;
            }
            case Process::Kind::ambient:
                out_ << "[";
                print(p.as_ambient().body, kPar, true);
                out_ << "]^" << p.as_ambient().id.label;
                return;
            case Process::Kind::prefix:
                out_ << cap_text(p.as_prefix().cap, names_) << ". ";
                print(p.as_prefix().cont, kUnary, tail);
                return;
            case Process::Kind::rec:
                out_ << "rec " << p.as_rec().var << ". ";
                print(p.as_rec().body, kUnary, tail);
                return;
            case Process::Kind::parallel: {
                bool wrap = prec > kPar;
                if (wrap) out_ << "(";
                print(p.as_parallel().left, kSum, false);
                out_ << " | ";
                print(p.as_parallel().right, kPar, wrap || tail);
                if (wrap) out_ << ")";
                return;
            }
            case Process::Kind::choice: {
                bool wrap = prec > kSum;
                if (wrap) out_ << "(";
                print(p.as_choice().left, kUnary, false);
                out_ << " + ";
                // A nested choice on the right keeps the sum flat.
                print(p.as_choice().right, kSum, wrap || tail);
                if (wrap) out_ << ")";
                return;
            }
        }
    }

    std::string str() const { return out_.str(); }

private:
    const NameTable& names_;
    std::ostringstream out_;
};

}  // namespace

std::string pretty(const Process& p) {
    NameTable names(p);
    Printer pr(names);
    pr.print(p, kPar, true);
    return pr.str();
}

std::string pretty(const Capability& c) {
    return cap_text(c, [](const Name& n) { return n.text; });
}

}  // namespace bioamb

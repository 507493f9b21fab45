#include "tabint/parser.hpp"

#include "tabint/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace tabint {

namespace {

enum class Tok { Atom, Var, Int, LParen, RParen, LBrack, RBrack, Comma, Bar, End, Eof };

struct Token {
    Tok kind = Tok::Eof;
    std::string text;
    long long ival = 0;
    int line = 1, col = 1;
};

const char kSymChars[] = "+-*/\\^<>=~:.?@#&$";

bool is_sym_char(char c) {
    for (const char* p = kSymChars; *p; ++p)
        if (*p == c)
            return true;
    return false;
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : src_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg, int line, int col) const {
        throw ParseError(msg, line, col);
    }

    void skip_layout() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
                bump();
            if (pos_ < src_.size() && src_[pos_] == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    bump();
                continue;
            }
            if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '*') {
                int sl = line_, sc = col_;
                bump();
                bump();
                while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/'))
                    bump();
                if (pos_ + 1 >= src_.size())
                    fail("unterminated block comment", sl, sc);
                bump();
                bump();
                continue;
            }
            break;
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void advance() {
        skip_layout();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Tok::Eof;
            tok_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (c == '(') { bump(); tok_ = {Tok::LParen, "(", 0, tok_.line, tok_.col}; return; }
        if (c == ')') { bump(); tok_ = {Tok::RParen, ")", 0, tok_.line, tok_.col}; return; }
        if (c == '[') { bump(); tok_ = {Tok::LBrack, "[", 0, tok_.line, tok_.col}; return; }
        if (c == ']') { bump(); tok_ = {Tok::RBrack, "]", 0, tok_.line, tok_.col}; return; }
        if (c == ',') { bump(); tok_ = {Tok::Comma, ",", 0, tok_.line, tok_.col}; return; }
        if (c == '|') { bump(); tok_ = {Tok::Bar, "|", 0, tok_.line, tok_.col}; return; }
        if (c == '!')
            fail("cut (!) is not in the accepted pure subset", line_, col_);
        if (c == ';')
            fail("disjunction (;) is not in the accepted pure subset", line_, col_);
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                num += src_[pos_];
                bump();
            }
            tok_.kind = Tok::Int;
            tok_.text = num;
            tok_.ival = std::stoll(num);
            return;
        }
        if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                name += src_[pos_];
                bump();
            }
            tok_.kind = Tok::Var;
            tok_.text = name;
            return;
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                name += src_[pos_];
                bump();
            }
            tok_.kind = Tok::Atom;
            tok_.text = name;
            return;
        }
        if (c == '\'') {
            int sl = line_, sc = col_;
            bump();
            std::string name;
            for (;;) {
                if (pos_ >= src_.size())
                    fail("unterminated quoted atom", sl, sc);
                char q = src_[pos_];
                if (q == '\'') {
                    bump();
                    if (pos_ < src_.size() && src_[pos_] == '\'') { // '' escape
                        name += '\'';
                        bump();
                        continue;
                    }
                    break;
                }
                if (q == '\\' && pos_ + 1 < src_.size()) {
                    char e = src_[pos_ + 1];
                    bump();
                    bump();
                    switch (e) {
                    case 'n': name += '\n'; break;
                    case 't': name += '\t'; break;
                    case '\\': name += '\\'; break;
                    case '\'': name += '\''; break;
                    default: name += e; break;
                    }
                    continue;
                }
                name += q;
                bump();
            }
            tok_.kind = Tok::Atom;
            tok_.text = name;
            return;
        }
        if (is_sym_char(c)) {
            // '.' ends a clause when followed by layout, EOF, or a comment.
            if (c == '.') {
                size_t nxt = pos_ + 1;
                if (nxt >= src_.size() || std::isspace(static_cast<unsigned char>(src_[nxt])) ||
                    src_[nxt] == '%') {
                    bump();
                    tok_.kind = Tok::End;
                    tok_.text = ".";
                    return;
                }
            }
            std::string name;
            while (pos_ < src_.size() && is_sym_char(src_[pos_])) {
                name += src_[pos_];
                bump();
            }
            if (name == "->")
                fail("if-then-else (->) is not in the accepted pure subset", tok_.line, tok_.col);
            if (name == "\\+")
                fail("negation (\\+) is not in the accepted pure subset", tok_.line, tok_.col);
            tok_.kind = Tok::Atom;
            tok_.text = name;
            return;
        }
        fail(std::string("unexpected character '") + c + "'", line_, col_);
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

enum class Assoc { Xfx, Xfy, Yfx };

struct OpInfo {
    int prec;
    Assoc assoc;
};

std::optional<OpInfo> infix_op(const std::string& name) {
    static const std::map<std::string, OpInfo> table = {
        {":-", {1200, Assoc::Xfx}},
        {"=", {700, Assoc::Xfx}},   {"is", {700, Assoc::Xfx}},
        {"<", {700, Assoc::Xfx}},   {">", {700, Assoc::Xfx}},
        {"=<", {700, Assoc::Xfx}},  {">=", {700, Assoc::Xfx}},
        {"=:=", {700, Assoc::Xfx}}, {"=\\=", {700, Assoc::Xfx}},
        {"+", {500, Assoc::Yfx}},   {"-", {500, Assoc::Yfx}},
        {"*", {400, Assoc::Yfx}},   {"//", {400, Assoc::Yfx}},
        {"mod", {400, Assoc::Yfx}},
    };
    auto it = table.find(name);
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

class TermParser {
public:
    TermParser(Lexer& lex) : lex_(lex) {}

    // Variable scope of the term(s) parsed so far.
    std::map<std::string, VarId> var_ids;
    std::vector<std::string> var_names; // by id
    VarId next_var = 0;

    Term parse(int max_prec) {
        Term left = parse_primary(max_prec);
        for (;;) {
            const Token& t = lex_.peek();
            std::string opname;
            if (t.kind == Tok::Atom)
                opname = t.text;
            else if (t.kind == Tok::Comma)
                opname = ",";
            else
                break;

            OpInfo op{};
            if (opname == ",") {
                op = {1000, Assoc::Xfy};
            } else if (auto info = infix_op(opname)) {
                op = *info;
            } else {
                break;
            }
            if (op.prec > max_prec)
                break;
            lex_.take();
            int right_max = op.assoc == Assoc::Xfy ? op.prec : op.prec - 1;
            Term right = parse(right_max);
            left = Term::compound(opname, {std::move(left), std::move(right)});
        }
        return left;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        const Token& t = lex_.peek();
        throw ParseError(msg, t.line, t.col);
    }

    Term fresh_var(const std::string& name) {
        if (name == "_") {
            VarId id = next_var++;
            var_names.push_back("_");
            return Term::var(id, "_");
        }
        auto it = var_ids.find(name);
        if (it != var_ids.end())
            return Term::var(it->second, name);
        VarId id = next_var++;
        var_ids.emplace(name, id);
        var_names.push_back(name);
        return Term::var(id, name);
    }

    Term parse_primary(int max_prec) {
        Token t = lex_.peek();
        switch (t.kind) {
        case Tok::Int:
            lex_.take();
            return Term::integer(t.ival);
        case Tok::Var:
            lex_.take();
            return fresh_var(t.text);
        case Tok::LParen: {
            lex_.take();
            Term inner = parse(1200);
            expect(Tok::RParen, "expected ')'");
            return inner;
        }
        case Tok::LBrack:
            lex_.take();
            return parse_list();
        case Tok::Atom: {
            lex_.take();
            // Prefix minus: fold over integer literals, otherwise '-'/1.
            if (t.text == "-" && max_prec >= 200) {
                const Token& nxt = lex_.peek();
                bool operand_follows = nxt.kind == Tok::Int || nxt.kind == Tok::Var ||
                                       nxt.kind == Tok::Atom || nxt.kind == Tok::LParen ||
                                       nxt.kind == Tok::LBrack;
                if (operand_follows) {
                    Term operand = parse(200);
                    if (operand.is_int())
                        return Term::integer(-operand.int_value());
                    return Term::compound("-", {std::move(operand)});
                }
            }
            if (lex_.peek().kind == Tok::LParen) {
                lex_.take();
                std::vector<Term> args;
                args.push_back(parse(999));
                while (lex_.peek().kind == Tok::Comma) {
                    lex_.take();
                    args.push_back(parse(999));
                }
                expect(Tok::RParen, "expected ')' after arguments");
                return Term::compound(t.text, std::move(args));
            }
            return Term::atom(t.text);
        }
        default:
            fail("expected a term");
        }
    }

    Term parse_list() {
        if (lex_.peek().kind == Tok::RBrack) {
            lex_.take();
            return Term::atom("[]");
        }
        std::vector<Term> items;
        items.push_back(parse(999));
        while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            items.push_back(parse(999));
        }
        Term tail = Term::atom("[]");
        if (lex_.peek().kind == Tok::Bar) {
            lex_.take();
            tail = parse(999);
        }
        expect(Tok::RBrack, "expected ']'");
        return Term::list(items, std::move(tail));
    }

    void expect(Tok kind, const std::string& msg) {
        if (lex_.peek().kind != kind)
            fail(msg);
        lex_.take();
    }

    Lexer& lex_;
};

void flatten_conj(const Term& t, std::vector<Term>& out) {
    if (t.is_compound() && t.name() == "," && t.arity() == 2) {
        flatten_conj(t.args()[0], out);
        flatten_conj(t.args()[1], out);
        return;
    }
    out.push_back(t);
}

bool is_rejected_literal(const PredKey& k, std::string* why) {
    if (k.name == "assert" || k.name == "asserta" || k.name == "assertz" ||
        k.name == "retract" || k.name == "retractall") {
        *why = "dynamic database predicate '" + k.name + "' is not in the accepted pure subset";
        return true;
    }
    if (k.name == "!") {
        *why = "cut (!) is not in the accepted pure subset";
        return true;
    }
    if (k.name == ";") {
        *why = "disjunction (;) is not in the accepted pure subset";
        return true;
    }
    if (k.name == "\\+" || k.name == "not") {
        *why = "negation is not in the accepted pure subset";
        return true;
    }
    return false;
}

class ProgramParser {
public:
    ProgramParser(const std::string& text, const std::string& unit) : lex_(text), unit_(unit) {}

    Program run() {
        Program prog;
        int clause_id = 0;
        while (lex_.peek().kind != Tok::Eof) {
            int line = lex_.peek().line, col = lex_.peek().col;
            // Directive?
            if (lex_.peek().kind == Tok::Atom && lex_.peek().text == ":-") {
                lex_.take();
                parse_directive(prog, line, col);
                continue;
            }
            TermParser tp(lex_);
            Term t = tp.parse(1200);
            expect_end();
            add_clause(prog, t, tp.next_var, clause_id++, line, col);
        }
        classify_recursion(prog);
        return prog;
    }

private:
    [[noreturn]] void fail(const std::string& msg, int line, int col) {
        throw ParseError(msg, line, col);
    }

    void expect_end() {
        if (lex_.peek().kind != Tok::End)
            fail("expected '.' at end of clause", lex_.peek().line, lex_.peek().col);
        lex_.take();
    }

    void parse_directive(Program& prog, int line, int col) {
        const Token& t = lex_.peek();
        if (t.kind != Tok::Atom || t.text != "entry")
            fail("only ':- entry Goal : [props].' directives are supported", t.line, t.col);
        lex_.take();

        TermParser tp(lex_);
        Term goal = tp.parse(999);
        if (!goal.is_callable())
            fail("entry goal must be an atom or compound term", line, col);
        if (builtin_of(pred_key_of(goal)))
            fail("entry goal cannot be a builtin", line, col);

        EntryDecl decl;
        decl.goal = goal;
        decl.var_count = tp.next_var;

        if (lex_.peek().kind == Tok::Atom && lex_.peek().text == ":") {
            lex_.take();
            parse_props(decl, tp, line, col);
        }
        expect_end();

        // Reject an exact duplicate: same predicate, same goal shape,
        // same per-variable properties.
        for (const EntryDecl& prev : prog.entries) {
            if (pred_key_of(prev.goal) != pred_key_of(decl.goal))
                continue;
            if (!same_shape(prev, decl))
                continue;
            fail("duplicate entry declaration for " + pred_key_of(decl.goal).str(), line, col);
        }
        prog.entries.push_back(std::move(decl));
    }

    static bool same_shape(const EntryDecl& a, const EntryDecl& b) {
        // Both goals are standardized, so plain structural equality already
        // compares them up to variable renaming.
        if (!(a.goal == b.goal))
            return false;
        for (VarId v : a.goal.vars())
            if (a.prop_of(v) != b.prop_of(v))
                return false;
        return true;
    }

    void parse_props(EntryDecl& decl, TermParser& tp, int line, int col) {
        if (lex_.peek().kind != Tok::LBrack)
            fail("expected '[' to open the entry property list", lex_.peek().line, lex_.peek().col);
        lex_.take();
        if (lex_.peek().kind == Tok::RBrack) {
            lex_.take();
            return;
        }
        std::vector<VarId> goal_vars = decl.goal.vars();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind != Tok::Atom)
                fail("expected a property (ground/free/any)", t.line, t.col);
            std::string prop_name = t.text;
            ArgProp prop;
            if (prop_name == "ground")
                prop = ArgProp::Ground;
            else if (prop_name == "free")
                prop = ArgProp::Free;
            else if (prop_name == "any")
                prop = ArgProp::Any;
            else
                fail("unknown entry property '" + prop_name + "'", t.line, t.col);
            lex_.take();
            if (lex_.peek().kind != Tok::LParen)
                fail("expected '(' after property name", lex_.peek().line, lex_.peek().col);
            lex_.take();
            const Token& vt = lex_.peek();
            if (vt.kind != Tok::Var || vt.text == "_")
                fail("entry property must name a goal variable", vt.line, vt.col);
            auto it = tp.var_ids.find(vt.text);
            if (it == tp.var_ids.end())
                fail("property variable '" + vt.text + "' does not occur in the entry goal",
                     vt.line, vt.col);
            VarId v = it->second;
            if (std::find(goal_vars.begin(), goal_vars.end(), v) == goal_vars.end())
                fail("property variable '" + vt.text + "' does not occur in the entry goal",
                     vt.line, vt.col);
            if (decl.props.count(v))
                fail("variable '" + vt.text + "' has more than one entry property", vt.line, vt.col);
            decl.props.emplace(v, prop);
            lex_.take();
            if (lex_.peek().kind != Tok::RParen)
                fail("expected ')' after property variable", lex_.peek().line, lex_.peek().col);
            lex_.take();
            if (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                continue;
            }
            break;
        }
        if (lex_.peek().kind != Tok::RBrack)
            fail("expected ']' to close the entry property list", lex_.peek().line, lex_.peek().col);
        lex_.take();
        (void)line;
        (void)col;
    }

    void add_clause(Program& prog, const Term& t, int var_count, int clause_id, int line, int col) {
        Clause c;
        c.id = clause_id;
        c.var_count = var_count;
        if (t.is_compound() && t.name() == ":-" && t.arity() == 2) {
            c.head = t.args()[0];
            flatten_conj(t.args()[1], c.body);
        } else {
            c.head = t;
        }
        if (!c.head.is_callable())
            fail("clause head must be an atom or compound term", line, col);
        PredKey head_key = pred_key_of(c.head);
        if (builtin_of(head_key))
            fail("cannot redefine builtin " + head_key.str(), line, col);
        std::string why;
        if (is_rejected_literal(head_key, &why))
            fail(why, line, col);
        for (const Term& lit : c.body) {
            if (lit.is_var())
                fail("variable body literal (meta-call) is not in the accepted pure subset",
                     line, col);
            if (!lit.is_callable())
                fail("body literal must be an atom or compound term", line, col);
            if (is_rejected_literal(pred_key_of(lit), &why))
                fail(why, line, col);
        }
        prog.preds[head_key].push_back(std::move(c));
    }

    Lexer lex_;
    std::string unit_;
};

} // namespace

Program parse_program(const std::string& text, const std::string& unit_name) {
    ProgramParser p(text, unit_name);
    return p.run();
}

Program parse_program_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open file '" + path + "'", 0, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_program(buf.str(), path);
}

Term parse_term_text(const std::string& text, int* var_count) {
    Lexer lex(text);
    TermParser tp(lex);
    Term t = tp.parse(1200);
    if (lex.peek().kind == Tok::End)
        lex.take();
    if (lex.peek().kind != Tok::Eof)
        throw ParseError("trailing input after term", lex.peek().line, lex.peek().col);
    if (var_count)
        *var_count = tp.next_var;
    return t;
}

} // namespace tabint

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wmm/litmus.hpp"

namespace wmm {

namespace {

std::string describe(SourcePos pos, const std::string& what) {
    return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + what;
}

}  // namespace

ParseError::ParseError(SourcePos pos, const std::string& what)
    : std::runtime_error(describe(pos, what)), pos_(pos), message_(what) {}

SemanticError::SemanticError(SourcePos pos, const std::string& what)
    : std::runtime_error(describe(pos, what)), pos_(pos), message_(what) {}

std::string_view to_string(MemOrder mo) {
    switch (mo) {
    case MemOrder::Relaxed: return "relaxed";
    case MemOrder::Acquire: return "acquire";
    case MemOrder::Release: return "release";
    case MemOrder::AcqRel: return "rel_acq";
    case MemOrder::SeqCst: return "seq_cst";
    }
    return "?";
}

std::optional<MemOrder> parse_mem_order(std::string_view text) {
    if (text == "relaxed") return MemOrder::Relaxed;
    if (text == "acquire") return MemOrder::Acquire;
    if (text == "release") return MemOrder::Release;
    if (text == "rel_acq" || text == "acq_rel") return MemOrder::AcqRel;
    if (text == "seq_cst") return MemOrder::SeqCst;
    return std::nullopt;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::Init: return "init";
    case EventKind::Load: return "load";
    case EventKind::Store: return "store";
    case EventKind::Rmw: return "rmw";
    case EventKind::Fence: return "fence";
    case EventKind::Fork: return "fork";
    case EventKind::Join: return "join";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
    for (auto k : {EventKind::Init, EventKind::Load, EventKind::Store, EventKind::Rmw,
                   EventKind::Fence, EventKind::Fork, EventKind::Join}) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

std::string_view to_string(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    }
    return "?";
}

Value apply(BinOp op, Value lhs, Value rhs) {
    auto ul = static_cast<std::uint64_t>(lhs);
    auto ur = static_cast<std::uint64_t>(rhs);
    switch (op) {
    case BinOp::Add: return static_cast<Value>(ul + ur);
    case BinOp::Sub: return static_cast<Value>(ul - ur);
    case BinOp::Mul: return static_cast<Value>(ul * ur);
    case BinOp::Eq: return lhs == rhs;
    case BinOp::Ne: return lhs != rhs;
    case BinOp::Lt: return lhs < rhs;
    case BinOp::Le: return lhs <= rhs;
    }
    return 0;
}

ExprPtr Expr::make_literal(Value v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Literal;
    e->literal = v;
    return e;
}

ExprPtr Expr::make_var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->name = std::move(name);
    return e;
}

ExprPtr Expr::make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::Literal: return a.literal == b.literal;
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Binary: return a.op == b.op && *a.lhs == *b.lhs && *a.rhs == *b.rhs;
    }
    return false;
}

namespace {

bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return *a == *b;
}

}  // namespace

bool operator==(const Stmt& a, const Stmt& b) {
    return a.kind == b.kind && a.var == b.var && a.has_var == b.has_var && a.loc == b.loc &&
           a.mo == b.mo && expr_eq(a.expr, b.expr) && a.rmw == b.rmw && a.body == b.body &&
           a.else_body == b.else_body;
}

bool operator==(const Program& a, const Program& b) {
    if (a.stmts != b.stmts || a.observe != b.observe) return false;
    if (a.aliases.size() != b.aliases.size()) return false;
    for (size_t i = 0; i < a.aliases.size(); ++i) {
        if (a.aliases[i].cell != b.aliases[i].cell || a.aliases[i].loc != b.aliases[i].loc) return false;
    }
    return true;
}

Stmt Stmt::empty() { return Stmt{}; }

Stmt Stmt::assign(std::string dst, ExprPtr value) {
    Stmt s;
    s.kind = StmtKind::AssignNA;
    s.var = std::move(dst);
    s.has_var = true;
    s.expr = std::move(value);
    return s;
}

Stmt Stmt::load(std::string dst, std::string loc, MemOrder mo) {
    Stmt s;
    s.kind = StmtKind::Load;
    s.var = std::move(dst);
    s.has_var = true;
    s.loc = std::move(loc);
    s.mo = mo;
    return s;
}

Stmt Stmt::store(ExprPtr src, std::string loc, MemOrder mo) {
    Stmt s;
    s.kind = StmtKind::Store;
    s.expr = std::move(src);
    s.loc = std::move(loc);
    s.mo = mo;
    return s;
}

Stmt Stmt::rmw_op(std::string dst, std::string loc, MemOrder mo, RmwOp op, ExprPtr operand) {
    Stmt s;
    s.kind = StmtKind::Rmw;
    s.has_var = !dst.empty();
    s.var = std::move(dst);
    s.loc = std::move(loc);
    s.mo = mo;
    s.rmw = op;
    s.expr = std::move(operand);
    return s;
}

Stmt Stmt::fence(MemOrder mo) {
    Stmt s;
    s.kind = StmtKind::Fence;
    s.mo = mo;
    return s;
}

Stmt Stmt::fork(std::string handle, std::vector<Stmt> body) {
    Stmt s;
    s.kind = StmtKind::Fork;
    s.var = std::move(handle);
    s.has_var = true;
    s.body = std::move(body);
    return s;
}

Stmt Stmt::join(std::string handle) {
    Stmt s;
    s.kind = StmtKind::Join;
    s.var = std::move(handle);
    s.has_var = true;
    return s;
}

Stmt Stmt::if_else(std::string cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body) {
    Stmt s;
    s.kind = StmtKind::If;
    s.var = std::move(cond);
    s.has_var = true;
    s.body = std::move(then_body);
    s.else_body = std::move(else_body);
    return s;
}

Stmt Stmt::assertion(ExprPtr cond) {
    Stmt s;
    s.kind = StmtKind::Assert;
    s.expr = std::move(cond);
    return s;
}

std::optional<LocId> Program::find_loc(std::string_view name) const {
    auto it = std::find(atomic_names.begin(), atomic_names.end(), name);
    if (it == atomic_names.end()) return std::nullopt;
    return static_cast<LocId>(it - atomic_names.begin());
}

std::optional<CellId> Program::find_cell(std::string_view name) const {
    auto it = std::find(cell_names.begin(), cell_names.end(), name);
    if (it == cell_names.end()) return std::nullopt;
    return static_cast<CellId>(it - cell_names.begin());
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok : std::uint8_t {
    Name,
    Int,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Newline,
    Assign,  // :=
    Equals,  // =
    Plus,
    Minus,
    Star,
    EqEq,
    NotEq,
    Less,
    LessEq,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    size_t i = 0;
    auto push = [&](Tok k, std::string text, SourcePos pos) { out.push_back({k, std::move(text), pos}); };
    while (i < src.size()) {
        char c = src[i];
        SourcePos pos{line, col};
        if (c == '\n') {
            push(Tok::Newline, "\\n", pos);
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            push(Tok::Name, std::string(src.substr(i, j - i)), pos);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            push(Tok::Int, std::string(src.substr(i, j - i)), pos);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        auto two = src.substr(i, 2);
        auto sym2 = [&](Tok k) {
            push(k, std::string(two), pos);
            i += 2;
            col += 2;
        };
        if (two == ":=") { sym2(Tok::Assign); continue; }
        if (two == "==") { sym2(Tok::EqEq); continue; }
        if (two == "!=") { sym2(Tok::NotEq); continue; }
        if (two == "<=") { sym2(Tok::LessEq); continue; }
        Tok k;
        switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case ',': k = Tok::Comma; break;
        case ';': k = Tok::Semi; break;
        case '=': k = Tok::Equals; break;
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '<': k = Tok::Less; break;
        default:
            throw ParseError(pos, std::string("unexpected character '") + c + "'");
        }
        push(k, std::string(1, c), pos);
        ++i;
        ++col;
    }
    out.push_back({Tok::End, "<eof>", SourcePos{line, col}});
    return out;
}

const std::set<std::string, std::less<>> kKeywords = {
    "observe", "alias", "repeat", "if", "else", "Store", "RMW", "Fence", "Join",
    "assert", "Load", "Fork", "FetchAdd", "Exchange",
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Program parse() {
        Program prog;
        prog.stmts = parse_block(prog, /*top_level=*/true);
        expect(Tok::End, "end of input");
        return prog;
    }

private:
    std::vector<Token> toks_;
    size_t at_ = 0;

    const Token& peek(size_t ahead = 0) const { return toks_[std::min(at_ + ahead, toks_.size() - 1)]; }
    bool check(Tok k) const { return peek().kind == k; }
    bool check_word(std::string_view w) const { return peek().kind == Tok::Name && peek().text == w; }

    const Token& advance() { return toks_[at_++]; }

    const Token& expect(Tok k, const char* what) {
        if (!check(k)) throw ParseError(peek().pos, std::string("expected ") + what + ", found '" + peek().text + "'");
        return advance();
    }

    void expect_word(std::string_view w) {
        if (!check_word(w))
            throw ParseError(peek().pos, "expected '" + std::string(w) + "', found '" + peek().text + "'");
        advance();
    }

    std::string expect_name(const char* what) {
        const Token& t = expect(Tok::Name, what);
        if (kKeywords.contains(t.text)) throw ParseError(t.pos, "keyword '" + t.text + "' used as " + what);
        return t.text;
    }

    void skip_separators() {
        while (check(Tok::Newline) || check(Tok::Semi)) advance();
    }

    std::vector<Stmt> parse_block(Program& prog, bool top_level) {
        std::vector<Stmt> out;
        skip_separators();
        while (!check(Tok::End) && !check(Tok::RBrace)) {
            parse_statement(prog, top_level, out);
            if (!check(Tok::Newline) && !check(Tok::Semi) && !check(Tok::End) && !check(Tok::RBrace) &&
                !just_closed_block_) {
                throw ParseError(peek().pos, "expected end of statement, found '" + peek().text + "'");
            }
            just_closed_block_ = false;
            skip_separators();
        }
        if (top_level && check(Tok::RBrace)) throw ParseError(peek().pos, "unmatched '}'");
        return out;
    }

    bool just_closed_block_ = false;

    std::vector<Stmt> parse_braced(Program& prog) {
        expect(Tok::LBrace, "'{'");
        auto body = parse_block(prog, false);
        expect(Tok::RBrace, "'}'");
        just_closed_block_ = true;
        return body;
    }

    MemOrder parse_mo() {
        const Token& t = expect(Tok::Name, "memory order");
        auto mo = parse_mem_order(t.text);
        if (!mo) throw ParseError(t.pos, "unknown memory order '" + t.text + "'");
        return *mo;
    }

    void parse_statement(Program& prog, bool top_level, std::vector<Stmt>& out) {
        const Token& first = peek();
        SourcePos pos = first.pos;
        if (first.kind != Tok::Name) throw ParseError(pos, "expected statement, found '" + first.text + "'");

        if (first.text == "observe") {
            if (!top_level) throw ParseError(pos, "'observe' is only allowed at top level");
            advance();
            prog.observe.push_back(expect_name("observed variable"));
            while (check(Tok::Comma)) {
                advance();
                prog.observe.push_back(expect_name("observed variable"));
            }
            return;
        }
        if (first.text == "alias") {
            if (!top_level) throw ParseError(pos, "'alias' is only allowed at top level");
            advance();
            Alias a;
            a.cell = expect_name("aliased cell");
            a.loc = expect_name("atomic location");
            prog.aliases.push_back(a);
            return;
        }
        if (first.text == "repeat") {
            advance();
            const Token& count = expect(Tok::Int, "repeat count");
            auto k = parse_int(count);
            auto body = parse_braced(prog);
            for (Value i = 0; i < k; ++i) out.insert(out.end(), body.begin(), body.end());
            return;
        }
        Stmt s = parse_simple(prog);
        s.pos = pos;
        out.push_back(std::move(s));
    }

    Value parse_int(const Token& t) {
        Value v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
            throw ParseError(t.pos, "integer literal out of range: " + t.text);
        return v;
    }

    Stmt parse_simple(Program& prog) {
        const Token& first = peek();
        if (first.text == "if") {
            advance();
            expect(Tok::LParen, "'('");
            std::string cond = expect_name("condition variable");
            expect(Tok::RParen, "')'");
            auto then_body = parse_braced(prog);
            std::vector<Stmt> else_body;
            size_t save = at_;
            while (check(Tok::Newline)) advance();
            if (check_word("else")) {
                advance();
                else_body = parse_braced(prog);
            } else {
                at_ = save;
            }
            just_closed_block_ = true;
            return Stmt::if_else(std::move(cond), std::move(then_body), std::move(else_body));
        }
        if (first.text == "Store") {
            advance();
            expect(Tok::LParen, "'('");
            auto src = parse_expr();
            expect(Tok::Comma, "','");
            std::string loc = expect_name("atomic location");
            expect(Tok::Comma, "','");
            MemOrder mo = parse_mo();
            expect(Tok::RParen, "')'");
            return Stmt::store(std::move(src), std::move(loc), mo);
        }
        if (first.text == "RMW") return parse_rmw("");
        if (first.text == "Fence") {
            advance();
            expect(Tok::LParen, "'('");
            MemOrder mo = parse_mo();
            expect(Tok::RParen, "')'");
            return Stmt::fence(mo);
        }
        if (first.text == "Join") {
            advance();
            expect(Tok::LParen, "'('");
            std::string h = expect_name("thread handle");
            expect(Tok::RParen, "')'");
            return Stmt::join(std::move(h));
        }
        if (first.text == "assert") {
            advance();
            expect(Tok::LParen, "'('");
            auto cond = parse_expr();
            expect(Tok::RParen, "')'");
            return Stmt::assertion(std::move(cond));
        }
        std::string name = expect_name("variable");
        if (check(Tok::Assign)) {
            advance();
            return Stmt::assign(std::move(name), parse_expr());
        }
        if (!check(Tok::Equals)) throw ParseError(peek().pos, "expected ':=' or '=' after '" + name + "'");
        advance();
        if (check_word("Load")) {
            advance();
            expect(Tok::LParen, "'('");
            std::string loc = expect_name("atomic location");
            expect(Tok::Comma, "','");
            MemOrder mo = parse_mo();
            expect(Tok::RParen, "')'");
            return Stmt::load(std::move(name), std::move(loc), mo);
        }
        if (check_word("RMW")) return parse_rmw(std::move(name));
        if (check_word("Fork")) {
            advance();
            auto body = parse_braced(prog);
            return Stmt::fork(std::move(name), std::move(body));
        }
        throw ParseError(peek().pos, "expected Load, RMW or Fork, found '" + peek().text + "'");
    }

    Stmt parse_rmw(std::string dst) {
        expect_word("RMW");
        expect(Tok::LParen, "'('");
        std::string loc = expect_name("atomic location");
        expect(Tok::Comma, "','");
        MemOrder mo = parse_mo();
        expect(Tok::Comma, "','");
        const Token& f = expect(Tok::Name, "functor");
        RmwOp op;
        if (f.text == "FetchAdd") {
            op = RmwOp::FetchAdd;
        } else if (f.text == "Exchange") {
            op = RmwOp::Exchange;
        } else {
            throw ParseError(f.pos, "unknown functor '" + f.text + "' (expected FetchAdd or Exchange)");
        }
        expect(Tok::LParen, "'('");
        auto operand = parse_expr();
        expect(Tok::RParen, "')'");
        expect(Tok::RParen, "')'");
        return Stmt::rmw_op(std::move(dst), std::move(loc), mo, op, std::move(operand));
    }

    // expr := additive [cmp additive]
    ExprPtr parse_expr() {
        auto lhs = parse_additive();
        std::optional<BinOp> op;
        switch (peek().kind) {
        case Tok::EqEq: op = BinOp::Eq; break;
        case Tok::NotEq: op = BinOp::Ne; break;
        case Tok::Less: op = BinOp::Lt; break;
        case Tok::LessEq: op = BinOp::Le; break;
        default: break;
        }
        if (!op) return lhs;
        advance();
        return Expr::make_binary(*op, std::move(lhs), parse_additive());
    }

    ExprPtr parse_additive() {
        auto lhs = parse_term();
        while (check(Tok::Plus) || check(Tok::Minus)) {
            BinOp op = advance().kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
            lhs = Expr::make_binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    ExprPtr parse_term() {
        auto lhs = parse_primary();
        while (check(Tok::Star)) {
            advance();
            lhs = Expr::make_binary(BinOp::Mul, std::move(lhs), parse_primary());
        }
        return lhs;
    }

    ExprPtr parse_primary() {
        if (check(Tok::Int)) return Expr::make_literal(parse_int(advance()));
        if (check(Tok::Minus)) {
            advance();
            const Token& t = expect(Tok::Int, "integer literal after '-'");
            return Expr::make_literal(-parse_int(t));
        }
        if (check(Tok::LParen)) {
            advance();
            auto e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        return Expr::make_var(expect_name("expression"));
    }
};

// ---------------------------------------------------------------------------
// Static checks

struct NameUse {
    SourcePos pos;
    bool atomic;
};

class Finalizer {
public:
    explicit Finalizer(Program& p) : prog_(p) {}

    void run() {
        prog_.atomic_names.clear();
        prog_.cell_names.clear();
        prog_.is_handle.clear();
        prog_.observed_cells.clear();
        for (const auto& a : prog_.aliases) {
            use_cell(a.cell, {});
            use_atomic(a.loc, {});
        }
        classify(prog_.stmts);
        for (const auto& name : prog_.observe) use_cell(name, {});

        std::set<std::string> forks;
        int next_id = 0;
        resolve(prog_.stmts, forks, next_id);
        prog_.stmt_count = next_id;

        prog_.is_handle.assign(prog_.cell_names.size(), false);
        mark_handles(prog_.stmts);
        if (prog_.observe.empty()) {
            for (CellId c = 0; c < prog_.cell_names.size(); ++c) {
                if (!prog_.is_handle[c]) prog_.observed_cells.push_back(c);
            }
        } else {
            for (const auto& name : prog_.observe) prog_.observed_cells.push_back(*prog_.find_cell(name));
        }
    }

private:
    Program& prog_;
    std::map<std::string, NameUse> uses_;

    void use(const std::string& name, SourcePos pos, bool atomic) {
        auto [it, inserted] = uses_.try_emplace(name, NameUse{pos, atomic});
        if (!inserted && it->second.atomic != atomic) {
            throw SemanticError(pos, "'" + name + "' is used both as an atomic location and as a non-atomic location");
        }
        if (inserted) {
            auto& names = atomic ? prog_.atomic_names : prog_.cell_names;
            names.push_back(name);
        }
    }
    void use_cell(const std::string& name, SourcePos pos) { use(name, pos, false); }
    void use_atomic(const std::string& name, SourcePos pos) { use(name, pos, true); }

    void classify_expr(const ExprPtr& e, SourcePos pos) {
        if (!e) return;
        if (e->kind == Expr::Kind::Var) use_cell(e->name, pos);
        classify_expr(e->lhs, pos);
        classify_expr(e->rhs, pos);
    }

    void classify(const std::vector<Stmt>& stmts) {
        for (const auto& s : stmts) {
            if (s.has_var) use_cell(s.var, s.pos);
            switch (s.kind) {
            case StmtKind::Load:
            case StmtKind::Store:
            case StmtKind::Rmw: use_atomic(s.loc, s.pos); break;
            default: break;
            }
            classify_expr(s.expr, s.pos);
            classify(s.body);
            classify(s.else_body);
        }
    }

    void resolve_expr(const ExprPtr& e) {
        if (!e) return;
        if (e->kind == Expr::Kind::Var) const_cast<Expr&>(*e).cell = *prog_.find_cell(e->name);
        resolve_expr(e->lhs);
        resolve_expr(e->rhs);
    }

    void check_order(const Stmt& s) {
        auto bad = [&](const char* what) {
            throw SemanticError(s.pos, std::string(to_string(s.mo)) + " is not a valid " + what + " order");
        };
        switch (s.kind) {
        case StmtKind::Load:
            if (s.mo == MemOrder::Release || s.mo == MemOrder::AcqRel) bad("load");
            break;
        case StmtKind::Store:
            if (s.mo == MemOrder::Acquire || s.mo == MemOrder::AcqRel) bad("store");
            break;
        case StmtKind::Fence:
            if (s.mo == MemOrder::Relaxed) bad("fence");
            break;
        default: break;
        }
    }

    void resolve(std::vector<Stmt>& stmts, std::set<std::string>& forks, int& next_id) {
        for (auto& s : stmts) {
            s.id = next_id++;
            check_order(s);
            if (s.has_var) s.cell = *prog_.find_cell(s.var);
            if (!s.loc.empty()) s.loc_id = *prog_.find_loc(s.loc);
            resolve_expr(s.expr);
            if (s.kind == StmtKind::Join && !forks.contains(s.var)) {
                throw SemanticError(s.pos, "Join on '" + s.var + "', which no preceding Fork assigns");
            }
            if (s.kind == StmtKind::Fork) forks.insert(s.var);
            resolve(s.body, forks, next_id);
            resolve(s.else_body, forks, next_id);
        }
    }

    void mark_handles(const std::vector<Stmt>& stmts) {
        for (const auto& s : stmts) {
            if (s.kind == StmtKind::Fork) prog_.is_handle[s.cell] = true;
            mark_handles(s.body);
            mark_handles(s.else_body);
        }
    }
};

int count_atomic(const std::vector<Stmt>& stmts) {
    int n = 0;
    for (const auto& s : stmts) {
        switch (s.kind) {
        case StmtKind::Load:
        case StmtKind::Store:
        case StmtKind::Rmw:
        case StmtKind::Fence: ++n; break;
        default: break;
        }
        n += count_atomic(s.body) + count_atomic(s.else_body);
    }
    return n;
}

}  // namespace

void finalize(Program& program) { Finalizer(program).run(); }

Program parse_program(std::string_view text) {
    Program p = Parser(text).parse();
    if (p.stmts.empty()) p.stmts.push_back(Stmt::empty());
    finalize(p);
    return p;
}

Program parse_program_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ProgramError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_program(buf.str());
}

int count_atomic_statements(const Program& program) { return count_atomic(program.stmts); }

}  // namespace wmm

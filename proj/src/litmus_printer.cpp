#include <sstream>

#include "wmm/litmus.hpp"

namespace wmm {

namespace {

int precedence(const Expr& e) {
    if (e.kind != Expr::Kind::Binary) return 4;
    switch (e.op) {
    case BinOp::Mul: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 2;
    default: return 1;
    }
}

void print_expr(std::ostream& os, const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Literal: os << e.literal; return;
    case Expr::Kind::Var: os << e.name; return;
    case Expr::Kind::Binary: break;
    }
    const int p = precedence(e);
    // Left-associative; a comparison operand is never itself a comparison.
    const bool lparen = precedence(*e.lhs) < p || (p == 1 && precedence(*e.lhs) == 1);
    const bool rparen = precedence(*e.rhs) <= p;
    if (lparen) os << "(";
    print_expr(os, *e.lhs);
    if (lparen) os << ")";
    os << " " << to_string(e.op) << " ";
    if (rparen) os << "(";
    print_expr(os, *e.rhs);
    if (rparen) os << ")";
}

void print_block(std::ostream& os, const std::vector<Stmt>& stmts, int depth);

void print_stmt(std::ostream& os, const Stmt& s, int depth) {
    const std::string pad(static_cast<size_t>(depth) * 4, ' ');
    switch (s.kind) {
    case StmtKind::Empty: return;
    case StmtKind::AssignNA:
        os << pad << s.var << " := ";
        print_expr(os, *s.expr);
        break;
    case StmtKind::Load: os << pad << s.var << " = Load(" << s.loc << ", " << to_string(s.mo) << ")"; break;
    case StmtKind::Store:
        os << pad << "Store(";
        print_expr(os, *s.expr);
        os << ", " << s.loc << ", " << to_string(s.mo) << ")";
        break;
    case StmtKind::Rmw:
        os << pad;
        if (s.has_var) os << s.var << " = ";
        os << "RMW(" << s.loc << ", " << to_string(s.mo) << ", "
           << (s.rmw == RmwOp::FetchAdd ? "FetchAdd" : "Exchange") << "(";
        print_expr(os, *s.expr);
        os << "))";
        break;
    case StmtKind::Fence: os << pad << "Fence(" << to_string(s.mo) << ")"; break;
    case StmtKind::Fork:
        os << pad << s.var << " = Fork {\n";
        print_block(os, s.body, depth + 1);
        os << pad << "}";
        break;
    case StmtKind::Join: os << pad << "Join(" << s.var << ")"; break;
    case StmtKind::If:
        os << pad << "if (" << s.var << ") {\n";
        print_block(os, s.body, depth + 1);
        os << pad << "}";
        if (!s.else_body.empty()) {
            os << " else {\n";
            print_block(os, s.else_body, depth + 1);
            os << pad << "}";
        }
        break;
    case StmtKind::Assert:
        os << pad << "assert(";
        print_expr(os, *s.expr);
        os << ")";
        break;
    }
    os << "\n";
}

void print_block(std::ostream& os, const std::vector<Stmt>& stmts, int depth) {
    for (const auto& s : stmts) print_stmt(os, s, depth);
}

}  // namespace

std::string pretty_print(const Expr& expr) {
    std::ostringstream os;
    print_expr(os, expr);
    return os.str();
}

std::string pretty_print(const Program& program) {
    std::ostringstream os;
    if (!program.observe.empty()) {
        os << "observe ";
        for (size_t i = 0; i < program.observe.size(); ++i) os << (i ? ", " : "") << program.observe[i];
        os << "\n";
    }
    for (const auto& a : program.aliases) os << "alias " << a.cell << " " << a.loc << "\n";
    print_block(os, program.stmts, 0);
    return os.str();
}

}  // namespace wmm

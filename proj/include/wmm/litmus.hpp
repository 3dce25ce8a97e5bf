#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wmm/types.hpp"

namespace wmm {

struct SourcePos {
    int line = 0;
    int column = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(SourcePos pos, const std::string& what);
    SourcePos pos() const { return pos_; }
    /// The message without the position prefix.
    const std::string& message() const { return message_; }

private:
    SourcePos pos_;
    std::string message_;
};

/// Well-formed syntax that violates a static rule (namespace clash, illegal order, ...).
class SemanticError : public std::runtime_error {
public:
    SemanticError(SourcePos pos, const std::string& what);
    SourcePos pos() const { return pos_; }
    /// The message without the position prefix.
    const std::string& message() const { return message_; }

private:
    SourcePos pos_;
    std::string message_;
};

enum class BinOp : std::uint8_t { Add, Sub, Mul, Eq, Ne, Lt, Le };

std::string_view to_string(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind : std::uint8_t { Literal, Var, Binary };

    Kind kind = Kind::Literal;
    Value literal = 0;
    std::string name;
    CellId cell = 0;  // resolved by finalize()
    BinOp op = BinOp::Add;
    ExprPtr lhs;
    ExprPtr rhs;

    static ExprPtr make_literal(Value v);
    static ExprPtr make_var(std::string name);
    static ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
};

bool operator==(const Expr& a, const Expr& b);

/// Evaluates with 64-bit wrapping arithmetic; comparisons yield 0 or 1.
Value apply(BinOp op, Value lhs, Value rhs);

enum class StmtKind : std::uint8_t {
    Empty,
    If,
    AssignNA,
    Fork,
    Join,
    Load,
    Store,
    Rmw,
    Fence,
    Assert,
};

enum class RmwOp : std::uint8_t { FetchAdd, Exchange };

struct Stmt {
    StmtKind kind = StmtKind::Empty;
    SourcePos pos;
    int id = -1;  // preorder index, assigned by finalize()

    // AssignNA/Load/Rmw destination, Fork/Join handle, If condition. Empty for
    // an RMW whose loaded value is discarded.
    std::string var;
    CellId cell = 0;
    bool has_var = false;

    std::string loc;  // Load/Store/Rmw
    LocId loc_id = 0;
    MemOrder mo = MemOrder::Relaxed;

    ExprPtr expr;  // AssignNA value, Store source, Rmw operand, Assert condition
    RmwOp rmw = RmwOp::FetchAdd;

    std::vector<Stmt> body;       // Fork body, If then-branch
    std::vector<Stmt> else_body;  // If else-branch

    static Stmt empty();
    static Stmt assign(std::string dst, ExprPtr value);
    static Stmt load(std::string dst, std::string loc, MemOrder mo);
    static Stmt store(ExprPtr src, std::string loc, MemOrder mo);
    static Stmt rmw_op(std::string dst, std::string loc, MemOrder mo, RmwOp op, ExprPtr operand);
    static Stmt fence(MemOrder mo);
    static Stmt fork(std::string handle, std::vector<Stmt> body);
    static Stmt join(std::string handle);
    static Stmt if_else(std::string cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body);
    static Stmt assertion(ExprPtr cond);
};

/// Structural equality; source positions and statement ids are ignored.
bool operator==(const Stmt& a, const Stmt& b);

struct Alias {
    std::string cell;
    std::string loc;
};

struct Program {
    std::vector<Stmt> stmts;

    // Harness directives.
    std::vector<std::string> observe;  // empty = every non-handle cell
    std::vector<Alias> aliases;        // mixed-access test hook

    // Filled by finalize().
    std::vector<std::string> atomic_names;  // indexed by LocId
    std::vector<std::string> cell_names;    // indexed by CellId
    std::vector<bool> is_handle;            // indexed by CellId
    std::vector<CellId> observed_cells;
    int stmt_count = 0;

    std::optional<LocId> find_loc(std::string_view name) const;
    std::optional<CellId> find_cell(std::string_view name) const;
};

bool operator==(const Program& a, const Program& b);

/// Parses litmus text. `repeat k { ... }` is unrolled, the result is finalized.
/// Throws ParseError or SemanticError.
Program parse_program(std::string_view text);

Program parse_program_file(const std::string& path);

/// Classifies names into the atomic and non-atomic namespaces, assigns ids,
/// and enforces the static rules. Idempotent.
void finalize(Program& program);

std::string pretty_print(const Program& program);
std::string pretty_print(const Expr& expr);

/// Counts atomic statements (Load, Store, Rmw, Fence) reachable in the program text.
int count_atomic_statements(const Program& program);

}  // namespace wmm

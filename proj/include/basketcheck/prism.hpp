#pragma once

#include "basketcheck/expr.hpp"
#include "basketcheck/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace basketcheck {

// AST for the guarded-command model subset. Grammar sketch:
//
//   model      := "dtmc" constant* module label*
//   constant   := "const" ["int"|"double"] IDENT "=" expr ";"
//   module     := "module" IDENT vardecl* command* "endmodule"
//   vardecl    := IDENT ":" "[" expr ".." expr "]" "init" expr ";"
//   command    := "[" "]" expr "->" updates ";"
//   updates    := "true" | branch ("+" branch)*
//   branch     := expr ":" update
//   update     := "true" | assign ("&" assign)*
//   assign     := "(" IDENT "'" "=" expr ")"
//   label      := "label" STRING "=" expr ";"
//
// Exactly one module; `//` comments run to end of line.

struct ConstantDef {
    std::string name;
    ExprPtr value;
    SourcePos pos;
};

struct VariableDeclAst {
    std::string name;
    ExprPtr low;
    ExprPtr high;
    ExprPtr init;
    SourcePos pos;
};

struct Assignment {
    std::string var;
    ExprPtr value;
    SourcePos pos;
};

struct UpdateBranch {
    ExprPtr probability;                 // synthesized literal 1 when implicit
    bool implicit_probability = false;   // branch written as bare "true"
    std::vector<Assignment> assignments; // empty = identity update
    SourcePos pos;
};

struct GuardedCommand {
    ExprPtr guard;
    std::vector<UpdateBranch> branches;  // at least one
    SourcePos pos;                       // start of the command, for diagnostics
};

struct LabelDef {
    std::string name;
    ExprPtr formula;
    SourcePos pos;
};

struct ModelAst {
    std::vector<ConstantDef> constants;
    std::string module_name;
    std::vector<VariableDeclAst> variables;
    std::vector<GuardedCommand> commands;
    std::vector<LabelDef> labels;
};

ModelAst parse_model(std::string_view text);  // throws ParseError

std::string print_model(const ModelAst& ast);
bool equal(const ModelAst& a, const ModelAst& b);

struct BuildOptions {
    bool fix_deadlocks = false;   // self-loop states with no enabled command
    bool merge_uniform = false;   // non-standard: uniform mix of enabled commands
};

// Explicit-state elaboration: enumerates every valuation, evaluates guards in
// declaration order, and turns the single enabled command's branches into the
// state's row. Branch probabilities must be constant and sum to 1 within
// kRowSumTolerance; zero-probability branches are dropped; updates escaping a
// variable's declared range are errors. Throws BuildError / EvalError.
Dtmc build_dtmc(const ModelAst& ast, const BuildOptions& options = {});

}  // namespace basketcheck

#include "basketcheck/prism.hpp"

#include "token_cursor.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace basketcheck {

namespace {

using detail::TokenCursor;
using detail::parse_expression;

class ModelParser {
public:
    explicit ModelParser(std::string_view text) : cur_(tokenize(text)) {}

    ModelAst run() {
        ModelAst ast;
        cur_.expect(TokenKind::KwDtmc, "at the start of the model");
        bool seen_module = false;
        while (!cur_.at(TokenKind::End)) {
            if (cur_.at(TokenKind::KwConst)) {
                ast.constants.push_back(parse_constant());
            } else if (cur_.at(TokenKind::KwLabel)) {
                ast.labels.push_back(parse_label());
            } else if (cur_.at(TokenKind::KwModule)) {
                if (seen_module) {
                    throw ParseError("only one module is supported", cur_.peek().pos);
                }
                seen_module = true;
                parse_module(ast);
            } else {
                throw ParseError("expected 'const', 'label' or 'module', found " +
                                     std::string(token_kind_name(cur_.peek().kind)),
                                 cur_.peek().pos);
            }
        }
        if (!seen_module) {
            throw ParseError("model has no module", cur_.peek().pos);
        }
        check_distinct_names(ast);
        return ast;
    }

private:
    ConstantDef parse_constant() {
        SourcePos pos = cur_.expect(TokenKind::KwConst, "").pos;
        // Optional type annotation, tolerated for PRISM compatibility.
        if (cur_.at(TokenKind::Ident) &&
            (cur_.peek().text == "int" || cur_.peek().text == "double") &&
            cur_.peek(1).kind == TokenKind::Ident) {
            cur_.advance();
        }
        std::string name = cur_.expect(TokenKind::Ident, "as constant name").text;
        cur_.expect(TokenKind::Eq, "after constant name");
        ExprPtr value = parse_expression(cur_);
        cur_.expect(TokenKind::Semicolon, "after constant definition");
        return {std::move(name), std::move(value), pos};
    }

    LabelDef parse_label() {
        SourcePos pos = cur_.expect(TokenKind::KwLabel, "").pos;
        std::string name = cur_.expect(TokenKind::String, "as label name").text;
        cur_.expect(TokenKind::Eq, "after label name");
        ExprPtr formula = parse_expression(cur_);
        cur_.expect(TokenKind::Semicolon, "after label definition");
        return {std::move(name), std::move(formula), pos};
    }

    void parse_module(ModelAst& ast) {
        cur_.expect(TokenKind::KwModule, "");
        ast.module_name = cur_.expect(TokenKind::Ident, "as module name").text;
        while (!cur_.at(TokenKind::KwEndmodule)) {
            if (cur_.at(TokenKind::End)) {
                throw ParseError("missing 'endmodule'", cur_.peek().pos);
            }
            if (cur_.at(TokenKind::LBracket)) {
                ast.commands.push_back(parse_command());
            } else if (cur_.at(TokenKind::Ident)) {
                ast.variables.push_back(parse_variable());
            } else {
                throw ParseError("expected a variable declaration or command, found " +
                                     std::string(token_kind_name(cur_.peek().kind)),
                                 cur_.peek().pos);
            }
        }
        cur_.expect(TokenKind::KwEndmodule, "");
    }

    VariableDeclAst parse_variable() {
        const Token& name = cur_.expect(TokenKind::Ident, "as variable name");
        cur_.expect(TokenKind::Colon, "after variable name");
        cur_.expect(TokenKind::LBracket, "to open the variable range");
        ExprPtr low = parse_expression(cur_);
        cur_.expect(TokenKind::DotDot, "between range bounds");
        ExprPtr high = parse_expression(cur_);
        cur_.expect(TokenKind::RBracket, "to close the variable range");
        cur_.expect(TokenKind::KwInit, "after the variable range");
        ExprPtr init = parse_expression(cur_);
        cur_.expect(TokenKind::Semicolon, "after variable declaration");
        return {name.text, std::move(low), std::move(high), std::move(init), name.pos};
    }

    GuardedCommand parse_command() {
        SourcePos pos = cur_.expect(TokenKind::LBracket, "").pos;
        cur_.expect(TokenKind::RBracket, "(synchronization labels are not supported)");
        ExprPtr guard = parse_expression(cur_);
        cur_.expect(TokenKind::Arrow, "after the guard");

        GuardedCommand command;
        command.guard = std::move(guard);
        command.pos = pos;
        // "true" with no probability is the identity update with weight 1.
        if (cur_.at(TokenKind::KwTrue) && cur_.peek(1).kind == TokenKind::Semicolon) {
            UpdateBranch branch;
            branch.pos = cur_.peek().pos;
            branch.probability = make_number(Rational(1), branch.pos);
            branch.implicit_probability = true;
            cur_.advance();
            command.branches.push_back(std::move(branch));
        } else {
            command.branches.push_back(parse_branch());
            while (cur_.accept(TokenKind::Plus)) {
                command.branches.push_back(parse_branch());
            }
        }
        cur_.expect(TokenKind::Semicolon, "at the end of the command");
        return command;
    }

    UpdateBranch parse_branch() {
        UpdateBranch branch;
        branch.pos = cur_.peek().pos;
        branch.probability = parse_expression(cur_);
        cur_.expect(TokenKind::Colon, "between probability and update");
        if (cur_.accept(TokenKind::KwTrue)) {
            return branch;  // identity update
        }
        branch.assignments.push_back(parse_assignment());
        while (cur_.accept(TokenKind::Amp)) {
            branch.assignments.push_back(parse_assignment());
        }
        std::set<std::string> seen;
        for (const Assignment& a : branch.assignments) {
            if (!seen.insert(a.var).second) {
                throw ParseError("variable '" + a.var + "' assigned twice in one update", a.pos);
            }
        }
        return branch;
    }

    Assignment parse_assignment() {
        cur_.expect(TokenKind::LParen, "to open an assignment");
        const Token& var = cur_.expect(TokenKind::Ident, "as assignment target");
        cur_.expect(TokenKind::Prime, "after the assignment target");
        cur_.expect(TokenKind::Eq, "in assignment");
        ExprPtr value = parse_expression(cur_);
        cur_.expect(TokenKind::RParen, "to close the assignment");
        return {var.text, std::move(value), var.pos};
    }

    void check_distinct_names(const ModelAst& ast) {
        std::map<std::string, SourcePos> seen;
        auto add = [&](const std::string& name, SourcePos pos, const char* what) {
            auto [it, inserted] = seen.emplace(name, pos);
            if (!inserted) {
                throw ParseError("duplicate declaration of '" + name + "' (" + what +
                                     "); first declared at " +
                                     std::to_string(it->second.line) + ":" +
                                     std::to_string(it->second.col),
                                 pos);
            }
        };
        for (const auto& c : ast.constants) add(c.name, c.pos, "constant");
        for (const auto& v : ast.variables) add(v.name, v.pos, "variable");
        for (const auto& l : ast.labels) add(l.name, l.pos, "label");
    }

    TokenCursor cur_;
};

}  // namespace

ModelAst parse_model(std::string_view text) {
    return ModelParser(text).run();
}

std::string print_model(const ModelAst& ast) {
    std::ostringstream out;
    out << "dtmc\n\n";
    for (const auto& c : ast.constants) {
        out << "const " << c.name << " = " << to_string(c.value) << ";\n";
    }
    if (!ast.constants.empty()) out << "\n";
    out << "module " << ast.module_name << "\n";
    for (const auto& v : ast.variables) {
        out << "    " << v.name << " : [" << to_string(v.low) << ".." << to_string(v.high)
            << "] init " << to_string(v.init) << ";\n";
    }
    out << "\n";
    for (const auto& cmd : ast.commands) {
        out << "    [] " << to_string(cmd.guard) << " -> ";
        if (cmd.branches.size() == 1 && cmd.branches[0].implicit_probability &&
            cmd.branches[0].assignments.empty()) {
            out << "true";
        } else {
            for (std::size_t i = 0; i < cmd.branches.size(); ++i) {
                const UpdateBranch& b = cmd.branches[i];
                if (i) out << " + ";
                out << to_string(b.probability) << ":";
                if (b.assignments.empty()) {
                    out << "true";
                } else {
                    for (std::size_t j = 0; j < b.assignments.size(); ++j) {
                        if (j) out << " & ";
                        out << "(" << b.assignments[j].var << "'="
                            << to_string(b.assignments[j].value) << ")";
                    }
                }
            }
        }
        out << ";\n";
    }
    out << "endmodule\n";
    if (!ast.labels.empty()) {
        out << "\n";
        for (const auto& l : ast.labels) {
            out << "label \"" << l.name << "\" = " << to_string(l.formula) << ";\n";
        }
    }
    return out.str();
}

bool equal(const ModelAst& a, const ModelAst& b) {
    if (a.constants.size() != b.constants.size() || a.module_name != b.module_name ||
        a.variables.size() != b.variables.size() || a.commands.size() != b.commands.size() ||
        a.labels.size() != b.labels.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.constants.size(); ++i) {
        if (a.constants[i].name != b.constants[i].name ||
            !equal(a.constants[i].value, b.constants[i].value)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.variables.size(); ++i) {
        const auto& x = a.variables[i];
        const auto& y = b.variables[i];
        if (x.name != y.name || !equal(x.low, y.low) || !equal(x.high, y.high) ||
            !equal(x.init, y.init)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.commands.size(); ++i) {
        const auto& x = a.commands[i];
        const auto& y = b.commands[i];
        if (!equal(x.guard, y.guard) || x.branches.size() != y.branches.size()) return false;
        for (std::size_t j = 0; j < x.branches.size(); ++j) {
            const auto& bx = x.branches[j];
            const auto& by = y.branches[j];
            if (bx.implicit_probability != by.implicit_probability ||
                !equal(bx.probability, by.probability) ||
                bx.assignments.size() != by.assignments.size()) {
                return false;
            }
            for (std::size_t k = 0; k < bx.assignments.size(); ++k) {
                if (bx.assignments[k].var != by.assignments[k].var ||
                    !equal(bx.assignments[k].value, by.assignments[k].value)) {
                    return false;
                }
            }
        }
    }
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        if (a.labels[i].name != b.labels[i].name ||
            !equal(a.labels[i].formula, b.labels[i].formula)) {
            return false;
        }
    }
    return true;
}

namespace {

std::string command_location(const GuardedCommand& cmd) {
    return std::to_string(cmd.pos.line) + ":" + std::to_string(cmd.pos.col);
}

// Branch probabilities must be constant; they are evaluated once per command.
std::vector<Rational> command_probabilities(const GuardedCommand& cmd,
                                            const std::map<std::string, Value>& constants) {
    std::vector<Rational> probs;
    probs.reserve(cmd.branches.size());
    for (const UpdateBranch& branch : cmd.branches) {
        auto vars = variable_references(branch.probability, constants);
        if (!vars.empty()) {
            throw BuildError("probability expression must be constant (references variable '" +
                                 vars.front() + "') in command at " + command_location(cmd),
                             branch.pos);
        }
        EvalContext ctx;
        ctx.constants = &constants;
        Rational p = eval_number(branch.probability, ctx);
        if (p < 0) {
            throw BuildError("negative branch probability " + rational_to_string(p) +
                                 " in command at " + command_location(cmd),
                             branch.pos);
        }
        probs.push_back(std::move(p));
    }
    Rational sum = 0;
    for (const Rational& p : probs) sum += p;
    Rational tolerance(1, 1000000000);
    if (abs(Rational(sum - 1)) > tolerance) {
        throw BuildError("branch probabilities sum to " + rational_to_string(sum) +
                             " (expected 1) in command at " + command_location(cmd),
                         cmd.pos);
    }
    return probs;
}

}  // namespace

Dtmc build_dtmc(const ModelAst& ast, const BuildOptions& options) {
    // Constants first; later constants may reference earlier ones.
    std::map<std::string, Value> constants;
    for (const auto& c : ast.constants) {
        EvalContext ctx;
        ctx.constants = &constants;
        constants.emplace(c.name, eval(c.value, ctx));
    }

    std::vector<VariableDecl> vars;
    vars.reserve(ast.variables.size());
    {
        EvalContext ctx;
        ctx.constants = &constants;
        for (const auto& v : ast.variables) {
            VariableDecl decl;
            decl.name = v.name;
            decl.low = eval_int(v.low, ctx);
            decl.high = eval_int(v.high, ctx);
            decl.init = eval_int(v.init, ctx);
            if (decl.high < decl.low) {
                throw BuildError("variable '" + v.name + "' has an empty range", v.pos);
            }
            if (decl.init < decl.low || decl.init > decl.high) {
                throw BuildError("initial value of '" + v.name + "' is outside its range",
                                 v.pos);
            }
            vars.push_back(std::move(decl));
        }
    }
    if (vars.empty()) {
        throw BuildError("module '" + ast.module_name + "' declares no variables");
    }

    Dtmc dtmc;
    dtmc.space = StateSpace(std::move(vars));

    std::vector<std::vector<Rational>> probabilities;
    probabilities.reserve(ast.commands.size());
    for (const auto& cmd : ast.commands) {
        probabilities.push_back(command_probabilities(cmd, constants));
    }

    const std::size_t n = dtmc.space.size();
    dtmc.rows.resize(n);
    EvalContext ctx;
    ctx.constants = &constants;
    ctx.space = &dtmc.space;

    for (StateIndex s = 0; s < n; ++s) {
        std::vector<std::int64_t> valuation = dtmc.space.index_to_valuation(s);
        ctx.valuation = &valuation;

        std::vector<std::size_t> enabled;
        for (std::size_t c = 0; c < ast.commands.size(); ++c) {
            if (eval_bool(ast.commands[c].guard, ctx)) enabled.push_back(c);
        }

        if (enabled.empty()) {
            if (!options.fix_deadlocks) {
                throw BuildError("no command enabled in state " + std::to_string(s) + " (" +
                                 dtmc.space.describe_state(s) +
                                 "); use --fix-deadlocks to add a self-loop");
            }
            dtmc.rows[s].push_back({s, 1.0, Rational(1)});
            continue;
        }
        if (enabled.size() > 1 && !options.merge_uniform) {
            throw BuildError("overlapping guards: commands at " +
                             command_location(ast.commands[enabled[0]]) + " and " +
                             command_location(ast.commands[enabled[1]]) +
                             " are both enabled in state " + std::to_string(s) + " (" +
                             dtmc.space.describe_state(s) + ")");
        }

        // Uniform weight across enabled commands; 1 for the normal case.
        Rational weight(1, static_cast<long>(enabled.size()));
        std::map<StateIndex, Rational> row;
        for (std::size_t c : enabled) {
            const GuardedCommand& cmd = ast.commands[c];
            for (std::size_t b = 0; b < cmd.branches.size(); ++b) {
                const Rational& p = probabilities[c][b];
                if (p == 0) continue;  // dropped so sparse iteration never sees them
                std::vector<std::int64_t> next = valuation;
                for (const Assignment& a : cmd.branches[b].assignments) {
                    auto slot = dtmc.space.slot_of(a.var);
                    if (!slot) {
                        throw BuildError("assignment to unknown variable '" + a.var +
                                             "' in command at " + command_location(cmd),
                                         a.pos);
                    }
                    std::int64_t value = eval_int(a.value, ctx);
                    const VariableDecl& decl = dtmc.space.variables()[*slot];
                    if (value < decl.low || value > decl.high) {
                        throw BuildError(
                            "update sets '" + a.var + "' to " + std::to_string(value) +
                                ", outside [" + std::to_string(decl.low) + ".." +
                                std::to_string(decl.high) + "], in command at " +
                                command_location(cmd),
                            a.pos);
                    }
                    next[*slot] = value;
                }
                row[dtmc.space.index_of(next)] += weight * p;
            }
        }

        for (auto& [target, p] : row) {
            dtmc.rows[s].push_back({target, to_double(p), p});
        }
    }

    dtmc.init_state = [&] {
        std::vector<std::int64_t> init;
        init.reserve(dtmc.space.variables().size());
        for (const auto& v : dtmc.space.variables()) init.push_back(v.init);
        return dtmc.space.index_of(init);
    }();

    // Label sets are evaluated over the finished space; labels may not
    // reference other labels.
    for (const auto& l : ast.labels) {
        StateSet set(n);
        for (StateIndex s = 0; s < n; ++s) {
            std::vector<std::int64_t> valuation = dtmc.space.index_to_valuation(s);
            ctx.valuation = &valuation;
            if (eval_bool(l.formula, ctx)) set.insert(s);
        }
        dtmc.labels.emplace(l.name, std::move(set));
    }

    return dtmc;
}

}  // namespace basketcheck

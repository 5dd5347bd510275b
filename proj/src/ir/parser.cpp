// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/ir/parser.hpp"

#include <cctype>
#include <map>
#include <set>

#include "lexer.hpp"
#include "wfsynth/ir/topo.hpp"

namespace wfsynth::ir {

namespace {

using detail::Tok;
using detail::Token;

const std::set<std::string, std::less<>> kTaskFields = {"problem", "entry_point"};
const std::set<std::string, std::less<>> kKeywords = {"workflow", "kind",   "contract", "node",
                                                      "repeat",   "branch", "return",   "task"};

bool is_identifier(std::string_view s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

std::string at(SourceLocation loc) {
    return " (line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column) + ")";
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const OperatorRegistry& registry)
        : toks_(std::move(tokens)), registry_(registry) {}

    WorkflowProgram run() {
        skip_newlines();
        if (peek().kind == Tok::End) throw SyntaxError(peek().loc, "empty workflow");

        WorkflowProgram prog;
        expect_keyword("workflow");
        const Token name = expect(Tok::Word, "workflow name");
        prog.name = name.text;
        end_of_line();

        skip_newlines();
        expect_keyword("kind");
        const Token kind = expect(Tok::Word, "task kind");
        const auto tk = task_kind_from_string(kind.text);
        if (!tk) throw SyntaxError(kind.loc, "unknown task kind '" + kind.text + "'");
        prog.task_kind = *tk;
        end_of_line();

        skip_newlines();
        if (is_keyword("contract")) {
            next();
            prog.contract_clause = expect(Tok::String, "contract text").text;
            end_of_line();
        }

        bool returned = false;
        while (true) {
            skip_newlines();
            const Token& t = peek();
            if (t.kind == Tok::End) break;
            if (returned) throw SyntaxError(t.loc, "statement after final return");
            if (t.kind != Tok::Word) throw SyntaxError(t.loc, "expected statement, found " + found(t));
            if (t.text == "node") {
                prog.body.emplace_back(parse_node());
            } else if (t.text == "repeat") {
                prog.body.emplace_back(parse_repeat());
            } else if (t.text == "branch") {
                prog.body.emplace_back(parse_branch());
            } else if (t.text == "return") {
                next();
                prog.terminal = parse_ref(false);
                end_of_line();
                returned = true;
            } else {
                throw SyntaxError(t.loc, "unknown statement '" + t.text + "'");
            }
        }
        if (!returned) throw SyntaxError(peek().loc, "workflow has no return statement");
        return prog;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    static std::string found(const Token& t) {
        if (t.kind == Tok::Word || t.kind == Tok::Int) return "'" + t.text + "'";
        return std::string(detail::describe(t.kind));
    }

    Token expect(Tok kind, std::string_view what) {
        const Token& t = peek();
        if (t.kind != kind) {
            throw SyntaxError(t.loc, "expected " + std::string(what) + ", found " + found(t));
        }
        return next();
    }

    bool is_keyword(std::string_view kw) const { return peek().kind == Tok::Word && peek().text == kw; }

    void expect_keyword(std::string_view kw) {
        if (!is_keyword(kw)) {
            throw SyntaxError(peek().loc, "expected '" + std::string(kw) + "', found " + found(peek()));
        }
        next();
    }

    void end_of_line() {
        const Token& t = peek();
        if (t.kind == Tok::End) return;
        if (t.kind != Tok::Newline) throw SyntaxError(t.loc, "expected end of line, found " + found(t));
        next();
    }

    void skip_newlines() {
        while (peek().kind == Tok::Newline) next();
    }

    std::string expect_identifier(std::string_view what) {
        const Token t = expect(Tok::Word, what);
        if (!is_identifier(t.text) || kKeywords.count(t.text)) {
            throw SyntaxError(t.loc, "invalid " + std::string(what) + " '" + t.text + "'");
        }
        return t.text;
    }

    NodeSpec parse_node() {
        next();  // node
        NodeSpec node;
        node.id = expect_identifier("node id");
        expect(Tok::Equals, "'='");
        const Token kind = expect(Tok::Word, "operator kind");
        const OperatorSchema* schema = registry_.find(kind.text);
        if (!schema) throw SchemaError("unknown operator kind '" + kind.text + "'" + at(kind.loc));
        node.kind = schema->kind;
        expect(Tok::LBrace, "'{'");
        end_of_line();
        while (true) {
            skip_newlines();
            if (peek().kind == Tok::RBrace) {
                next();
                end_of_line();
                break;
            }
            const Token slot = expect(Tok::Word, "slot name");
            if (!schema->input(slot.text)) {
                throw SchemaError("operator " + schema->name + " has no input slot '" + slot.text + "'" +
                                  at(slot.loc));
            }
            expect(Tok::Equals, "'='");
            Binding value = parse_value();
            end_of_line();
            const bool dup = slot.text == "instruction" ? node.instruction.has_value()
                                                         : node.bindings.count(slot.text) > 0;
            if (dup) throw SchemaError("slot '" + slot.text + "' bound twice" + at(slot.loc));
            if (slot.text == "instruction") {
                node.instruction = std::move(value);
            } else {
                node.bindings.emplace(slot.text, std::move(value));
            }
        }
        return node;
    }

    RepeatBlock parse_repeat() {
        next();  // repeat
        RepeatBlock block;
        const Token count = expect(Tok::Int, "repeat count");
        if (count.text.size() > 6 || std::stoi(count.text) < 1) {
            throw SyntaxError(count.loc, "repeat count must be a positive integer");
        }
        block.count = std::stoi(count.text);
        expect(Tok::LBrace, "'{'");
        end_of_line();
        while (true) {
            skip_newlines();
            const Token& t = peek();
            if (t.kind == Tok::RBrace) {
                next();
                end_of_line();
                break;
            }
            if (!(t.kind == Tok::Word && t.text == "node")) {
                throw SyntaxError(t.loc, "only node statements may appear inside repeat, found " + found(t));
            }
            block.nodes.push_back(parse_node());
        }
        if (block.nodes.empty()) throw SyntaxError(count.loc, "empty repeat block");
        return block;
    }

    BranchBlock parse_branch() {
        next();  // branch
        BranchBlock b;
        b.condition = parse_ref(false);
        expect(Tok::LBrace, "'{'");
        end_of_line();
        skip_newlines();
        expect_keyword("return");
        b.result = parse_ref(false);
        end_of_line();
        skip_newlines();
        expect(Tok::RBrace, "'}'");
        end_of_line();
        return b;
    }

    Ref parse_ref(bool allow_spread) {
        const Token id = expect(Tok::Word, "reference");
        bool spread = false;
        if (peek().kind == Tok::LBracket) {
            if (!allow_spread) throw SyntaxError(peek().loc, "spread reference not allowed here");
            next();
            expect(Tok::Star, "'*'");
            expect(Tok::RBracket, "']'");
            spread = true;
        }
        expect(Tok::Dot, "'.'");
        const Token field = expect(Tok::Word, "field name");
        if (id.text == "task") {
            if (spread) throw SyntaxError(id.loc, "task inputs cannot be spread");
            return Ref::task(field.text);
        }
        if (!is_identifier(id.text)) throw SyntaxError(id.loc, "invalid node id '" + id.text + "'");
        Ref r = Ref::node(id.text, field.text, spread);
        return r;
    }

    Binding parse_value() {
        const Token& t = peek();
        if (t.kind == Tok::String) {
            const Token s = next();
            return Binding{parse_template(s)};
        }
        if (t.kind == Tok::LBracket) {
            next();
            ListExpr list;
            if (peek().kind != Tok::RBracket) {
                while (true) {
                    if (peek().kind == Tok::String) {
                        const Token s = next();
                        list.items.emplace_back(parse_template(s));
                    } else {
                        list.items.emplace_back(parse_ref(true));
                    }
                    if (peek().kind == Tok::Comma) {
                        next();
                        continue;
                    }
                    break;
                }
            }
            expect(Tok::RBracket, "']'");
            return Binding{std::move(list)};
        }
        if (t.kind == Tok::Word) return Binding{parse_ref(false)};
        throw SyntaxError(t.loc, "expected value, found " + found(t));
    }

    static Template parse_template(const Token& tok) {
        Template out;
        std::string literal;
        const std::string& s = tok.text;
        auto flush = [&] {
            if (!literal.empty()) out.parts.emplace_back(std::move(literal));
            literal.clear();
        };
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '$' && i + 1 < s.size() && s[i + 1] == '$') {
                literal.push_back('$');
                ++i;
            } else if (s[i] == '$' && i + 1 < s.size() && s[i + 1] == '{') {
                const std::size_t close = s.find('}', i + 2);
                if (close == std::string::npos) throw SyntaxError(tok.loc, "unterminated ${ in string");
                const std::string inner = s.substr(i + 2, close - i - 2);
                const std::size_t dot = inner.find('.');
                if (dot == std::string::npos || !is_identifier(inner.substr(0, dot)) ||
                    !is_identifier(inner.substr(dot + 1))) {
                    throw SyntaxError(tok.loc, "malformed interpolation ${" + inner + "}");
                }
                flush();
                const std::string id = inner.substr(0, dot);
                const std::string field = inner.substr(dot + 1);
                out.parts.emplace_back(id == "task" ? Ref::task(field) : Ref::node(id, field));
                i = close;
            } else {
                literal.push_back(s[i]);
            }
        }
        flush();
        return out;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const OperatorRegistry& registry_;
};

// Resolves every reference against declared nodes and operator schemas.
class Resolver {
public:
    Resolver(const WorkflowProgram& prog, const OperatorRegistry& registry)
        : prog_(prog), registry_(registry) {}

    void run() {
        int index = 0;
        for (const auto& stmt : prog_.body) {
            if (const auto* n = std::get_if<NodeSpec>(&stmt)) {
                declare(*n, index, -1);
            } else if (const auto* r = std::get_if<RepeatBlock>(&stmt)) {
                for (const auto& n : r->nodes) declare(n, index, index);
            }
            ++index;
        }
        index = 0;
        for (const auto& stmt : prog_.body) {
            if (const auto* n = std::get_if<NodeSpec>(&stmt)) {
                check_node(*n, -1);
            } else if (const auto* r = std::get_if<RepeatBlock>(&stmt)) {
                for (const auto& n : r->nodes) check_node(n, index);
            } else {
                const auto& b = std::get<BranchBlock>(stmt);
                check_scalar(b.condition, "branch condition", index);
                check_scalar(b.result, "branch return", index);
            }
            ++index;
        }
        check_scalar(prog_.terminal, "return", static_cast<int>(prog_.body.size()));
    }

private:
    struct Decl {
        const NodeSpec* node;
        int statement;
        int repeat;  // statement index of the enclosing repeat, -1 if none
    };

    void declare(const NodeSpec& n, int statement, int repeat) {
        if (!decls_.emplace(n.id, Decl{&n, statement, repeat}).second) {
            throw SchemaError("duplicate node id '" + n.id + "'");
        }
    }

    const Decl& lookup(const Ref& r, std::string_view context) const {
        const auto it = decls_.find(r.id);
        if (it == decls_.end()) {
            throw SchemaError(std::string(context) + " references unknown node '" + r.id + "'");
        }
        const OperatorSchema& schema = registry_.schema(it->second.node->kind);
        if (!schema.output(r.field)) {
            throw SchemaError(std::string(context) + " references unknown field '" + r.str() + "' (" +
                              schema.name + " has no output '" + r.field + "')");
        }
        return it->second;
    }

    void check_ref(const Ref& r, const std::string& context, int own_repeat) const {
        if (r.scope == Ref::Scope::Task) {
            if (!kTaskFields.count(r.field)) {
                throw SchemaError(context + " references unknown task input '" + r.str() + "'");
            }
            return;
        }
        const Decl& d = lookup(r, context);
        const bool repeated = d.repeat >= 0;
        const bool sibling = repeated && d.repeat == own_repeat;
        if (r.spread && !repeated) {
            throw SchemaError(context + " spreads '" + r.str() + "' but '" + r.id + "' is not repeated");
        }
        if (r.spread && sibling) {
            throw SchemaError(context + " spreads sibling node '" + r.id + "' inside its own repeat block");
        }
        if (!r.spread && repeated && !sibling) {
            throw SchemaError(context + " references repeated node '" + r.id + "' without [*]");
        }
    }

    void check_node(const NodeSpec& n, int own_repeat) const {
        for (const auto& [slot, b] : n.bindings) {
            for (const auto& r : b.refs()) check_ref(r, "node '" + n.id + "' slot '" + slot + "'", own_repeat);
        }
        if (n.instruction) {
            for (const auto& r : n.instruction->refs()) {
                check_ref(r, "node '" + n.id + "' slot 'instruction'", own_repeat);
            }
        }
    }

    void check_scalar(const Ref& r, const std::string& context, int statement) const {
        if (r.scope == Ref::Scope::Task) throw SchemaError(context + " must reference a node output");
        const Decl& d = lookup(r, context);
        if (d.repeat >= 0) throw SchemaError(context + " references repeated node '" + r.id + "'");
        if (d.statement > statement) {
            throw SchemaError(context + " references node '" + r.id + "' declared after it");
        }
    }

    const WorkflowProgram& prog_;
    const OperatorRegistry& registry_;
    std::map<std::string, Decl, std::less<>> decls_;
};

}  // namespace

WorkflowProgram parse_workflow(std::string_view source, const OperatorRegistry& registry) {
    WorkflowProgram prog = Parser(detail::lex(source), registry).run();
    Resolver(prog, registry).run();
    (void)build_plan(prog);  // cycle and cross-branch ordering checks
    return prog;
}

}  // namespace wfsynth::ir

#pragma once

// Pattern evaluation over the graph. Matching is node-homomorphic (distinct
// variables may bind the same node) and relationship-unique (no relationship
// is traversed twice within one solution, variable-length hops included).
// MATCH clauses share bindings by variable name. Results are ordered
// lexicographically over the bindings of all variables in name order, which
// makes evaluation deterministic and LIMIT well-defined.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ekg/errors.hpp"
#include "ekg/event_model.hpp"
#include "ekg/graph_store.hpp"
#include "ekg/pattern/ast.hpp"

namespace ekg::pattern {

class UnboundVariable : public Error {
public:
    explicit UnboundVariable(const std::string& var)
        : Error("unbound variable '" + var + "'"), var(var) {}
    std::string var;
};

class VarLengthOverflow : public Error {
public:
    explicit VarLengthOverflow(std::size_t cap)
        : Error("variable-length expansion exceeded the cap of " + std::to_string(cap) +
                " hops") {}
};

struct EvalOptions {
    std::size_t varLengthCap = 1000;
};

struct ResultCell {
    enum class Kind { Null, Node, Rel, Path, Value };
    Kind kind = Kind::Null;
    NodeRef node;
    RelRef relref;
    std::vector<NodeRef> pathNodes;
    std::vector<RelRef> pathRels;
    PropertyValue value;

    std::string to_string() const {
        switch (kind) {
            case Kind::Null:
                return "";
            case Kind::Node:
                return "#" + std::to_string(node.value);
            case Kind::Rel:
                return "#r" + std::to_string(relref.value);
            case Kind::Path: {
                std::string out;
                for (std::size_t i = 0; i < pathNodes.size(); ++i) {
                    if (i) out += "->";
                    out += "#" + std::to_string(pathNodes[i].value);
                }
                return out;
            }
            case Kind::Value:
                return value.to_string();
        }
        return {};
    }
};

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<ResultCell>> rows;

    std::string to_csv() const {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                std::string cell = row[i].to_string();
                bool needs_quote = cell.find_first_of(",\"\n") != std::string::npos;
                if (needs_quote) {
                    out += '"';
                    for (char c : cell) {
                        if (c == '"') out += "\"\"";
                        else out += c;
                    }
                    out += '"';
                } else {
                    out += cell;
                }
            }
            out += '\n';
        }
        return out;
    }

    std::string to_text() const {
        std::vector<std::size_t> width(columns.size());
        for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
        std::vector<std::vector<std::string>> rendered;
        for (const auto& row : rows) {
            std::vector<std::string> r;
            for (std::size_t i = 0; i < row.size(); ++i) {
                r.push_back(row[i].to_string());
                width[i] = std::max(width[i], r.back().size());
            }
            rendered.push_back(std::move(r));
        }
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) os << "  ";
                os << cells[i];
                if (i + 1 < cells.size())
                    os << std::string(width[i] - cells[i].size(), ' ');
            }
            os << '\n';
        };
        line(columns);
        std::vector<std::string> rule;
        for (std::size_t w : width) rule.push_back(std::string(w, '-'));
        line(rule);
        for (const auto& r : rendered) line(r);
        return os.str();
    }
};

namespace eval_detail {

struct Binding {
    enum class Kind { Node, Rel, Path };
    Kind kind = Kind::Node;
    NodeRef node;
    RelRef relref;
    std::vector<RelRef> pathRels;
    std::vector<NodeRef> pathNodes;  // includes both endpoints
};

using Env = std::map<std::string, Binding>;

// One element of the flattened evaluation plan.
struct Step {
    enum class Kind { Anchor, Expand };
    Kind kind = Kind::Anchor;
    const NodePattern* node = nullptr;   // Anchor: the pattern to bind
    const RelPattern* relPattern = nullptr;  // Expand
    std::string fromVar;                 // Expand: already-bound left node
    const NodePattern* toNode = nullptr;
    std::string toVar;
    std::string nodeVar;                 // Anchor
    std::string relVar;                  // Expand, may be synthetic
};

struct Matcher {
    const LabeledPropertyGraph& g;
    const PatternAST& ast;
    const EvalOptions& options;
    std::vector<Step> steps;
    Env env;
    std::set<std::uint64_t> used_rels;
    std::vector<Env> solutions;

    Matcher(const LabeledPropertyGraph& graph, const PatternAST& a, const EvalOptions& opts)
        : g(graph), ast(a), options(opts) {
        std::size_t anon = 0;
        auto fresh = [&]() { return "#" + std::to_string(anon++); };
        for (const auto& match : ast.matches) {
            std::vector<std::string> node_vars;
            for (const auto& np : match.nodes)
                node_vars.push_back(np.var ? *np.var : fresh());
            Step anchor;
            anchor.kind = Step::Kind::Anchor;
            anchor.node = &match.nodes[0];
            anchor.nodeVar = node_vars[0];
            steps.push_back(anchor);
            for (std::size_t i = 0; i < match.rels.size(); ++i) {
                Step s;
                s.kind = Step::Kind::Expand;
                s.relPattern = &match.rels[i];
                s.fromVar = node_vars[i];
                s.toNode = &match.nodes[i + 1];
                s.toVar = node_vars[i + 1];
                s.relVar = match.rels[i].var ? *match.rels[i].var : fresh();
                steps.push_back(s);
            }
        }
    }

    bool node_matches(NodeRef ref, const NodePattern& np) const {
        const Node& n = g.node(ref);
        if (np.label && !n.has_label(*np.label)) return false;
        for (const auto& eq : np.props) {
            const PropertyValue* v = n.prop(eq.key);
            if (!v || !(*v == eq.value)) return false;
        }
        return true;
    }

    bool rel_matches(const Relationship& r, const RelPattern& rp) const {
        if (r.relType != rp.relType) return false;
        for (const auto& eq : rp.props) {
            const PropertyValue* v = r.prop(eq.key);
            if (!v || !(*v == eq.value)) return false;
        }
        return true;
    }

    void run() {
        solve(0);
    }

    void solve(std::size_t step_index) {
        if (step_index == steps.size()) {
            if (where_holds()) solutions.push_back(env);
            return;
        }
        const Step& step = steps[step_index];
        if (step.kind == Step::Kind::Anchor) {
            auto bound = env.find(step.nodeVar);
            if (bound != env.end()) {
                if (bound->second.kind == Binding::Kind::Node &&
                    node_matches(bound->second.node, *step.node))
                    solve(step_index + 1);
                return;
            }
            for (NodeRef ref : anchor_candidates(*step.node)) {
                env[step.nodeVar] = Binding{Binding::Kind::Node, ref, {}, {}, {}};
                solve(step_index + 1);
                env.erase(step.nodeVar);
            }
            return;
        }
        expand(step, step_index);
    }

    std::vector<NodeRef> anchor_candidates(const NodePattern& np) const {
        if (np.label) {
            std::vector<PropPredicate> preds;
            for (const auto& eq : np.props) preds.push_back({eq.key, Cmp::Eq, eq.value});
            return g.find_nodes(*np.label, preds);
        }
        std::vector<NodeRef> all;
        g.for_each_node([&](const Node& n) {
            if (node_matches(n.ref, np)) all.push_back(n.ref);
        });
        return all;
    }

    void expand(const Step& step, std::size_t step_index) {
        const Binding& from = env.at(step.fromVar);
        if (from.kind != Binding::Kind::Node) return;  // name clash with a rel var
        NodeRef start = from.node;
        const RelPattern& rp = *step.relPattern;
        Direction dir = rp.leftToRight ? Direction::Out : Direction::In;

        auto try_bind_target = [&](NodeRef target, Binding rel_binding) {
            if (!node_matches(target, *step.toNode)) return;
            auto bound = env.find(step.toVar);
            bool target_was_bound = bound != env.end();
            if (target_was_bound) {
                if (bound->second.kind != Binding::Kind::Node || bound->second.node != target)
                    return;
            }
            bool rel_var_was_bound = env.count(step.relVar) > 0;
            if (rel_var_was_bound) return;  // a rel variable cannot rebind
            if (!target_was_bound)
                env[step.toVar] = Binding{Binding::Kind::Node, target, {}, {}, {}};
            env[step.relVar] = std::move(rel_binding);
            solve(step_index + 1);
            env.erase(step.relVar);
            if (!target_was_bound) env.erase(step.toVar);
        };

        if (!rp.varLength) {
            for (auto& [rel_ref, other] : g.neighbors(start, dir, rp.relType)) {
                if (used_rels.count(rel_ref.value)) continue;
                const Relationship& r = g.relationship(rel_ref);
                if (!rel_matches(r, rp)) continue;
                used_rels.insert(rel_ref.value);
                Binding b;
                b.kind = Binding::Kind::Rel;
                b.relref = rel_ref;
                try_bind_target(other, std::move(b));
                used_rels.erase(rel_ref.value);
            }
            return;
        }

        // Variable-length expansion: depth-first path enumeration with
        // relationship uniqueness against both the current path and the rest
        // of the solution.
        const std::uint32_t min = rp.varLength->min;
        const bool unbounded = !rp.varLength->max.has_value();
        std::uint64_t max = unbounded ? options.varLengthCap : *rp.varLength->max;
        if (!unbounded && max > options.varLengthCap) throw VarLengthOverflow(options.varLengthCap);

        std::vector<RelRef> path_rels;
        std::vector<NodeRef> path_nodes{start};

        std::function<void(NodeRef)> dfs = [&](NodeRef current) {
            if (path_rels.size() >= min) {
                Binding b;
                b.kind = Binding::Kind::Path;
                b.pathRels = path_rels;
                b.pathNodes = path_nodes;
                for (RelRef r : path_rels) used_rels.insert(r.value);
                try_bind_target(current, std::move(b));
                for (RelRef r : path_rels) used_rels.erase(r.value);
            }
            for (auto& [rel_ref, other] : g.neighbors(current, dir, rp.relType)) {
                if (used_rels.count(rel_ref.value)) continue;
                if (std::find(path_rels.begin(), path_rels.end(), rel_ref) != path_rels.end())
                    continue;
                if (!rel_matches(g.relationship(rel_ref), rp)) continue;
                if (path_rels.size() == max) {
                    if (unbounded) throw VarLengthOverflow(options.varLengthCap);
                    return;  // bounded: just stop extending
                }
                path_rels.push_back(rel_ref);
                path_nodes.push_back(other);
                dfs(other);
                path_rels.pop_back();
                path_nodes.pop_back();
            }
        };
        dfs(start);
    }

    bool where_holds() const {
        for (const auto& cmp : ast.where)
            if (!comparison_holds(cmp)) return false;
        return true;
    }

    bool comparison_holds(const Comparison& cmp) const {
        // Property access on an absent key makes the comparison false rather
        // than an error, matching how filters treat absent properties.
        std::optional<PropertyValue> lhs = resolve_value(cmp.lhs);
        std::optional<PropertyValue> rhs = resolve_value(cmp.rhs);
        if (!lhs || !rhs) {
            // Reference comparisons between two variables.
            if (cmp.lhs.kind == Operand::Kind::Variable &&
                cmp.rhs.kind == Operand::Kind::Variable && !lhs && !rhs) {
                const Binding& a = require_binding(cmp.lhs.var);
                const Binding& b = require_binding(cmp.rhs.var);
                if (cmp.op == Cmp::Eq) return binding_ref_equal(a, b);
                if (cmp.op == Cmp::Ne) return !binding_ref_equal(a, b);
                throw TypeMismatch("ordering comparison on graph elements");
            }
            return false;
        }
        if (lhs->kind() != rhs->kind() && (cmp.op == Cmp::Eq || cmp.op == Cmp::Ne))
            return cmp.op == Cmp::Ne;  // different kinds are simply not equal
        return apply_cmp(*lhs, cmp.op, *rhs);
    }

    static bool binding_ref_equal(const Binding& a, const Binding& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Binding::Kind::Node: return a.node == b.node;
            case Binding::Kind::Rel: return a.relref == b.relref;
            case Binding::Kind::Path: return a.pathRels == b.pathRels;
        }
        return false;
    }

    const Binding& require_binding(const std::string& var) const {
        auto it = env.find(var);
        if (it == env.end()) throw UnboundVariable(var);
        return it->second;
    }

    // A value for comparison: literals and bound properties produce values;
    // bare variables do not (they compare by reference above).
    std::optional<PropertyValue> resolve_value(const Operand& op) const {
        switch (op.kind) {
            case Operand::Kind::Literal:
                return op.literal;
            case Operand::Kind::Variable:
                require_binding(op.var);
                return std::nullopt;
            case Operand::Kind::Property: {
                const Binding& b = require_binding(op.var);
                const PropertyValue* v = nullptr;
                if (b.kind == Binding::Kind::Node)
                    v = g.node(b.node).prop(op.key);
                else if (b.kind == Binding::Kind::Rel)
                    v = g.relationship(b.relref).prop(op.key);
                if (!v) return std::nullopt;
                return *v;
            }
        }
        return std::nullopt;
    }
};

inline std::vector<std::uint64_t> solution_key(const Env& env) {
    // Envs are name-ordered maps, so walking them yields a stable
    // lexicographic key across solutions of the same query.
    std::vector<std::uint64_t> key;
    for (const auto& [name, b] : env) {
        switch (b.kind) {
            case Binding::Kind::Node:
                key.push_back(b.node.value);
                break;
            case Binding::Kind::Rel:
                key.push_back(b.relref.value);
                break;
            case Binding::Kind::Path:
                key.push_back(b.pathRels.size());
                for (RelRef r : b.pathRels) key.push_back(r.value);
                break;
        }
    }
    return key;
}

}  // namespace eval_detail

inline ResultTable evaluate(const LabeledPropertyGraph& g, const PatternAST& ast,
                            const EvalOptions& options = {}) {
    // Every variable used in WHERE or RETURN must be bound by some MATCH.
    std::set<std::string> bound;
    for (const auto& match : ast.matches) {
        for (const auto& np : match.nodes)
            if (np.var) bound.insert(*np.var);
        for (const auto& rp : match.rels)
            if (rp.var) bound.insert(*rp.var);
    }
    auto check = [&](const Operand& op) {
        if (op.kind != Operand::Kind::Literal && !bound.count(op.var))
            throw UnboundVariable(op.var);
    };
    for (const auto& cmp : ast.where) {
        check(cmp.lhs);
        check(cmp.rhs);
    }
    for (const auto& item : ast.returns)
        if (!bound.count(item.var)) throw UnboundVariable(item.var);

    eval_detail::Matcher matcher(g, ast, options);
    matcher.run();

    std::sort(matcher.solutions.begin(), matcher.solutions.end(),
              [](const eval_detail::Env& a, const eval_detail::Env& b) {
                  return eval_detail::solution_key(a) < eval_detail::solution_key(b);
              });

    ResultTable table;
    for (const auto& item : ast.returns)
        table.columns.push_back(item.key ? item.var + "." + *item.key : item.var);

    std::size_t limit = ast.limit ? *ast.limit : matcher.solutions.size();
    for (const auto& env : matcher.solutions) {
        if (table.rows.size() >= limit) break;
        std::vector<ResultCell> row;
        for (const auto& item : ast.returns) {
            const eval_detail::Binding& b = env.at(item.var);
            ResultCell cell;
            if (item.key) {
                const PropertyValue* v = nullptr;
                if (b.kind == eval_detail::Binding::Kind::Node)
                    v = g.node(b.node).prop(*item.key);
                else if (b.kind == eval_detail::Binding::Kind::Rel)
                    v = g.relationship(b.relref).prop(*item.key);
                if (v) {
                    cell.kind = ResultCell::Kind::Value;
                    cell.value = *v;
                }
            } else {
                switch (b.kind) {
                    case eval_detail::Binding::Kind::Node:
                        cell.kind = ResultCell::Kind::Node;
                        cell.node = b.node;
                        break;
                    case eval_detail::Binding::Kind::Rel:
                        cell.kind = ResultCell::Kind::Rel;
                        cell.relref = b.relref;
                        break;
                    case eval_detail::Binding::Kind::Path:
                        cell.kind = ResultCell::Kind::Path;
                        cell.pathNodes = b.pathNodes;
                        cell.pathRels = b.pathRels;
                        break;
                }
            }
            row.push_back(std::move(cell));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace ekg::pattern

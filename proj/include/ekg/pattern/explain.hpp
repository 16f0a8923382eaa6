#pragma once

// Human-readable evaluation plan for a pattern query: how each clause is
// anchored (index seek, label scan, or full scan), the expansion order, joins
// on variables shared across clauses, and the residual filters. Pure function
// of the AST and the graph's index catalog.

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ekg/graph_store.hpp"
#include "ekg/pattern/ast.hpp"
#include "ekg/pattern/printer.hpp"

namespace ekg::pattern {

inline std::string explain(const PatternAST& ast, const std::vector<IndexDef>& indexes) {
    auto indexed = [&](const std::string& label, const std::string& key) {
        for (const auto& d : indexes)
            if (d.label == label && d.key == key) return true;
        return false;
    };

    std::ostringstream os;
    std::set<std::string> seen;
    std::size_t anon = 0;
    auto name_of = [&](const std::optional<std::string>& var) {
        return var ? *var : "_" + std::to_string(anon++);
    };

    for (std::size_t ci = 0; ci < ast.matches.size(); ++ci) {
        const PathPattern& match = ast.matches[ci];
        os << "clause " << ci + 1 << ":\n";

        const NodePattern& anchor = match.nodes[0];
        std::string anchor_name = name_of(anchor.var);
        os << "  anchor " << anchor_name << ": ";
        if (anchor.var && seen.count(*anchor.var)) {
            os << "join on " << *anchor.var << " (already bound)";
        } else if (anchor.label) {
            bool seek = false;
            for (const auto& eq : anchor.props)
                if (indexed(*anchor.label, eq.key)) {
                    os << "index seek (" << *anchor.label << "." << eq.key << ")";
                    seek = true;
                    break;
                }
            if (!seek) {
                os << "label scan (" << *anchor.label << ")";
                if (!anchor.props.empty()) os << " + property filter";
            }
        } else {
            os << "full scan (warning: no label)";
        }
        os << "\n";
        if (anchor.var) seen.insert(*anchor.var);

        for (std::size_t i = 0; i < match.rels.size(); ++i) {
            const RelPattern& rp = match.rels[i];
            const NodePattern& to = match.nodes[i + 1];
            std::string to_name = name_of(to.var);
            os << "  expand " << (rp.leftToRight ? "-[:" : "<-[:") << rp.relType;
            if (rp.varLength) {
                os << "*";
                if (rp.varLength->max)
                    os << rp.varLength->min << ".." << *rp.varLength->max;
            }
            os << (rp.leftToRight ? "]->" : "]-") << " to " << to_name;
            if (to.var && seen.count(*to.var)) os << " (join on " << *to.var << ")";
            if (to.label) os << " check :" << *to.label;
            if (!to.props.empty() || !rp.props.empty()) os << " + property filter";
            os << "\n";
            if (to.var) seen.insert(*to.var);
        }
    }
    for (const auto& cmp : ast.where)
        os << "filter: " << printer_detail::operand(cmp.lhs) << " " << cmp_name(cmp.op) << " "
           << printer_detail::operand(cmp.rhs) << "\n";
    os << "return " << ast.returns.size() << " item(s)";
    if (ast.limit) os << ", limit " << *ast.limit;
    os << "\n";
    return os.str();
}

}  // namespace ekg::pattern

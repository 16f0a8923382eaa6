#pragma once

// Seeded random pattern-query ASTs for the printer/parser round-trip
// property. Generated queries are always grammatically valid and use only
// variables bound in some MATCH clause.

#include <random>
#include <string>
#include <vector>

#include "ekg/pattern/ast.hpp"

namespace ekgtest {

inline ekg::pattern::PatternAST random_pattern_ast(std::mt19937& rng) {
    using namespace ekg::pattern;
    using ekg::Cmp;
    using ekg::PropertyValue;

    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> d3(0, 2);
    std::uniform_int_distribution<int> d4(0, 3);
    const std::vector<std::string> vars = {"a", "b", "c", "d", "e"};
    const std::vector<std::string> labels = {"Event", "Entity", "Log", "Class"};
    const std::vector<std::string> rels = {"DF", "E_EN", "L_E", "E_C"};
    const std::vector<std::string> keys = {"Activity", "EntityType", "ID", "k1"};
    const std::vector<std::string> strings = {"plain", "with 'quote'", "back\\slash",
                                              "new\nline", ""};

    auto literal = [&]() -> PropertyValue {
        switch (d4(rng)) {
            case 0: return PropertyValue(strings[static_cast<std::size_t>(d4(rng))]);
            case 1: return PropertyValue(std::int64_t{d4(rng) * 7 - 3});
            case 2: return PropertyValue(static_cast<double>(d4(rng)) + 0.5);
            default: return PropertyValue(coin(rng) == 1);
        }
    };
    auto prop_list = [&]() {
        std::vector<PropEquality> out;
        int n = d3(rng);
        for (int i = 0; i < n; ++i)
            out.push_back({keys[static_cast<std::size_t>(d4(rng))], literal()});
        return out;
    };

    PatternAST ast;
    std::vector<std::string> bound;
    int clauses = 1 + coin(rng);
    std::size_t var_cursor = 0;
    for (int ci = 0; ci < clauses; ++ci) {
        PathPattern path;
        int hops = d3(rng);
        for (int ni = 0; ni <= hops; ++ni) {
            NodePattern np;
            if (coin(rng) || (ci == 0 && ni == 0)) {
                np.var = vars[var_cursor++ % vars.size()];
                bound.push_back(*np.var);
            }
            if (coin(rng)) np.label = labels[static_cast<std::size_t>(d4(rng))];
            np.props = prop_list();
            path.nodes.push_back(np);
        }
        for (int ri = 0; ri < hops; ++ri) {
            RelPattern rp;
            if (coin(rng) == 1) {
                rp.var = "r" + std::to_string(ci) + std::to_string(ri);
                bound.push_back(*rp.var);
            }
            rp.relType = rels[static_cast<std::size_t>(d4(rng))];
            rp.leftToRight = coin(rng) == 1;
            if (coin(rng) == 1) {
                VarLength vl;
                if (coin(rng) == 1) {
                    vl.min = static_cast<std::uint32_t>(1 + d3(rng));
                    vl.max = vl.min + static_cast<std::uint32_t>(d3(rng));
                }
                rp.varLength = vl;
            }
            rp.props = prop_list();
            path.rels.push_back(rp);
        }
        ast.matches.push_back(path);
    }
    int wheres = d3(rng);
    for (int i = 0; i < wheres; ++i) {
        Comparison cmp;
        auto operand = [&]() {
            Operand op;
            int kind = d3(rng);
            if (kind == 0) {
                op.kind = Operand::Kind::Literal;
                op.literal = literal();
            } else if (kind == 1) {
                op.kind = Operand::Kind::Variable;
                op.var = bound[static_cast<std::size_t>(d4(rng)) % bound.size()];
            } else {
                op.kind = Operand::Kind::Property;
                op.var = bound[static_cast<std::size_t>(d4(rng)) % bound.size()];
                op.key = keys[static_cast<std::size_t>(d4(rng))];
            }
            return op;
        };
        cmp.lhs = operand();
        cmp.op = static_cast<Cmp>(d4(rng) % 6);
        cmp.rhs = operand();
        ast.where.push_back(cmp);
    }
    int returns = 1 + coin(rng);
    for (int i = 0; i < returns; ++i) {
        ReturnItem item;
        item.var = bound[static_cast<std::size_t>(d4(rng)) % bound.size()];
        if (coin(rng)) item.key = keys[static_cast<std::size_t>(d4(rng))];
        ast.returns.push_back(item);
    }
    if (coin(rng)) ast.limit = static_cast<std::uint64_t>(1 + d4(rng));
    return ast;
}

}  // namespace ekgtest

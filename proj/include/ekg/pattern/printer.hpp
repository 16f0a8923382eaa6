#pragma once

// Canonical single-line rendering of a pattern AST; parse(print(ast)) is the
// identity on ASTs, which the round-trip property tests rely on.

#include <sstream>
#include <string>

#include "ekg/pattern/ast.hpp"

namespace ekg::pattern {

namespace printer_detail {

inline std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        switch (c) {
            case '\'': out += "\\'"; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '\'';
    return out;
}

inline std::string literal(const PropertyValue& v) {
    switch (v.kind()) {
        case PropertyValue::Kind::Text: return quote(v.text());
        case PropertyValue::Kind::Boolean: return v.boolean() ? "true" : "false";
        case PropertyValue::Kind::Float: {
            // Keep a decimal point so the text lexes back as a float.
            std::string s = v.to_string();
            if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
            return s;
        }
        default: return v.to_string();
    }
}

inline std::string prop_map(const std::vector<PropEquality>& props) {
    if (props.empty()) return {};
    std::string out = " {";
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (i) out += ", ";
        out += props[i].key + ": " + literal(props[i].value);
    }
    out += "}";
    return out;
}

inline std::string node(const NodePattern& np) {
    std::string out = "(";
    if (np.var) out += *np.var;
    if (np.label) out += ":" + *np.label;
    std::string props = prop_map(np.props);
    if (!props.empty() && !np.var && !np.label) props.erase(0, 1);  // no leading space
    out += props;
    out += ")";
    return out;
}

inline std::string rel(const RelPattern& rp) {
    std::string body = "[";
    if (rp.var) body += *rp.var;
    body += ":" + rp.relType;
    if (rp.varLength) {
        body += "*";
        if (rp.varLength->max)
            body += std::to_string(rp.varLength->min) + ".." + std::to_string(*rp.varLength->max);
    }
    body += prop_map(rp.props);
    body += "]";
    return rp.leftToRight ? " -" + body + "-> " : " <-" + body + "- ";
}

inline std::string operand(const Operand& op) {
    switch (op.kind) {
        case Operand::Kind::Property: return op.var + "." + op.key;
        case Operand::Kind::Variable: return op.var;
        case Operand::Kind::Literal: return literal(op.literal);
    }
    return {};
}

}  // namespace printer_detail

inline std::string print(const PatternAST& ast) {
    using namespace printer_detail;
    std::ostringstream os;
    for (const auto& match : ast.matches) {
        os << "MATCH " << node(match.nodes[0]);
        for (std::size_t i = 0; i < match.rels.size(); ++i)
            os << rel(match.rels[i]) << node(match.nodes[i + 1]);
        os << " ";
    }
    if (!ast.where.empty()) {
        os << "WHERE ";
        for (std::size_t i = 0; i < ast.where.size(); ++i) {
            if (i) os << " AND ";
            os << operand(ast.where[i].lhs) << " " << cmp_name(ast.where[i].op) << " "
               << operand(ast.where[i].rhs);
        }
        os << " ";
    }
    os << "RETURN ";
    for (std::size_t i = 0; i < ast.returns.size(); ++i) {
        if (i) os << ", ";
        os << ast.returns[i].var;
        if (ast.returns[i].key) os << "." << *ast.returns[i].key;
    }
    if (ast.limit) os << " LIMIT " << *ast.limit;
    return os.str();
}

}  // namespace ekg::pattern

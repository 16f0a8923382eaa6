#pragma once

// AST for the pattern query language. The shape mirrors the grammar:
//
//   query      := matchClause+ whereClause? returnClause limitClause?
//   matchClause:= "MATCH" pathPattern
//   pathPattern:= nodePat (relPat nodePat)*
//   nodePat    := "(" ident? (":" ident)? propMap? ")"
//   relPat     := "-[" ident? ":" ident varLen? propMap? "]->"
//              |  "<-[" ident? ":" ident varLen? propMap? "]-"
//   varLen     := "*" (int ".." int)?
//   propMap    := "{" ident ":" literal ("," ident ":" literal)* "}"
//   whereClause:= "WHERE" comparison ("AND" comparison)*
//   comparison := operand op operand
//   op         := "=" | "<>" | "<" | "<=" | ">" | ">=" | operand
//   operand    := ident "." ident | ident | literal
//   returnClause := "RETURN" retItem ("," retItem)*
//   limitClause  := "LIMIT" int

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ekg/property_value.hpp"

namespace ekg::pattern {

struct PropEquality {
    std::string key;
    PropertyValue value;
    friend bool operator==(const PropEquality&, const PropEquality&) = default;
};

struct NodePattern {
    std::optional<std::string> var;
    std::optional<std::string> label;
    std::vector<PropEquality> props;
    friend bool operator==(const NodePattern&, const NodePattern&) = default;
};

struct VarLength {
    std::uint32_t min = 1;
    std::optional<std::uint32_t> max;  // nullopt = unbounded (capped at evaluation)
    friend bool operator==(const VarLength&, const VarLength&) = default;
};

struct RelPattern {
    std::optional<std::string> var;
    std::string relType;
    bool leftToRight = true;  // -[..]-> vs <-[..]-
    std::optional<VarLength> varLength;
    std::vector<PropEquality> props;
    friend bool operator==(const RelPattern&, const RelPattern&) = default;
};

struct PathPattern {
    std::vector<NodePattern> nodes;  // size == rels.size() + 1
    std::vector<RelPattern> rels;
    friend bool operator==(const PathPattern&, const PathPattern&) = default;
};

struct Operand {
    enum class Kind { Property, Variable, Literal };
    Kind kind = Kind::Literal;
    std::string var;       // Property, Variable
    std::string key;       // Property
    PropertyValue literal; // Literal
    friend bool operator==(const Operand&, const Operand&) = default;
};

struct Comparison {
    Operand lhs;
    Cmp op = Cmp::Eq;
    Operand rhs;
    friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct ReturnItem {
    std::string var;
    std::optional<std::string> key;  // var.key projection
    friend bool operator==(const ReturnItem&, const ReturnItem&) = default;
};

struct PatternAST {
    std::vector<PathPattern> matches;
    std::vector<Comparison> where;
    std::vector<ReturnItem> returns;
    std::optional<std::uint64_t> limit;
    friend bool operator==(const PatternAST&, const PatternAST&) = default;
};

}  // namespace ekg::pattern

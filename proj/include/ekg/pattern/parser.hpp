#pragma once

// Hand-rolled lexer and recursive-descent parser for the pattern language.
// Keywords are case-insensitive; identifiers are ASCII word characters;
// string literals take single or double quotes.

#include <cctype>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ekg/errors.hpp"
#include "ekg/pattern/ast.hpp"

namespace ekg::pattern {

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::set<std::string>& expected,
                const std::string& found)
        : Error(build(line, column, expected, found)),
          line(line), column(column), expected(expected), found(found) {}
    std::size_t line, column;
    std::set<std::string> expected;
    std::string found;

private:
    static std::string build(std::size_t line, std::size_t column,
                             const std::set<std::string>& expected, const std::string& found) {
        std::ostringstream os;
        os << "syntax error at " << line << ":" << column << ": expected ";
        std::size_t i = 0;
        for (const auto& e : expected) os << (i++ ? " | " : "") << e;
        os << ", found " << found;
        return os.str();
    }
};

namespace parser_detail {

enum class Tok {
    End, Ident, String, Int, Float,
    KwMatch, KwWhere, KwAnd, KwReturn, KwLimit, KwTrue, KwFalse,
    LParen, RParen, LBrack, RBrack, LBrace, RBrace,
    Colon, Comma, Dot, DotDot, Star, Minus,
    Lt, Gt, Le, Ge, Ne, Eq,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t int_value = 0;
    double float_value = 0;
    std::size_t line = 1, column = 1;
};

inline std::string tok_name(Tok t) {
    switch (t) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "identifier";
        case Tok::String: return "string";
        case Tok::Int: return "integer";
        case Tok::Float: return "float";
        case Tok::KwMatch: return "MATCH";
        case Tok::KwWhere: return "WHERE";
        case Tok::KwAnd: return "AND";
        case Tok::KwReturn: return "RETURN";
        case Tok::KwLimit: return "LIMIT";
        case Tok::KwTrue: return "true";
        case Tok::KwFalse: return "false";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrack: return "'['";
        case Tok::RBrack: return "']'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Colon: return "':'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::DotDot: return "'..'";
        case Tok::Star: return "'*'";
        case Tok::Minus: return "'-'";
        case Tok::Lt: return "'<'";
        case Tok::Gt: return "'>'";
        case Tok::Le: return "'<='";
        case Tok::Ge: return "'>='";
        case Tok::Ne: return "'<>'";
        case Tok::Eq: return "'='";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            consume();
        current_ = Token{};
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            return;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                word += text_[pos_];
                consume();
            }
            current_.text = word;
            std::string upper;
            for (char ch : word) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            if (upper == "MATCH") current_.kind = Tok::KwMatch;
            else if (upper == "WHERE") current_.kind = Tok::KwWhere;
            else if (upper == "AND") current_.kind = Tok::KwAnd;
            else if (upper == "RETURN") current_.kind = Tok::KwReturn;
            else if (upper == "LIMIT") current_.kind = Tok::KwLimit;
            else if (upper == "TRUE") current_.kind = Tok::KwTrue;
            else if (upper == "FALSE") current_.kind = Tok::KwFalse;
            else current_.kind = Tok::Ident;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (c == '\'' || c == '"') {
            lex_string(c);
            return;
        }
        consume();
        switch (c) {
            case '(': current_.kind = Tok::LParen; return;
            case ')': current_.kind = Tok::RParen; return;
            case '[': current_.kind = Tok::LBrack; return;
            case ']': current_.kind = Tok::RBrack; return;
            case '{': current_.kind = Tok::LBrace; return;
            case '}': current_.kind = Tok::RBrace; return;
            case ':': current_.kind = Tok::Colon; return;
            case ',': current_.kind = Tok::Comma; return;
            case '*': current_.kind = Tok::Star; return;
            case '-': current_.kind = Tok::Minus; return;
            case '=': current_.kind = Tok::Eq; return;
            case '.':
                if (pos_ < text_.size() && text_[pos_] == '.') {
                    consume();
                    current_.kind = Tok::DotDot;
                } else {
                    current_.kind = Tok::Dot;
                }
                return;
            case '<':
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    consume();
                    current_.kind = Tok::Le;
                } else if (pos_ < text_.size() && text_[pos_] == '>') {
                    consume();
                    current_.kind = Tok::Ne;
                } else {
                    current_.kind = Tok::Lt;
                }
                return;
            case '>':
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    consume();
                    current_.kind = Tok::Ge;
                } else {
                    current_.kind = Tok::Gt;
                }
                return;
            default: {
                throw SyntaxError(current_.line, current_.column, {"token"},
                                  "'" + std::string(1, c) + "'");
            }
        }
    }

    void lex_number() {
        std::string digits;
        bool is_float = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            digits += text_[pos_];
            consume();
        }
        // '.' starts a fraction only when a digit follows; ".." belongs to
        // variable-length bounds.
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            is_float = true;
            digits += '.';
            consume();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits += text_[pos_];
                consume();
            }
        }
        current_.text = digits;
        if (is_float) {
            current_.kind = Tok::Float;
            current_.float_value = std::strtod(digits.c_str(), nullptr);
        } else {
            current_.kind = Tok::Int;
            current_.int_value = std::strtoll(digits.c_str(), nullptr, 10);
        }
    }

    void lex_string(char quote) {
        consume();  // opening quote
        std::string value;
        while (true) {
            if (pos_ >= text_.size())
                throw SyntaxError(current_.line, current_.column, {"closing quote"},
                                  "end of input");
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                char esc = text_[pos_ + 1];
                consume();
                consume();
                switch (esc) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case '\\': value += '\\'; break;
                    case '\'': value += '\''; break;
                    case '"': value += '"'; break;
                    default: value += esc; break;
                }
                continue;
            }
            consume();
            if (c == quote) break;
            value += c;
        }
        current_.kind = Tok::String;
        current_.text = value;
    }

    void consume() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1, column_ = 1;
    Token current_;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    PatternAST parse() {
        PatternAST ast;
        expect(Tok::KwMatch);
        ast.matches.push_back(path_pattern());
        while (peek_is(Tok::KwMatch)) {
            lex_.next();
            ast.matches.push_back(path_pattern());
        }
        if (peek_is(Tok::KwWhere)) {
            lex_.next();
            ast.where.push_back(comparison());
            while (peek_is(Tok::KwAnd)) {
                lex_.next();
                ast.where.push_back(comparison());
            }
        }
        expect(Tok::KwReturn);
        ast.returns.push_back(return_item());
        while (peek_is(Tok::Comma)) {
            lex_.next();
            ast.returns.push_back(return_item());
        }
        if (peek_is(Tok::KwLimit)) {
            lex_.next();
            Token t = expect(Tok::Int);
            if (t.int_value < 1) fail({"positive integer"}, t);
            ast.limit = static_cast<std::uint64_t>(t.int_value);
        }
        if (!peek_is(Tok::End)) fail({"end of input"}, lex_.peek());
        return ast;
    }

private:
    PathPattern path_pattern() {
        PathPattern path;
        path.nodes.push_back(node_pattern());
        while (peek_is(Tok::Minus) || peek_is(Tok::Lt)) {
            path.rels.push_back(rel_pattern());
            path.nodes.push_back(node_pattern());
        }
        return path;
    }

    NodePattern node_pattern() {
        NodePattern np;
        expect(Tok::LParen);
        if (peek_is(Tok::Ident)) np.var = lex_.next().text;
        if (peek_is(Tok::Colon)) {
            lex_.next();
            np.label = expect(Tok::Ident).text;
        }
        if (peek_is(Tok::LBrace)) np.props = prop_map();
        expect(Tok::RParen);
        return np;
    }

    RelPattern rel_pattern() {
        RelPattern rp;
        if (peek_is(Tok::Lt)) {  // <-[ ... ]-
            rp.leftToRight = false;
            lex_.next();
            expect(Tok::Minus);
            rel_body(rp);
            expect(Tok::Minus);
        } else {  // -[ ... ]->
            rp.leftToRight = true;
            expect(Tok::Minus);
            rel_body(rp);
            expect(Tok::Minus);
            expect(Tok::Gt);
        }
        return rp;
    }

    void rel_body(RelPattern& rp) {
        expect(Tok::LBrack);
        if (peek_is(Tok::Ident)) rp.var = lex_.next().text;
        expect(Tok::Colon);
        rp.relType = expect(Tok::Ident).text;
        if (peek_is(Tok::Star)) {
            lex_.next();
            VarLength vl;
            if (peek_is(Tok::Int)) {
                Token lo = lex_.next();
                expect(Tok::DotDot);
                Token hi = expect(Tok::Int);
                if (lo.int_value < 1 || hi.int_value < lo.int_value)
                    fail({"bounds with 1 <= min <= max"}, hi);
                vl.min = static_cast<std::uint32_t>(lo.int_value);
                vl.max = static_cast<std::uint32_t>(hi.int_value);
            }
            rp.varLength = vl;
        }
        if (peek_is(Tok::LBrace)) rp.props = prop_map();
        expect(Tok::RBrack);
    }

    std::vector<PropEquality> prop_map() {
        std::vector<PropEquality> props;
        expect(Tok::LBrace);
        while (true) {
            std::string key = expect(Tok::Ident).text;
            expect(Tok::Colon);
            props.push_back({key, literal()});
            if (peek_is(Tok::Comma)) {
                lex_.next();
                continue;
            }
            break;
        }
        expect(Tok::RBrace);
        return props;
    }

    PropertyValue literal() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::String: return PropertyValue(lex_.next().text);
            case Tok::Int: return PropertyValue(lex_.next().int_value);
            case Tok::Float: return PropertyValue(lex_.next().float_value);
            case Tok::KwTrue: lex_.next(); return PropertyValue(true);
            case Tok::KwFalse: lex_.next(); return PropertyValue(false);
            case Tok::Minus: {
                lex_.next();
                const Token& n = lex_.peek();
                if (n.kind == Tok::Int) return PropertyValue(-lex_.next().int_value);
                if (n.kind == Tok::Float) return PropertyValue(-lex_.next().float_value);
                fail({"number"}, n);
            }
            default:
                fail({"string", "number", "boolean"}, t);
        }
        return PropertyValue();  // unreachable
    }

    Operand operand() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Ident) {
            Operand op;
            op.var = lex_.next().text;
            if (peek_is(Tok::Dot)) {
                lex_.next();
                op.kind = Operand::Kind::Property;
                op.key = expect(Tok::Ident).text;
            } else {
                op.kind = Operand::Kind::Variable;
            }
            return op;
        }
        Operand op;
        op.kind = Operand::Kind::Literal;
        op.literal = literal();
        return op;
    }

    Comparison comparison() {
        Comparison cmp;
        cmp.lhs = operand();
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Eq: cmp.op = Cmp::Eq; break;
            case Tok::Ne: cmp.op = Cmp::Ne; break;
            case Tok::Lt: cmp.op = Cmp::Lt; break;
            case Tok::Le: cmp.op = Cmp::Le; break;
            case Tok::Gt: cmp.op = Cmp::Gt; break;
            case Tok::Ge: cmp.op = Cmp::Ge; break;
            default: fail({"'='", "'<>'", "'<'", "'<='", "'>'", "'>='"}, t);
        }
        lex_.next();
        cmp.rhs = operand();
        return cmp;
    }

    ReturnItem return_item() {
        ReturnItem item;
        item.var = expect(Tok::Ident).text;
        if (peek_is(Tok::Dot)) {
            lex_.next();
            item.key = expect(Tok::Ident).text;
        }
        return item;
    }

    bool peek_is(Tok kind) const { return lex_.peek().kind == kind; }

    Token expect(Tok kind) {
        if (!peek_is(kind)) fail({tok_name(kind)}, lex_.peek());
        return lex_.next();
    }

    [[noreturn]] void fail(const std::set<std::string>& expected, const Token& found) {
        std::string shown = found.kind == Tok::End ? "end of input"
                            : found.text.empty()  ? tok_name(found.kind)
                                                  : "'" + found.text + "'";
        throw SyntaxError(found.line, found.column, expected, shown);
    }

    Lexer lex_;
};

}  // namespace parser_detail

inline PatternAST parse(std::string_view text) {
    return parser_detail::Parser(text).parse();
}

}  // namespace ekg::pattern

#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ekg/errors.hpp"
#include "ekg/time.hpp"

namespace ekg {

using TextList = std::vector<std::string>;

// The value types a node or relationship property can hold. Ordering
// comparisons are only defined within one alternative; asking to compare a
// text against an integer is an error, never a coercion.
class PropertyValue {
public:
    enum class Kind { Text = 0, Integer, Float, Boolean, Time, List };

    PropertyValue() : v_(std::string{}) {}
    PropertyValue(std::string s) : v_(std::move(s)) {}
    PropertyValue(const char* s) : v_(std::string(s)) {}
    PropertyValue(std::int64_t i) : v_(i) {}
    PropertyValue(int i) : v_(static_cast<std::int64_t>(i)) {}
    PropertyValue(double d) : v_(d) {}
    PropertyValue(bool b) : v_(b) {}
    PropertyValue(Timestamp t) : v_(t) {}
    PropertyValue(TextList l) : v_(std::move(l)) {}

    Kind kind() const { return static_cast<Kind>(v_.index()); }

    bool is_text() const { return kind() == Kind::Text; }
    bool is_time() const { return kind() == Kind::Time; }

    const std::string& text() const { return std::get<std::string>(v_); }
    std::int64_t integer() const { return std::get<std::int64_t>(v_); }
    double floating() const { return std::get<double>(v_); }
    bool boolean() const { return std::get<bool>(v_); }
    Timestamp time() const { return std::get<Timestamp>(v_); }
    const TextList& list() const { return std::get<TextList>(v_); }

    // Structural equality: kinds and payloads match exactly.
    friend bool operator==(const PropertyValue& a, const PropertyValue& b) {
        return a.v_ == b.v_;
    }

    // Three-way comparison within one kind; throws TypeMismatch across kinds.
    int compare(const PropertyValue& other) const {
        if (kind() != other.kind())
            throw TypeMismatch("cannot compare " + kind_name(kind()) + " with " +
                               kind_name(other.kind()));
        return std::visit(
            [&](const auto& a) -> int {
                const auto& b = std::get<std::decay_t<decltype(a)>>(other.v_);
                if (a < b) return -1;
                if (b < a) return 1;
                return 0;
            },
            v_);
    }

    // Total order over (kind, payload); used for deterministic internal maps,
    // never exposed as a user-facing comparison.
    static bool struct_less(const PropertyValue& a, const PropertyValue& b) {
        if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
        return std::visit(
            [&](const auto& x) {
                return x < std::get<std::decay_t<decltype(x)>>(b.v_);
            },
            a.v_);
    }

    std::string to_string() const {
        switch (kind()) {
            case Kind::Text:
                return text();
            case Kind::Integer:
                return std::to_string(integer());
            case Kind::Float: {
                char buf[32];
                auto r = std::to_chars(buf, buf + sizeof buf, floating());
                return std::string(buf, r.ptr);
            }
            case Kind::Boolean:
                return boolean() ? "true" : "false";
            case Kind::Time:
                return format_timestamp_iso8601(time());
            case Kind::List: {
                std::string out = "[";
                for (std::size_t i = 0; i < list().size(); ++i) {
                    if (i) out += ", ";
                    out += list()[i];
                }
                return out + "]";
            }
        }
        return {};
    }

    static std::string kind_name(Kind k) {
        switch (k) {
            case Kind::Text: return "text";
            case Kind::Integer: return "integer";
            case Kind::Float: return "float";
            case Kind::Boolean: return "boolean";
            case Kind::Time: return "timestamp";
            case Kind::List: return "list";
        }
        return "?";
    }

private:
    std::variant<std::string, std::int64_t, double, bool, Timestamp, TextList> v_;
};

struct PropertyValueStructLess {
    bool operator()(const PropertyValue& a, const PropertyValue& b) const {
        return PropertyValue::struct_less(a, b);
    }
};

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* cmp_name(Cmp c) {
    switch (c) {
        case Cmp::Eq: return "=";
        case Cmp::Ne: return "<>";
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Gt: return ">";
        case Cmp::Ge: return ">=";
    }
    return "?";
}

// Applies a comparator; cross-kind comparisons throw TypeMismatch.
inline bool apply_cmp(const PropertyValue& lhs, Cmp cmp, const PropertyValue& rhs) {
    int c = lhs.compare(rhs);
    switch (cmp) {
        case Cmp::Eq: return c == 0;
        case Cmp::Ne: return c != 0;
        case Cmp::Lt: return c < 0;
        case Cmp::Le: return c <= 0;
        case Cmp::Gt: return c > 0;
        case Cmp::Ge: return c >= 0;
    }
    return false;
}

}  // namespace ekg

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etr/codes.hpp"

namespace etr {

enum class Ordering { Less, Equal, Greater, Incomparable };

inline Ordering flip(Ordering o) {
    switch (o) {
        case Ordering::Less: return Ordering::Greater;
        case Ordering::Greater: return Ordering::Less;
        default: return o;
    }
}

std::string_view to_string(Ordering o);

class ParseError : public Error {
public:
    using Error::Error;
};

class NotAMember : public Error {
public:
    using Error::Error;
};

class InvalidElement : public Error {
public:
    using Error::Error;
};

/// Rejected order construction (e.g. an exponent that is not a well-order).
class OrderError : public Error {
public:
    using Error::Error;
};

/// A coded order on natural numbers: linear orders, well-orders and
/// well-founded partial orders (trees). Immutable; copies share structure.
class Order {
public:
    enum class Kind { Finite, Omega, Sum, Lex, Restriction, Exponential, Reversed, Tree };

    static Order finite(Natural k);
    static Order omega();
    static Order sum(Order first, Order second);
    /// Compares the first component first.
    static Order lex(Order major, Order minor);
    /// base^exponent. An exponent that is not a well-order is rejected
    /// unless allow_unsafe is set; the result is then flagged unsafe.
    static Order exponential(Order base, Order exponent, bool allow_unsafe = false);
    static Order reversed(Order inner);
    /// All 0-1 sequences of length <= depth; a prefix is above its extensions.
    static Order tree(Natural depth);

    /// Suborder of the members strictly below x. Throws NotAMember.
    Order restrict_below(Code x) const;

    Kind kind() const;
    bool contains(Code c) const;
    /// Precondition: both codes are members.
    Ordering compare(Code a, Code b) const;
    bool less(Code a, Code b) const { return compare(a, b) == Ordering::Less; }

    std::optional<Code> least() const;
    /// Number of members when the order is finite (and the count is known).
    std::optional<Natural> size() const;

    bool is_linear() const;
    bool is_well_founded() const;
    bool is_well_order() const { return is_linear() && is_well_founded(); }
    bool is_unsafe() const;

    /// At most `limit` members. Finite orders that fit are listed completely,
    /// ascending in the order (a linear extension for trees). Exponentials are
    /// generated by length, then lexicographically on entry codes, then sorted.
    /// Other infinite orders are listed in ascending code order.
    std::vector<Code> enumerate(std::size_t limit) const;

    /// Child orders: sum/lex operands, {base, exponent}, the reversed or restricted order.
    std::span<const Order> children() const;
    /// Finite size, tree depth or restriction bound, depending on kind.
    Natural parameter() const;

    std::string to_string() const;

private:
    struct Node;
    explicit Order(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// `fin(k) | omega | sum(E,E) | lex(E,E) | exp(E,E) | rev(E) | tree(d) | below(E,x)`
Order parse_order(std::string_view text, bool allow_unsafe = false);

struct ExpEntry {
    Code exponent;     // b, member of the exponent order
    Code coefficient;  // a, member of the base order
    bool operator==(const ExpEntry&) const = default;
};

/// <(b0,a0), ..., (b_{n-1},a_{n-1})> with strictly descending exponents and
/// coefficients different from the base's least element.
struct ExpElement {
    std::vector<ExpEntry> entries;

    Code encode() const;
    static ExpElement decode(Code c);
    bool operator==(const ExpElement&) const = default;
};

bool exp_validate(const Order& base, const Order& exponent, const ExpElement& e);

/// Throws InvalidElement when either side fails exp_validate.
Ordering exp_compare(const Order& base, const Order& exponent, const ExpElement& s,
                     const ExpElement& t);

/// Lexicographic comparison in which a strict extension is the larger side.
template <class Entry, class EntryCompare>
Ordering compare_extending(std::span<const Entry> s, std::span<const Entry> t,
                           EntryCompare&& entry_compare) {
    const std::size_t common = s.size() < t.size() ? s.size() : t.size();
    for (std::size_t i = 0; i < common; ++i) {
        const Ordering o = entry_compare(s[i], t[i]);
        if (o != Ordering::Equal) return o;
    }
    if (s.size() == t.size()) return Ordering::Equal;
    return s.size() < t.size() ? Ordering::Less : Ordering::Greater;
}

}  // namespace etr

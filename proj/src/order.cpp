#include "etr/order.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>

namespace etr {

namespace {

// Finite orders up to this size are enumerated completely and sorted.
constexpr Natural kFullEnumerationCap = Natural{1} << 16;
constexpr Natural kMaxTreeDepth = 62;

std::optional<Natural> checked_add(std::optional<Natural> a, std::optional<Natural> b) {
    if (!a || !b) return std::nullopt;
    if (*a > std::numeric_limits<Natural>::max() - *b) return std::nullopt;
    return *a + *b;
}

std::optional<Natural> checked_mul(std::optional<Natural> a, std::optional<Natural> b) {
    if (!a || !b) return std::nullopt;
    if (*a != 0 && *b > std::numeric_limits<Natural>::max() / *a) return std::nullopt;
    return *a * *b;
}

std::optional<Natural> checked_pow(Natural base, Natural exponent) {
    std::optional<Natural> r = 1;
    for (Natural i = 0; i < exponent && r; ++i) r = checked_mul(r, base);
    return r;
}

Natural tree_depth_of(Code c) {
    // Heap layout: depth d occupies codes [2^d - 1, 2^(d+1) - 1).
    return static_cast<Natural>(std::bit_width(c + 1) - 1);
}

// True when `ancestor` is a proper prefix of `node` in heap layout.
bool is_proper_ancestor(Code ancestor, Code node) {
    while (node > ancestor) {
        node = (node - 1) / 2;
        if (node == ancestor) return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(Ordering o) {
    switch (o) {
        case Ordering::Less: return "LT";
        case Ordering::Equal: return "EQ";
        case Ordering::Greater: return "GT";
        case Ordering::Incomparable: return "INCOMPARABLE";
    }
    return "?";
}

struct Order::Node {
    Kind kind{};
    Natural param = 0;
    std::vector<Order> kids;
    bool linear = true;
    bool well_founded = true;
    bool unsafe = false;
    std::optional<Code> least;
    std::optional<Code> greatest;
    std::optional<Natural> size;
};

Order::Order(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

namespace {

// Fills least/greatest by enumeration for small finite linear orders
// whose structural rule gave nothing.
void settle_extremes(const Order& self, std::optional<Code>& least,
                     std::optional<Code>& greatest) {
    auto n = self.size();
    if (!self.is_linear() || !n || *n == 0 || *n > kFullEnumerationCap) return;
    if (least && greatest) return;
    const auto all = self.enumerate(static_cast<std::size_t>(*n));
    if (all.empty()) return;
    if (!least) least = all.front();
    if (!greatest) greatest = all.back();
}

}  // namespace

Order Order::finite(Natural k) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Finite;
    n->param = k;
    n->size = k;
    if (k > 0) {
        n->least = 0;
        n->greatest = k - 1;
    }
    return Order(std::move(n));
}

Order Order::omega() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Omega;
    n->least = 0;
    return Order(std::move(n));
}

Order Order::sum(Order first, Order second) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->linear = first.is_linear() && second.is_linear();
    n->well_founded = first.is_well_founded() && second.is_well_founded();
    n->unsafe = first.is_unsafe() || second.is_unsafe();
    n->size = checked_add(first.size(), second.size());
    const bool first_empty = first.size() && *first.size() == 0;
    const bool second_empty = second.size() && *second.size() == 0;
    if (!first_empty) {
        if (first.least()) n->least = 2 * *first.least();
    } else if (second.least()) {
        n->least = 2 * *second.least() + 1;
    }
    if (!second_empty) {
        if (second.node_->greatest) n->greatest = 2 * *second.node_->greatest + 1;
    } else if (first.node_->greatest) {
        n->greatest = 2 * *first.node_->greatest;
    }
    n->kids = {std::move(first), std::move(second)};
    return Order(std::move(n));
}

Order Order::lex(Order major, Order minor) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Lex;
    n->linear = major.is_linear() && minor.is_linear();
    n->well_founded = major.is_well_founded() && minor.is_well_founded();
    n->unsafe = major.is_unsafe() || minor.is_unsafe();
    n->size = checked_mul(major.size(), minor.size());
    if (major.least() && minor.least()) n->least = pair(*major.least(), *minor.least());
    if (major.node_->greatest && minor.node_->greatest)
        n->greatest = pair(*major.node_->greatest, *minor.node_->greatest);
    n->kids = {std::move(major), std::move(minor)};
    return Order(std::move(n));
}

Order Order::exponential(Order base, Order exponent, bool allow_unsafe) {
    if (!exponent.is_well_order() && !allow_unsafe) {
        throw OrderError("exponent " + exponent.to_string() +
                         " is not a well-order; construction requires the unsafe flag");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exponential;
    n->linear = base.is_linear() && exponent.is_linear();
    n->well_founded = base.is_well_order() && exponent.is_well_order();
    n->unsafe = !exponent.is_well_order() || base.is_unsafe() || exponent.is_unsafe();
    n->least = 0;  // the empty sequence
    if (base.size() && exponent.size() && exponent.is_linear()) {
        // Each member is a map exponent -> base with finite support off the least coefficient.
        const Natural nonzero = *base.size() - (base.least() ? 1 : 0);
        n->size = checked_pow(nonzero + 1, *exponent.size());
    }
    n->kids = {std::move(base), std::move(exponent)};
    Order self(n);
    settle_extremes(self, n->least, n->greatest);
    return self;
}

Order Order::reversed(Order inner) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Reversed;
    n->linear = inner.is_linear();
    // Reversing a finite order keeps it well-founded; otherwise no claim.
    n->well_founded = inner.size().has_value() && inner.is_well_founded();
    n->unsafe = inner.is_unsafe();
    n->size = inner.size();
    n->least = inner.node_->greatest;
    n->greatest = inner.node_->least;
    n->kids = {std::move(inner)};
    return Order(std::move(n));
}

Order Order::tree(Natural depth) {
    if (depth > kMaxTreeDepth) throw OrderError("tree depth " + std::to_string(depth) + " too large");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Tree;
    n->param = depth;
    n->linear = false;
    n->well_founded = true;
    n->size = (Natural{1} << (depth + 1)) - 1;
    n->greatest = 0;
    if (depth == 0) n->least = 0;
    return Order(std::move(n));
}

Order Order::restrict_below(Code x) const {
    if (!contains(x)) throw NotAMember(std::to_string(x) + " is not a member of " + to_string());
    auto n = std::make_shared<Node>();
    n->kind = Kind::Restriction;
    n->param = x;
    n->linear = is_linear();
    n->well_founded = is_well_founded();
    n->unsafe = is_unsafe();
    if (node_->least && less(*node_->least, x)) n->least = node_->least;
    if (kind() == Kind::Omega) n->size = x;
    n->kids = {*this};
    Order self(n);
    if (!n->size && size() && *size() <= kFullEnumerationCap) {
        const auto all = enumerate(static_cast<std::size_t>(*size()));
        n->size = static_cast<Natural>(
            std::count_if(all.begin(), all.end(), [&](Code c) { return less(c, x); }));
    }
    settle_extremes(self, n->least, n->greatest);
    return self;
}

Order::Kind Order::kind() const { return node_->kind; }
std::optional<Code> Order::least() const { return node_->least; }
std::optional<Natural> Order::size() const { return node_->size; }
bool Order::is_linear() const { return node_->linear; }
bool Order::is_well_founded() const { return node_->well_founded; }
bool Order::is_unsafe() const { return node_->unsafe; }
std::span<const Order> Order::children() const { return node_->kids; }
Natural Order::parameter() const { return node_->param; }

bool Order::contains(Code c) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Finite: return c < n.param;
        case Kind::Omega: return true;
        case Kind::Sum: return (c % 2 == 0) ? n.kids[0].contains(c / 2) : n.kids[1].contains(c / 2);
        case Kind::Lex: {
            auto [a, b] = unpair(c);
            return n.kids[0].contains(a) && n.kids[1].contains(b);
        }
        case Kind::Restriction:
            return n.kids[0].contains(c) && n.kids[0].less(c, n.param);
        case Kind::Exponential:
            return exp_validate(n.kids[0], n.kids[1], ExpElement::decode(c));
        case Kind::Reversed: return n.kids[0].contains(c);
        case Kind::Tree: return c < *n.size;
    }
    return false;
}

Ordering Order::compare(Code a, Code b) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Finite:
        case Kind::Omega:
            return a < b ? Ordering::Less : (a == b ? Ordering::Equal : Ordering::Greater);
        case Kind::Sum: {
            const Code ta = a % 2;
            const Code tb = b % 2;
            if (ta != tb) return ta < tb ? Ordering::Less : Ordering::Greater;
            return n.kids[ta].compare(a / 2, b / 2);
        }
        case Kind::Lex: {
            auto [a0, a1] = unpair(a);
            auto [b0, b1] = unpair(b);
            const Ordering major = n.kids[0].compare(a0, b0);
            if (major != Ordering::Equal) return major;
            return n.kids[1].compare(a1, b1);
        }
        case Kind::Restriction: return n.kids[0].compare(a, b);
        case Kind::Exponential: {
            const auto s = ExpElement::decode(a);
            const auto t = ExpElement::decode(b);
            const Order& base = n.kids[0];
            const Order& exponent = n.kids[1];
            return compare_extending<ExpEntry>(s.entries, t.entries,
                                               [&](const ExpEntry& x, const ExpEntry& y) {
                                                   const Ordering o = exponent.compare(x.exponent, y.exponent);
                                                   if (o != Ordering::Equal) return o;
                                                   return base.compare(x.coefficient, y.coefficient);
                                               });
        }
        case Kind::Reversed: return flip(n.kids[0].compare(a, b));
        case Kind::Tree:
            if (a == b) return Ordering::Equal;
            if (is_proper_ancestor(a, b)) return Ordering::Greater;
            if (is_proper_ancestor(b, a)) return Ordering::Less;
            return Ordering::Incomparable;
    }
    return Ordering::Incomparable;
}

namespace {

std::vector<ExpElement> generate_exponential(const Order& base, const Order& exponent,
                                             std::size_t limit) {
    auto pool_of = [limit](const Order& o) {
        if (o.size() && *o.size() <= kFullEnumerationCap) return o.enumerate(static_cast<std::size_t>(*o.size()));
        return o.enumerate(std::min<std::size_t>(limit, 256));
    };
    std::vector<Code> coefficients = pool_of(base);
    if (base.least()) std::erase(coefficients, *base.least());
    const std::vector<Code> exponents = pool_of(exponent);

    std::vector<ExpEntry> entries;
    for (Code b : exponents)
        for (Code a : coefficients) entries.push_back({b, a});
    std::sort(entries.begin(), entries.end(), [](const ExpEntry& x, const ExpEntry& y) {
        return pair(x.exponent, x.coefficient) < pair(y.exponent, y.coefficient);
    });

    std::vector<ExpElement> out;
    if (limit == 0) return out;
    std::vector<ExpElement> level{ExpElement{}};
    out.push_back(ExpElement{});
    while (!level.empty() && out.size() < limit) {
        std::vector<ExpElement> next;
        for (const auto& seq : level) {
            for (const auto& e : entries) {
                if (!seq.entries.empty() && !exponent.less(e.exponent, seq.entries.back().exponent)) continue;
                ExpElement ext = seq;
                ext.entries.push_back(e);
                next.push_back(ext);
                out.push_back(std::move(ext));
                if (out.size() >= limit) break;
            }
            if (out.size() >= limit) break;
        }
        level = std::move(next);
    }
    return out;
}

}  // namespace

std::vector<Code> Order::enumerate(std::size_t limit) const {
    const Node& n = *node_;
    std::vector<Code> out;
    if (limit == 0) return out;

    if (n.kind == Kind::Exponential && !(n.size && *n.size <= kFullEnumerationCap)) {
        auto elems = generate_exponential(n.kids[0], n.kids[1], limit);
        if (n.linear) {
            std::stable_sort(elems.begin(), elems.end(), [&](const ExpElement& s, const ExpElement& t) {
                return exp_compare(n.kids[0], n.kids[1], s, t) == Ordering::Less;
            });
        }
        for (const auto& e : elems) out.push_back(e.encode());
        return out;
    }

    if (n.size && *n.size <= kFullEnumerationCap) {
        const Natural total = *n.size;
        switch (n.kind) {
            case Kind::Finite:
            case Kind::Tree:
                for (Code c = 0; c < total; ++c) out.push_back(c);
                break;
            case Kind::Sum:
                for (Code a : n.kids[0].enumerate(static_cast<std::size_t>(*n.kids[0].size()))) out.push_back(2 * a);
                for (Code b : n.kids[1].enumerate(static_cast<std::size_t>(*n.kids[1].size()))) out.push_back(2 * b + 1);
                break;
            case Kind::Lex: {
                const auto as = n.kids[0].enumerate(static_cast<std::size_t>(*n.kids[0].size()));
                const auto bs = n.kids[1].enumerate(static_cast<std::size_t>(*n.kids[1].size()));
                for (Code a : as)
                    for (Code b : bs) out.push_back(pair(a, b));
                break;
            }
            case Kind::Exponential: {
                for (const auto& e : generate_exponential(n.kids[0], n.kids[1], static_cast<std::size_t>(total)))
                    out.push_back(e.encode());
                break;
            }
            case Kind::Reversed:
                out = n.kids[0].enumerate(static_cast<std::size_t>(total));
                break;
            case Kind::Restriction: {
                const Order& inner = n.kids[0];
                if (inner.size() && *inner.size() <= kFullEnumerationCap) {
                    for (Code c : inner.enumerate(static_cast<std::size_t>(*inner.size())))
                        if (inner.less(c, n.param)) out.push_back(c);
                } else {
                    for (Code c = 0; out.size() < total; ++c)
                        if (contains(c)) out.push_back(c);
                }
                break;
            }
            case Kind::Omega: break;
        }
        if (n.linear) {
            std::sort(out.begin(), out.end(), [this](Code a, Code b) { return less(a, b); });
        } else if (n.kind == Kind::Tree) {
            // Linear extension: deeper nodes first.
            std::stable_sort(out.begin(), out.end(), [](Code a, Code b) {
                return tree_depth_of(a) > tree_depth_of(b);
            });
        }
        if (out.size() > limit) out.resize(limit);
        return out;
    }

    // Infinite (or too large): ascending code order over members.
    const Code scan_cap = static_cast<Code>(limit) * 64 + 4096;
    for (Code c = 0; c < scan_cap && out.size() < limit; ++c)
        if (contains(c)) out.push_back(c);
    return out;
}

std::string Order::to_string() const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Finite: return "fin(" + std::to_string(n.param) + ")";
        case Kind::Omega: return "omega";
        case Kind::Sum: return "sum(" + n.kids[0].to_string() + "," + n.kids[1].to_string() + ")";
        case Kind::Lex: return "lex(" + n.kids[0].to_string() + "," + n.kids[1].to_string() + ")";
        case Kind::Restriction: return "below(" + n.kids[0].to_string() + "," + std::to_string(n.param) + ")";
        case Kind::Exponential: return "exp(" + n.kids[0].to_string() + "," + n.kids[1].to_string() + ")";
        case Kind::Reversed: return "rev(" + n.kids[0].to_string() + ")";
        case Kind::Tree: return "tree(" + std::to_string(n.param) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class OrderParser {
public:
    OrderParser(std::string_view text, bool allow_unsafe) : text_(text), unsafe_(allow_unsafe) {}

    Order parse() {
        Order o = expression();
        skip_space();
        if (pos_ != text_.size()) fail("trailing input");
        return o;
    }

private:
    Order expression() {
        const std::string word = identifier();
        if (word == "omega") return Order::omega();
        if (word == "fin") {
            expect('(');
            const Natural k = number();
            expect(')');
            return Order::finite(k);
        }
        if (word == "tree") {
            expect('(');
            const Natural d = number();
            expect(')');
            return Order::tree(d);
        }
        if (word == "rev") {
            expect('(');
            Order inner = expression();
            expect(')');
            return Order::reversed(std::move(inner));
        }
        if (word == "below") {
            expect('(');
            Order inner = expression();
            expect(',');
            const Code x = number();
            expect(')');
            if (!inner.contains(x)) fail(std::to_string(x) + " is not a member of " + inner.to_string());
            return inner.restrict_below(x);
        }
        if (word == "sum" || word == "lex" || word == "exp") {
            expect('(');
            Order a = expression();
            expect(',');
            Order b = expression();
            expect(')');
            if (word == "sum") return Order::sum(std::move(a), std::move(b));
            if (word == "lex") return Order::lex(std::move(a), std::move(b));
            try {
                return Order::exponential(std::move(a), std::move(b), unsafe_);
            } catch (const OrderError& e) {
                fail(e.what());
            }
        }
        fail("unknown order constructor '" + word + "'");
    }

    std::string identifier() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an order constructor");
        return std::string(text_.substr(start, pos_ - start));
    }

    Natural number() {
        skip_space();
        const std::size_t start = pos_;
        Natural v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            const Natural digit = static_cast<Natural>(text_[pos_] - '0');
            if (v > (std::numeric_limits<Natural>::max() - digit) / 10) fail("number too large");
            v = v * 10 + digit;
            ++pos_;
        }
        if (start == pos_) fail("expected a natural number");
        return v;
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("order expression '" + std::string(text_) + "' at " + std::to_string(pos_) +
                         ": " + what);
    }

    std::string_view text_;
    bool unsafe_;
    std::size_t pos_ = 0;
};

}  // namespace

Order parse_order(std::string_view text, bool allow_unsafe) {
    return OrderParser(text, allow_unsafe).parse();
}

// ---------------------------------------------------------------------------
// Exponential elements

Code ExpElement::encode() const {
    std::vector<Code> items;
    items.reserve(entries.size());
    for (const auto& e : entries) items.push_back(pair(e.exponent, e.coefficient));
    return encode_sequence(items);
}

ExpElement ExpElement::decode(Code c) {
    ExpElement out;
    for (Code v : decode_sequence(c)) {
        auto [b, a] = unpair(v);
        out.entries.push_back({b, a});
    }
    return out;
}

bool exp_validate(const Order& base, const Order& exponent, const ExpElement& e) {
    const auto zero = base.least();
    for (std::size_t i = 0; i < e.entries.size(); ++i) {
        const auto& [b, a] = e.entries[i];
        if (!exponent.contains(b) || !base.contains(a)) return false;
        if (zero && a == *zero) return false;
        if (i + 1 < e.entries.size() &&
            exponent.compare(b, e.entries[i + 1].exponent) != Ordering::Greater)
            return false;
    }
    return true;
}

Ordering exp_compare(const Order& base, const Order& exponent, const ExpElement& s,
                     const ExpElement& t) {
    if (!exp_validate(base, exponent, s) || !exp_validate(base, exponent, t)) {
        throw InvalidElement("exp_compare on an element outside " +
                             Order::exponential(base, exponent, true).to_string());
    }
    return compare_extending<ExpEntry>(s.entries, t.entries, [&](const ExpEntry& x, const ExpEntry& y) {
        const Ordering o = exponent.compare(x.exponent, y.exponent);
        if (o != Ordering::Equal) return o;
        return base.compare(x.coefficient, y.coefficient);
    });
}

}  // namespace etr

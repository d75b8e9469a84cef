#include "etr/codes.hpp"

#include <cmath>
#include <limits>

namespace etr {

namespace {

using Wide = unsigned __int128;

Wide triangle(Wide w) { return w * (w + 1) / 2; }

}  // namespace

Code pair(Code a, Code b) {
    const Wide s = static_cast<Wide>(a) + b;
    // triangle(2^33) already exceeds 2^64; checking first keeps the 128-bit product exact.
    const Wide v = s < (Wide{1} << 33) ? triangle(s) + b : Wide{0} - 1;
    if (v > std::numeric_limits<Code>::max()) {
        throw CodeOverflow("pair(" + std::to_string(a) + ", " + std::to_string(b) +
                           ") exceeds 64 bits");
    }
    return static_cast<Code>(v);
}

std::pair<Code, Code> unpair(Code c) {
    // w is the largest integer with w(w+1)/2 <= c.
    Wide w = static_cast<Code>((std::sqrt(8.0L * static_cast<long double>(c) + 1.0L) - 1.0L) / 2.0L);
    while (w > 0 && triangle(w) > c) --w;
    while (triangle(w + 1) <= c) ++w;
    const auto b = static_cast<Code>(c - triangle(w));
    const auto a = static_cast<Code>(w - b);
    return {a, b};
}

Code encode_sequence(std::span<const Code> items) {
    Code c = 0;
    for (Code v : items) {
        c = pair(c, v);
        if (c == std::numeric_limits<Code>::max()) throw CodeOverflow("sequence code exceeds 64 bits");
        ++c;
    }
    return c;
}

std::vector<Code> decode_sequence(Code c) {
    std::vector<Code> out;
    while (c != 0) {
        auto [rest, v] = unpair(c - 1);
        out.push_back(v);
        c = rest;
    }
    return {out.rbegin(), out.rend()};
}

}  // namespace etr

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace etr {

/// Every element of every order is a natural number.
using Code = std::uint64_t;
using Natural = std::uint64_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CodeOverflow : public Error {
public:
    using Error::Error;
};

/// Cantor pairing (a+b)(a+b+1)/2 + b. Throws CodeOverflow past 2^64.
Code pair(Code a, Code b);

/// Inverse of pair(); total on all of Code.
std::pair<Code, Code> unpair(Code c);

/// <> -> 0, s*<v> -> pair(code(s), v) + 1.
Code encode_sequence(std::span<const Code> items);
std::vector<Code> decode_sequence(Code c);

/// Bit index of the stage (x, n) inside a Z-prefix. Shared by every
/// predicate, both engines and the fixpoint checker.
inline Code stage_code(Code x, Natural n) { return pair(n, x); }

/// A bit index i addresses the stage (x, n) returned here.
struct StageRef {
    Code x;
    Natural n;
};
inline StageRef stage_of(Code index) {
    auto [n, x] = unpair(index);
    return {x, n};
}

}  // namespace etr

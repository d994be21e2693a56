#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pasieve {

// Ambient geometry runs in extended precision (64-bit mantissa on x86-64).
// Swap this alias for __float128 or a softfloat type if more is ever needed.
using Real = long double;

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

inline constexpr Real kPi = 3.14159265358979323846264338327950288L;

using IVec = std::vector<i64>;
using RVec = std::vector<Real>;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow");
    return r;
}

inline i128 checked_mul128(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow (128-bit)");
    return r;
}

inline i64 gcd64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 lcm64(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / gcd64(a, b), b);
}

}  // namespace pasieve

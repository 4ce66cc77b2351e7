#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace redlab {

using rat = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

// all precondition/shape violations surface as redlab::Error with a short reason
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& what) { throw Error(what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(what);
}

// FNV-1a 64-bit. Fixed content hash for cache addressing and seed stream derivation;
// documented in the README, not intended to be cryptographic.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; i++) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; i--) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline bigint binom(int64_t n, int64_t r) {
    if (r < 0 || r > n) return 0;
    if (r > n - r) r = n - r;
    bigint acc = 1;
    for (int64_t i = 0; i < r; i++) {
        acc *= (n - i);
        acc /= (i + 1);
    }
    return acc;
}

inline int64_t gcd64(int64_t a, int64_t b) {
    while (b) {
        int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline int64_t lcm64(int64_t a, int64_t b) { return a / gcd64(a, b) * b; }

// lcm(1..n); n stays tiny in practice (max degree of a desk-scale instance)
inline int64_t lcm_upto(int n) {
    int64_t acc = 1;
    for (int i = 2; i <= n; i++) acc = lcm64(acc, i);
    return acc;
}

inline rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return rat(bigint(s));
    return rat(bigint(s.substr(0, slash)), bigint(s.substr(slash + 1)));
}

inline std::string rat_to_string(const rat& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

}  // namespace redlab

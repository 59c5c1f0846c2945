#ifndef PMDA_DIGITS_HPP
#define PMDA_DIGITS_HPP

#include <cstdint>
#include <vector>

#include "pmda/gf.hpp"

namespace pmda {

/// r-ary expansions a = sum r^(m-1-j) * a_j with a_0 the most significant
/// digit.  Every module shares this single convention.
struct DigitProfile {
    uint32_t radix = 0;   // r
    uint32_t count = 0;   // m
    uint32_t ell = 0;     // r^m

    DigitProfile() = default;
    DigitProfile(uint32_t r, uint32_t m) : radix(r), count(m) {
        if (r < 2 || m < 1) throw Error("digit profile needs r >= 2, m >= 1");
        uint64_t e = 1;
        for (uint32_t i = 0; i < m; ++i) {
            e *= r;
            if (e > (1u << 20)) throw Error("sub-packetization exceeds 2^20");
        }
        ell = static_cast<uint32_t>(e);
    }

    std::vector<uint32_t> digits(uint32_t a) const {
        check(a);
        std::vector<uint32_t> d(count);
        for (uint32_t j = count; j-- > 0;) {
            d[j] = a % radix;
            a /= radix;
        }
        return d;
    }

    uint32_t compose(const std::vector<uint32_t>& d) const {
        if (d.size() != count) throw OutOfRange("digit vector has wrong length");
        uint32_t a = 0;
        for (uint32_t j = 0; j < count; ++j) {
            if (d[j] >= radix) throw OutOfRange("digit out of range");
            a = a * radix + d[j];
        }
        return a;
    }

    uint32_t digit(uint32_t a, uint32_t i) const {
        check(a);
        if (i >= count) throw OutOfRange("digit index out of range");
        for (uint32_t j = count - 1; j > i; --j) a /= radix;
        return a % radix;
    }

    /// Ascending indices of V_{i,t} = { a : a_i == t }, size r^(m-1).
    std::vector<uint32_t> v_indices(uint32_t i, uint32_t t) const {
        if (i >= count || t >= radix) throw OutOfRange("V_{i,t} index out of range");
        std::vector<uint32_t> out;
        out.reserve(ell / radix);
        for (uint32_t a = 0; a < ell; ++a)
            if (digit(a, i) == t) out.push_back(a);
        return out;
    }

    /// The unique index agreeing with a everywhere except digit i set to t.
    uint32_t replace(uint32_t a, uint32_t i, uint32_t t) const {
        if (t >= radix) throw OutOfRange("replacement digit out of range");
        uint32_t scale = 1;
        for (uint32_t j = count - 1; j > i; --j) scale *= radix;
        const uint32_t cur = digit(a, i);
        return a - cur * scale + t * scale;
    }

private:
    void check(uint32_t a) const {
        if (a >= ell) throw OutOfRange("index out of range for digit profile");
    }
};

}  // namespace pmda

#endif

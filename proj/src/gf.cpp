#include "pmda/gf.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace pmda {

namespace {

constexpr uint64_t kMaxQ = 1u << 20;

// Polynomials over GF(p), coefficients ascending.
using Poly = std::vector<uint32_t>;

size_t true_size(const Poly& a) {
    size_t s = a.size();
    while (s > 0 && a[s - 1] == 0) --s;
    return s;
}

// Remainder of a by monic b.
Poly poly_rem(Poly a, const Poly& b, uint32_t p) {
    const size_t db = true_size(b);  // degree db-1, monic
    size_t da = true_size(a);
    while (da >= db && db > 0) {
        const uint32_t lead = a[da - 1];
        if (lead != 0) {
            const size_t shift = da - db;
            for (size_t i = 0; i < db; ++i) {
                uint64_t t = static_cast<uint64_t>(lead) * b[i] % p;
                a[shift + i] = static_cast<uint32_t>((a[shift + i] + p - t) % p);
            }
        }
        da = true_size(a);
    }
    a.resize(db > 0 ? db - 1 : 0);
    return a;
}

bool poly_is_zero(const Poly& a) { return true_size(a) == 0; }

// Trial division by every monic polynomial of degree <= m/2; desk scale only.
bool is_irreducible(const Poly& f, uint32_t p) {
    const size_t m = true_size(f) - 1;
    for (size_t d = 1; d <= m / 2; ++d) {
        uint64_t count = 1;
        for (size_t i = 0; i < d; ++i) count *= p;
        for (uint64_t t = 0; t < count; ++t) {
            Poly g(d + 1, 0);
            uint64_t v = t;
            for (size_t i = 0; i < d; ++i) { g[i] = static_cast<uint32_t>(v % p); v /= p; }
            g[d] = 1;
            if (poly_is_zero(poly_rem(f, g, p))) return false;
        }
    }
    return true;
}

std::vector<uint64_t> distinct_prime_factors(uint64_t x) {
    std::vector<uint64_t> out;
    for (uint64_t d = 2; d * d <= x; ++d) {
        if (x % d == 0) {
            out.push_back(d);
            while (x % d == 0) x /= d;
        }
    }
    if (x > 1) out.push_back(x);
    return out;
}

}  // namespace

bool Field::is_prime(uint64_t x) {
    if (x < 2) return false;
    for (uint64_t d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

Field::Field(uint32_t p, uint32_t m, std::vector<uint32_t> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {
    uint64_t q = 1;
    for (uint32_t i = 0; i < m_; ++i) q *= p_;
    q_ = static_cast<uint32_t>(q);
    if (m_ >= 2) {
        // x^m = -(c_0 + c_1 x + ... + c_{m-1} x^{m-1}), then shift-and-reduce.
        Poly x_m(m_);
        for (uint32_t i = 0; i < m_; ++i) x_m[i] = (p_ - modulus_[i]) % p_;
        xred_.push_back(x_m);
        for (uint32_t k = 1; k + 1 < m_; ++k) {
            const Poly& prev = xred_.back();
            Poly next(m_, 0);
            const uint32_t top = prev[m_ - 1];
            for (uint32_t i = m_ - 1; i > 0; --i) next[i] = prev[i - 1];
            next[0] = 0;
            if (top != 0)
                for (uint32_t i = 0; i < m_; ++i)
                    next[i] = static_cast<uint32_t>(
                        (next[i] + static_cast<uint64_t>(top) * xred_[0][i]) % p_);
            xred_.push_back(next);
        }
    }
}

FieldPtr Field::make(uint32_t p, uint32_t m,
                     std::optional<std::vector<uint32_t>> modulus) {
    if (!is_prime(p)) throw NotPrime("p = " + std::to_string(p) + " is not prime");
    if (m < 1) throw Error("extension degree must be >= 1");
    uint64_t q = 1;
    for (uint32_t i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxQ) throw Error("field size exceeds 2^20");
    }
    std::vector<uint32_t> mod;
    if (modulus) {
        mod = *modulus;
        if (mod.size() != m + 1 || mod[m] != 1)
            throw Error("modulus must be monic of degree m");
        for (uint32_t c : mod)
            if (c >= p) throw Error("modulus coefficient out of range");
        if (m >= 2 && !is_irreducible(mod, p))
            throw ReducibleModulus("modulus is reducible over GF(p)");
    } else if (m == 1) {
        mod = {0, 1};
    } else {
        // Smallest tail first: candidate t encodes the non-leading coefficients.
        bool found = false;
        for (uint64_t t = 0; t < q && !found; ++t) {
            Poly f(m + 1, 0);
            uint64_t v = t;
            for (uint32_t i = 0; i < m; ++i) { f[i] = static_cast<uint32_t>(v % p); v /= p; }
            f[m] = 1;
            if (is_irreducible(f, p)) {
                mod = f;
                found = true;
            }
        }
        if (!found) throw NoIrreducibleFound("no irreducible polynomial found");
    }
    return FieldPtr(new Field(p, m, std::move(mod)));
}

uint32_t Field::element(uint64_t v) const {
    if (v >= q_) throw OutOfRange("element value out of range for field");
    return static_cast<uint32_t>(v);
}

uint32_t Field::add(uint32_t a, uint32_t b) const {
    if (m_ == 1) return static_cast<uint32_t>((static_cast<uint64_t>(a) + b) % p_);
    uint32_t res = 0, scale = 1;
    for (uint32_t i = 0; i < m_; ++i) {
        res += ((a % p_ + b % p_) % p_) * scale;
        a /= p_; b /= p_;
        scale *= p_;
    }
    return res;
}

uint32_t Field::sub(uint32_t a, uint32_t b) const {
    if (m_ == 1) return static_cast<uint32_t>((static_cast<uint64_t>(a) + p_ - b) % p_);
    uint32_t res = 0, scale = 1;
    for (uint32_t i = 0; i < m_; ++i) {
        res += ((a % p_ + p_ - b % p_) % p_) * scale;
        a /= p_; b /= p_;
        scale *= p_;
    }
    return res;
}

uint32_t Field::neg(uint32_t a) const { return sub(0, a); }

uint32_t Field::mul(uint32_t a, uint32_t b) const {
    if (m_ == 1) return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % p_);
    std::array<uint32_t, 21> da{}, db{};
    for (uint32_t i = 0; i < m_; ++i) { da[i] = a % p_; a /= p_; }
    for (uint32_t i = 0; i < m_; ++i) { db[i] = b % p_; b /= p_; }
    std::array<uint64_t, 41> prod{};
    for (uint32_t i = 0; i < m_; ++i) {
        if (da[i] == 0) continue;
        for (uint32_t j = 0; j < m_; ++j)
            prod[i + j] += static_cast<uint64_t>(da[i]) * db[j];
    }
    for (uint32_t k = 2 * m_ - 2; k >= m_ && k < 41; --k) {
        const uint64_t c = prod[k] % p_;
        if (c != 0) {
            const auto& red = xred_[k - m_];
            for (uint32_t i = 0; i < m_; ++i) prod[i] += c * red[i];
        }
        prod[k] = 0;
        if (k == m_) break;
    }
    uint32_t res = 0, scale = 1;
    for (uint32_t i = 0; i < m_; ++i) {
        res += static_cast<uint32_t>(prod[i] % p_) * scale;
        scale *= p_;
    }
    return res;
}

uint32_t Field::pow(uint32_t a, int64_t e) const {
    if (a == 0) {
        if (e > 0) return 0;
        if (e == 0) return 1;
        throw DivisionByZero("0 has no inverse");
    }
    const int64_t qm1 = static_cast<int64_t>(q_) - 1;
    e %= qm1;
    if (e < 0) e += qm1;
    uint32_t base = a, res = 1;
    while (e > 0) {
        if (e & 1) res = mul(res, base);
        base = mul(base, base);
        e >>= 1;
    }
    return res;
}

uint32_t Field::inv(uint32_t a) const {
    if (a == 0) throw DivisionByZero("0 has no inverse");
    return pow(a, static_cast<int64_t>(q_) - 2);
}

uint32_t Field::div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

std::vector<uint32_t> Field::coeffs(uint32_t v) const {
    std::vector<uint32_t> c(m_);
    for (uint32_t i = 0; i < m_; ++i) { c[i] = v % p_; v /= p_; }
    return c;
}

uint32_t Field::from_coeffs(const std::vector<uint32_t>& c) const {
    if (c.size() != m_) throw OutOfRange("coefficient count must equal m");
    uint32_t res = 0, scale = 1;
    for (uint32_t i = 0; i < m_; ++i) {
        if (c[i] >= p_) throw OutOfRange("coefficient out of range");
        res += c[i] * scale;
        scale *= p_;
    }
    return res;
}

std::vector<uint32_t> Subgroup::elements() const {
    std::vector<uint32_t> out;
    out.reserve(order);
    uint32_t x = 1;
    for (uint32_t i = 0; i < order; ++i) {
        out.push_back(x);
        x = field->mul(x, generator);
    }
    return out;
}

uint32_t primitive_root(const Field& f) {
    const uint64_t qm1 = f.q() - 1;
    if (qm1 == 1) return 1;
    const auto factors = distinct_prime_factors(qm1);
    for (uint32_t g = 2; g < f.q(); ++g) {
        bool ok = true;
        for (uint64_t fac : factors)
            if (f.pow(g, static_cast<int64_t>(qm1 / fac)) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw Error("no primitive root found");  // unreachable for a valid field
}

Subgroup find_subgroup(const FieldPtr& field, uint32_t min_order, uint32_t min_cosets) {
    if (min_order < 1 || min_cosets < 1) throw Error("min_order and min_cosets must be >= 1");
    const uint32_t qm1 = field->q() - 1;
    std::vector<uint32_t> divisors;
    for (uint32_t d = 1; d <= qm1; ++d)
        if (qm1 % d == 0) divisors.push_back(d);
    for (uint32_t d : divisors) {
        if (d < min_order || qm1 / d < min_cosets) continue;
        const uint32_t g0 = primitive_root(*field);
        const uint32_t h = field->pow(g0, qm1 / d);
        uint32_t gen = h;
        for (uint32_t k = 2; k < d; ++k) {
            if (std::gcd(k, d) != 1) continue;
            gen = std::min(gen, field->pow(h, k));
        }
        if (d == 1) gen = 1;
        Subgroup sg;
        sg.field = field;
        sg.generator = gen;
        sg.order = d;
        sg.coset_reps.reserve(min_cosets);
        for (uint32_t j = 0; j < min_cosets; ++j)
            sg.coset_reps.push_back(field->pow(g0, j));
        return sg;
    }
    throw NoSuchSubgroup("no subgroup of order >= " + std::to_string(min_order) +
                         " with >= " + std::to_string(min_cosets) + " cosets in GF(" +
                         std::to_string(field->q()) + ")");
}

uint32_t TowerBasis::embed(uint32_t v) const {
    if (v >= small->q()) throw OutOfRange("value not in base field");
    return v;
}

std::vector<uint32_t> TowerBasis::coords(uint32_t v) const { return big->coeffs(v); }

TowerBasis subfield_basis(const FieldPtr& big, const FieldPtr& small) {
    if (big->p() != small->p())
        throw IncompatibleTower("different characteristic");
    if (small->m() != 1 || big->m() != 3)
        throw IncompatibleTower("only GF(q0) inside GF(q0^3) with prime q0 is supported");
    TowerBasis t;
    t.big = big;
    t.small = small;
    t.v0 = 1;
    t.v1 = big->p();
    t.v2 = big->p() * big->p();
    return t;
}

}  // namespace pmda

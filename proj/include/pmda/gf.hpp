#ifndef PMDA_GF_HPP
#define PMDA_GF_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmda {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPrime : Error { using Error::Error; };
struct ReducibleModulus : Error { using Error::Error; };
struct NoIrreducibleFound : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };
struct NoSuchSubgroup : Error { using Error::Error; };
struct IncompatibleTower : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// GF(p^m) with elements encoded as integers: sum c_i * p^i for the
/// polynomial sum c_i * x^i.  Immutable after construction; all ops pure.
class Field {
public:
    // modulus coefficients ascending, c[m] == 1; found by exhaustive
    // search over monic degree-m polynomials when omitted.
    static FieldPtr make(uint32_t p, uint32_t m,
                         std::optional<std::vector<uint32_t>> modulus = std::nullopt);

    uint32_t p() const { return p_; }
    uint32_t m() const { return m_; }
    uint32_t q() const { return q_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    uint32_t element(uint64_t v) const;
    uint32_t add(uint32_t a, uint32_t b) const;
    uint32_t sub(uint32_t a, uint32_t b) const;
    uint32_t neg(uint32_t a) const;
    uint32_t mul(uint32_t a, uint32_t b) const;
    uint32_t inv(uint32_t a) const;
    uint32_t div(uint32_t a, uint32_t b) const;
    uint32_t pow(uint32_t a, int64_t e) const;

    std::vector<uint32_t> coeffs(uint32_t v) const;
    uint32_t from_coeffs(const std::vector<uint32_t>& c) const;

    static bool is_prime(uint64_t x);

private:
    Field(uint32_t p, uint32_t m, std::vector<uint32_t> modulus);

    uint32_t p_, m_, q_;
    std::vector<uint32_t> modulus_;
    std::vector<std::vector<uint32_t>> xred_;  // x^(m+k) mod modulus, k in [0, m-1)
};

/// Field element bound to its field; arithmetic checks the binding.
struct Elem {
    uint32_t v = 0;
    const Field* f = nullptr;

    Elem() = default;
    Elem(uint32_t value, const Field& field) : v(field.element(value)), f(&field) {}

    Elem pow(int64_t e) const { return with(f->pow(v, e)); }
    Elem inv() const { return with(f->inv(v)); }

    friend Elem operator+(Elem a, Elem b) { a.match(b); return a.with(a.f->add(a.v, b.v)); }
    friend Elem operator-(Elem a, Elem b) { a.match(b); return a.with(a.f->sub(a.v, b.v)); }
    friend Elem operator*(Elem a, Elem b) { a.match(b); return a.with(a.f->mul(a.v, b.v)); }
    friend Elem operator/(Elem a, Elem b) { a.match(b); return a.with(a.f->div(a.v, b.v)); }
    friend bool operator==(Elem a, Elem b) { a.match(b); return a.v == b.v; }
    friend bool operator!=(Elem a, Elem b) { return !(a == b); }

private:
    Elem with(uint32_t nv) const { Elem e; e.v = nv; e.f = f; return e; }
    void match(const Elem& o) const {
        if (f == nullptr || f != o.f) throw FieldMismatch("elements from different fields");
    }
};

/// Multiplicative subgroup of order `order` dividing q-1, plus one
/// representative per coset for the first `coset_reps.size()` cosets
/// (coset 0 is the subgroup itself, represented by 1).
struct Subgroup {
    FieldPtr field;
    uint32_t generator = 0;
    uint32_t order = 0;
    std::vector<uint32_t> coset_reps;

    bool contains(uint32_t x) const {
        return x != 0 && field->pow(x, order) == 1;
    }
    std::vector<uint32_t> elements() const;  // powers of generator, order entries
};

/// Smallest divisor d of q-1 with d >= min_order and (q-1)/d >= min_cosets.
/// Generator is canonicalized to the smallest element generating the subgroup.
Subgroup find_subgroup(const FieldPtr& field, uint32_t min_order, uint32_t min_cosets);

uint32_t primitive_root(const Field& f);

/// Degree-3 tower GF(q0) inside GF(q0^3) over a prime base field, with the
/// polynomial basis 1, y, y^2.  Embedding of a base constant is the identity
/// on encodings.
struct TowerBasis {
    FieldPtr big, small;
    uint32_t v0, v1, v2;

    uint32_t embed(uint32_t v) const;
    std::vector<uint32_t> coords(uint32_t v) const;  // 3 base-field coordinates
};

TowerBasis subfield_basis(const FieldPtr& big, const FieldPtr& small);

}  // namespace pmda

#endif

#ifndef PMDA_PMDS_HPP
#define PMDA_PMDS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmda/local_code.hpp"

namespace pmda {

struct GeometryError : Error { using Error::Error; };
struct NoField : Error { using Error::Error; };
struct PoolExhausted : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct BadIndex : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

struct Unrecoverable : Error {
    size_t unknowns = 0;
    size_t achieved_rank = 0;
    Unrecoverable(std::string msg, size_t unk, size_t rk)
        : Error(std::move(msg)), unknowns(unk), achieved_rank(rk) {}
};

enum class Family { c2, c3, c4 };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

/// Complete description of one code instance; everything needed to
/// reconstruct the parity-check matrix bit-exactly.
struct CodeSpec {
    Family family = Family::c2;
    uint32_t mu = 0, n = 0, nprime = 0, r = 0, s = 0, ell = 0;
    FieldPtr field;   // GF(q), the arithmetic field of the code
    FieldPtr base;    // equals field for c2/c3; GF(q0) for c4
    Subgroup subgroup;                                // over base
    std::vector<std::vector<uint32_t>> lambda;        // n x r (c2/c4), n x 1 (c3)
    std::vector<uint32_t> theta;                      // mu, elements of field
    std::vector<uint32_t> delta;                      // mu, c4 only, elements of base
    std::optional<uint32_t> d0, d1;                   // c4 only, elements of base
    std::vector<std::pair<uint32_t, uint32_t>> info_set;

    uint32_t nodes() const { return mu * n; }
    uint32_t parity_rows() const { return mu * r + s; }

    void validate() const;  // throws ValidationError

    std::string to_json_text(bool pretty = true) const;
    static CodeSpec from_json_text(const std::string& text);
    void save(const std::string& path) const;
    static CodeSpec load(const std::string& path);

    /// Compact JSON with sorted keys; input to the spec hash.
    std::string canonical_text() const;
    std::array<uint8_t, 32> spec_hash() const;
};

/// One stripe: mu*n node columns of ell symbols plus per-node erasure flags.
struct StripeState {
    FieldPtr field;
    uint32_t mu = 0, n = 0, ell = 0;
    std::vector<std::vector<uint32_t>> columns;
    std::vector<uint8_t> erased;

    uint32_t nodes() const { return mu * n; }
    uint32_t node_id(uint32_t g, uint32_t j) const { return g * n + j; }
    std::vector<uint32_t>& col(uint32_t g, uint32_t j) { return columns[node_id(g, j)]; }
    const std::vector<uint32_t>& col(uint32_t g, uint32_t j) const { return columns[node_id(g, j)]; }
    bool is_erased(uint32_t g, uint32_t j) const { return erased[node_id(g, j)] != 0; }
    void set_erased(uint32_t g, uint32_t j, bool e = true) { erased[node_id(g, j)] = e ? 1 : 0; }

    friend bool operator==(const StripeState& a, const StripeState& b) {
        return a.columns == b.columns && a.erased == b.erased;
    }
};

class CodeInstance;

/// Solves for one fixed erasure pattern; reusable across stripes.
class ErasureSolver {
public:
    ErasureSolver(const CodeInstance& inst, std::vector<uint32_t> erased_nodes);
    StripeState restore(const StripeState& stripe) const;
    const std::vector<uint32_t>& erased_nodes() const { return erased_; }

private:
    std::shared_ptr<const Matrix> hd_;
    FieldPtr field_;
    uint32_t mu_ = 0, n_ = 0, ell_ = 0;
    std::vector<uint32_t> erased_;
    std::vector<uint32_t> known_;
    Matrix x_from_b_;  // unknowns = x_from_b * (-sum of known contributions)
};

class CodeInstance {
public:
    /// Assembles matrices from a spec.  validate=false skips invariant
    /// revalidation (used by negative-control tests).
    static CodeInstance assemble(CodeSpec spec, bool validate = true);

    const CodeSpec& spec() const { return spec_; }
    const LocalMatrices& local() const { return local_; }
    const BlockMatrix& parity_check() const { return H_; }
    const BlockMatrix& local_parity() const { return H_local_; }
    const Matrix& parity_check_dense() const { return *H_dense_; }
    std::shared_ptr<const Matrix> parity_check_dense_ptr() const { return H_dense_; }
    const ErasureSolver& encoder() const;

    StripeState empty_stripe() const;

private:
    CodeSpec spec_;
    LocalMatrices local_;
    BlockMatrix H_;
    BlockMatrix H_local_;
    std::shared_ptr<const Matrix> H_dense_;
    std::shared_ptr<const ErasureSolver> encoder_;

    CodeInstance(CodeSpec spec, LocalMatrices local, BlockMatrix H, BlockMatrix Hl,
                 std::shared_ptr<const Matrix> Hd)
        : spec_(std::move(spec)), local_(std::move(local)), H_(std::move(H)),
          H_local_(std::move(Hl)), H_dense_(std::move(Hd)) {}
};

/// Result of the deterministic parameter/field search, without assembling
/// any matrices; enough for the report command.
struct CodePlan {
    Family family;
    uint32_t mu, n, nprime, r, s;
    uint64_t ell;
    uint64_t phi_value = 0;     // Phi (c2/c4); n for c3
    uint64_t pool_req = 0;      // subgroup order actually required
    uint64_t q = 0;             // field size of the code
    uint64_t q0 = 0;            // base field size (== q for c2/c3)
    uint32_t cosets = 0;        // (q0-1) / pool_req
    bool pool_bound_binding = false;  // c4: pool requirement exceeded Phi+1
};

CodePlan plan_c2(uint32_t mu, uint32_t n, uint32_t nprime, uint32_t r,
                 uint32_t field_cap = 1u << 16);
CodePlan plan_c3(uint32_t mu, uint32_t n, uint32_t field_cap = 1u << 16);
CodePlan plan_c4(uint32_t mu, uint32_t n, uint32_t nprime, uint32_t r,
                 uint32_t field_cap = 1u << 16);

CodeInstance build_c2(uint32_t mu, uint32_t n, uint32_t nprime, uint32_t r,
                      uint32_t field_cap = 1u << 16);
CodeInstance build_c3(uint32_t mu, uint32_t n, uint32_t field_cap = 1u << 16);
CodeInstance build_c4(uint32_t mu, uint32_t n, uint32_t nprime, uint32_t r,
                      uint32_t field_cap = 1u << 16);

/// Systematic encode: info symbols in info_set order, ell per node.
StripeState encode(const CodeInstance& inst, const std::vector<uint32_t>& info);

std::vector<uint32_t> extract_info(const CodeInstance& inst, const StripeState& stripe);

/// Fills every erased column if the pattern has full column rank.
StripeState decode(const CodeInstance& inst, const StripeState& stripe);

/// Residual of every parity-check row; all zero for a valid stripe.
std::vector<uint32_t> parity_residual(const CodeInstance& inst, const StripeState& stripe);

/// Single-node repair inside group g using the n-1 surviving group members.
std::pair<std::vector<uint32_t>, RepairPlan> repair(const CodeInstance& inst,
                                                    const StripeState& stripe,
                                                    uint32_t g, uint32_t j);

uint64_t repair_bandwidth_formula(const CodeSpec& spec, uint32_t j);
uint64_t repair_access_formula(const CodeSpec& spec, uint32_t j);

}  // namespace pmda

#endif

#ifndef PMDA_LOCAL_CODE_HPP
#define PMDA_LOCAL_CODE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pmda/digits.hpp"
#include "pmda/matrix.hpp"

namespace pmda {

struct BadGeometry : Error { using Error::Error; };
struct PoolTooSmall : Error { using Error::Error; };
struct RequirementViolated : Error { using Error::Error; };
struct HelperMissing : Error { using Error::Error; };

/// Minimum number of nonzero field elements for an [n, n-r, r^n'] local code.
uint64_t phi(uint32_t n, uint32_t nprime, uint32_t r);

/// Pool size the cyclic assignment below actually consumes:
/// sum over residue classes of r * ceil(class_size / r).  Always >= phi.
uint64_t lambda_pool_requirement(uint32_t n, uint32_t nprime, uint32_t r);

/// Eigenvalue table lambda_{i,t}, i in [0,n), t in [0,r).
struct LambdaTable {
    uint32_t n = 0, nprime = 0, r = 0;
    FieldPtr field;
    std::vector<std::vector<uint32_t>> values;  // n rows of r entries

    // R1: values of nodes in different residue classes never collide.
    // R2: same class, same t, different nodes differ.
    // R3: each row is pairwise distinct.
    void validate() const;
};

/// Cyclic Latin-rectangle assignment: per residue class a fresh sub-pool of
/// size r*ceil(M/r), node i' + g*n' gets sub-pool rotated by g.
LambdaTable select_lambdas(uint32_t n, uint32_t nprime, uint32_t r,
                           const FieldPtr& field, const std::vector<uint32_t>& pool);

/// Diagonal encoding matrices: A_i has entry lambda_{i, a_(i mod n')} at row a,
/// plus the two pole variants 1/(lambda - d0) and 1/(lambda - d1).
struct LocalMatrices {
    LambdaTable table;
    DigitProfile profile;                          // radix r, count n'
    std::vector<std::vector<uint32_t>> A;          // n diagonals of length ell
    std::vector<std::vector<uint32_t>> A_prime;    // empty unless poles set
    std::vector<std::vector<uint32_t>> A_dprime;
    std::optional<uint32_t> d0, d1;

    uint32_t n() const { return table.n; }
    uint32_t ell() const { return profile.ell; }
};

LocalMatrices build_diagonals(const LambdaTable& table);
void add_pole_variants(LocalMatrices& mats, uint32_t d0, uint32_t d1);

/// Parity-check matrix of the local code: r x n grid, block (j, i) = A_i^j.
BlockMatrix local_parity_check(const LocalMatrices& mats);

/// One helper's share of a repair: row sets read per anchor; summed helpers
/// ship one combined symbol per anchor, the rest ship the rows raw.
struct HelperPlan {
    uint32_t node = 0;
    bool summed = false;
    std::vector<std::vector<uint32_t>> rows_per_anchor;
};

struct RepairPlan {
    uint32_t target = 0;
    std::vector<uint32_t> anchors;
    std::vector<HelperPlan> helpers;
    uint64_t bandwidth = 0;  // symbols transferred
    uint64_t access = 0;     // symbols read
};

/// Digit-group repair: anchors are the rows with digit (i mod n') zero; each
/// anchor yields r summed parity equations solved as an r x r Vandermonde
/// system in the target's companion rows.
RepairPlan plan_local_repair(const LocalMatrices& mats, uint32_t node);

/// Executes a plan against the surviving columns (target column unused).
/// columns[i] must hold node i's ell symbols for every helper in the plan.
std::vector<uint32_t> run_local_repair(const LocalMatrices& mats, const RepairPlan& plan,
                                       const std::vector<std::vector<uint32_t>>& columns);

/// Repair bandwidth of node `node` in symbols, two-branch on node % n'.
uint64_t local_repair_bandwidth(uint32_t n, uint32_t nprime, uint32_t r, uint32_t node);

/// Rebuilding access in symbols: ell * (n - 1).
uint64_t local_repair_access(uint32_t n, uint32_t nprime, uint32_t r);

}  // namespace pmda

#endif

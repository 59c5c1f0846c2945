#include "pmda/local_code.hpp"

#include <algorithm>
#include <set>

namespace pmda {

namespace {

uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

void check_geometry(uint32_t n, uint32_t nprime, uint32_t r) {
    if (r < 2) throw BadGeometry("r must be >= 2");
    if (nprime < 1) throw BadGeometry("n' must be >= 1");
    if (n <= nprime) throw BadGeometry("n must exceed n'");
}

uint32_t class_size(uint32_t n, uint32_t nprime, uint32_t residue) {
    return (n - residue - 1) / nprime + 1;
}

}  // namespace

uint64_t phi(uint32_t n, uint32_t nprime, uint32_t r) {
    check_geometry(n, nprime, r);
    const uint64_t rn = static_cast<uint64_t>(r) * nprime;
    const uint64_t md = n % rn;
    if (md > 0 && md < nprime)
        return rn * (ceil_div(n, rn) - 1) + md * r;
    return rn * ceil_div(n, rn);
}

uint64_t lambda_pool_requirement(uint32_t n, uint32_t nprime, uint32_t r) {
    check_geometry(n, nprime, r);
    uint64_t total = 0;
    for (uint32_t i = 0; i < nprime; ++i)
        total += r * ceil_div(class_size(n, nprime, i), r);
    return total;
}

void LambdaTable::validate() const {
    if (values.size() != n) throw RequirementViolated("lambda table has wrong row count");
    for (const auto& row : values) {
        if (row.size() != r) throw RequirementViolated("lambda row has wrong length");
        for (uint32_t v : row)
            if (v == 0 || v >= field->q())
                throw RequirementViolated("lambda entries must be nonzero field elements");
    }
    // R3
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t u = 0; u < r; ++u)
            for (uint32_t v = u + 1; v < r; ++v)
                if (values[i][u] == values[i][v])
                    throw RequirementViolated("R3 violated at node " + std::to_string(i));
    // R2
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + nprime; j < n; j += nprime)
            for (uint32_t u = 0; u < r; ++u)
                if (values[i][u] == values[j][u])
                    throw RequirementViolated("R2 violated between nodes " +
                                              std::to_string(i) + " and " + std::to_string(j));
    // R1
    std::vector<std::set<uint32_t>> class_values(nprime);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t u = 0; u < r; ++u) class_values[i % nprime].insert(values[i][u]);
    for (uint32_t a = 0; a < nprime; ++a)
        for (uint32_t b = a + 1; b < nprime; ++b)
            for (uint32_t v : class_values[a])
                if (class_values[b].count(v))
                    throw RequirementViolated("R1 violated between classes " +
                                              std::to_string(a) + " and " + std::to_string(b));
}

LambdaTable select_lambdas(uint32_t n, uint32_t nprime, uint32_t r,
                           const FieldPtr& field, const std::vector<uint32_t>& pool) {
    check_geometry(n, nprime, r);
    const uint64_t need = lambda_pool_requirement(n, nprime, r);
    if (pool.size() < need)
        throw PoolTooSmall("pool has " + std::to_string(pool.size()) +
                           " elements, needs " + std::to_string(need));
    {
        std::set<uint32_t> seen;
        for (uint32_t v : pool) {
            if (v == 0 || v >= field->q()) throw Error("pool entries must be nonzero field elements");
            if (!seen.insert(v).second) throw Error("pool entries must be distinct");
        }
    }
    LambdaTable t;
    t.n = n;
    t.nprime = nprime;
    t.r = r;
    t.field = field;
    t.values.assign(n, std::vector<uint32_t>(r, 0));
    size_t cursor = 0;
    for (uint32_t res = 0; res < nprime; ++res) {
        const uint32_t M = class_size(n, nprime, res);
        const uint32_t c = static_cast<uint32_t>(r * ceil_div(M, r));
        const std::vector<uint32_t> sub(pool.begin() + cursor, pool.begin() + cursor + c);
        cursor += c;
        for (uint32_t g = 0; g < M; ++g)
            for (uint32_t u = 0; u < r; ++u)
                t.values[res + g * nprime][u] = sub[(u + g) % c];
    }
    t.validate();
    return t;
}

LocalMatrices build_diagonals(const LambdaTable& table) {
    LocalMatrices m;
    m.table = table;
    m.profile = DigitProfile(table.r, table.nprime);
    const uint32_t ell = m.profile.ell;
    m.A.assign(table.n, std::vector<uint32_t>(ell, 0));
    for (uint32_t i = 0; i < table.n; ++i) {
        const uint32_t ibar = i % table.nprime;
        for (uint32_t a = 0; a < ell; ++a)
            m.A[i][a] = table.values[i][m.profile.digit(a, ibar)];
    }
    return m;
}

void add_pole_variants(LocalMatrices& mats, uint32_t d0, uint32_t d1) {
    const Field& f = *mats.table.field;
    if (d0 == d1) throw PoleCollision("d0 and d1 must differ");
    for (const auto& row : mats.table.values)
        for (uint32_t v : row)
            if (v == d0 || v == d1) throw PoleCollision("pole collides with a lambda value");
    const uint32_t ell = mats.ell();
    mats.A_prime.assign(mats.n(), std::vector<uint32_t>(ell, 0));
    mats.A_dprime.assign(mats.n(), std::vector<uint32_t>(ell, 0));
    for (uint32_t i = 0; i < mats.n(); ++i)
        for (uint32_t a = 0; a < ell; ++a) {
            mats.A_prime[i][a] = f.inv(f.sub(mats.A[i][a], d0));
            mats.A_dprime[i][a] = f.inv(f.sub(mats.A[i][a], d1));
        }
    mats.d0 = d0;
    mats.d1 = d1;
}

BlockMatrix local_parity_check(const LocalMatrices& mats) {
    const Field& f = *mats.table.field;
    const uint32_t n = mats.n(), r = mats.table.r, ell = mats.ell();
    BlockMatrix H(mats.table.field, r, n, ell);
    for (uint32_t i = 0; i < n; ++i) {
        std::vector<uint32_t> power(ell, 1);
        for (uint32_t j = 0; j < r; ++j) {
            H.set_diag(j, i, power);
            if (j + 1 < r)
                for (uint32_t a = 0; a < ell; ++a) power[a] = f.mul(power[a], mats.A[i][a]);
        }
    }
    return H;
}

RepairPlan plan_local_repair(const LocalMatrices& mats, uint32_t node) {
    const uint32_t n = mats.n(), r = mats.table.r;
    if (node >= n) throw Error("node index out of range");
    const uint32_t ibar = node % mats.table.nprime;
    RepairPlan plan;
    plan.target = node;
    plan.anchors = mats.profile.v_indices(ibar, 0);
    for (uint32_t h = 0; h < n; ++h) {
        if (h == node) continue;
        HelperPlan hp;
        hp.node = h;
        hp.summed = (h % mats.table.nprime) != ibar;
        hp.rows_per_anchor.reserve(plan.anchors.size());
        for (uint32_t a : plan.anchors) {
            std::vector<uint32_t> rows(r);
            for (uint32_t t = 0; t < r; ++t) rows[t] = mats.profile.replace(a, ibar, t);
            plan.access += r;
            plan.bandwidth += hp.summed ? 1 : r;
            hp.rows_per_anchor.push_back(std::move(rows));
        }
        plan.helpers.push_back(std::move(hp));
    }
    return plan;
}

std::vector<uint32_t> run_local_repair(const LocalMatrices& mats, const RepairPlan& plan,
                                       const std::vector<std::vector<uint32_t>>& columns) {
    const Field& f = *mats.table.field;
    const uint32_t r = mats.table.r, ell = mats.ell();
    const uint32_t ibar = plan.target % mats.table.nprime;
    std::vector<uint32_t> out(ell, 0);
    for (size_t ai = 0; ai < plan.anchors.size(); ++ai) {
        const uint32_t a = plan.anchors[ai];
        std::vector<uint32_t> rhs(r, 0);
        for (const HelperPlan& hp : plan.helpers) {
            const auto& col = columns.at(hp.node);
            const auto& rows = hp.rows_per_anchor[ai];
            if (hp.summed) {
                // one eigenvalue for the whole companion set
                uint32_t sum = 0;
                for (uint32_t b : rows) sum = f.add(sum, col.at(b));
                uint32_t lam_pow = 1;
                const uint32_t lam = mats.A[hp.node][a];
                for (uint32_t j = 0; j < r; ++j) {
                    rhs[j] = f.add(rhs[j], f.mul(lam_pow, sum));
                    lam_pow = f.mul(lam_pow, lam);
                }
            } else {
                for (uint32_t b : rows) {
                    const uint32_t lam = mats.A[hp.node][b];
                    uint32_t lam_pow = 1;
                    for (uint32_t j = 0; j < r; ++j) {
                        rhs[j] = f.add(rhs[j], f.mul(lam_pow, col.at(b)));
                        lam_pow = f.mul(lam_pow, lam);
                    }
                }
            }
        }
        // sum_t lambda_{target,t}^j x_t = -rhs_j, Vandermonde in the row values
        Matrix V(mats.table.field, r, r);
        for (uint32_t t = 0; t < r; ++t) {
            uint32_t lam_pow = 1;
            const uint32_t lam = mats.table.values[plan.target][t];
            for (uint32_t j = 0; j < r; ++j) {
                V.at(j, t) = lam_pow;
                lam_pow = f.mul(lam_pow, lam);
            }
        }
        std::vector<uint32_t> neg_rhs(r);
        for (uint32_t j = 0; j < r; ++j) neg_rhs[j] = f.neg(rhs[j]);
        const std::vector<uint32_t> x = solve(V, neg_rhs, /*require_unique=*/true);
        for (uint32_t t = 0; t < r; ++t)
            out[mats.profile.replace(a, ibar, t)] = x[t];
    }
    return out;
}

uint64_t local_repair_bandwidth(uint32_t n, uint32_t nprime, uint32_t r, uint32_t node) {
    check_geometry(n, nprime, r);
    if (node >= n) throw Error("node index out of range");
    uint64_t ell = 1;
    for (uint32_t i = 0; i < nprime; ++i) ell *= r;
    const uint32_t same = class_size(n, nprime, node % nprime) - 1;
    return (n - 1 - same) * (ell / r) + static_cast<uint64_t>(same) * ell;
}

uint64_t local_repair_access(uint32_t n, uint32_t nprime, uint32_t r) {
    check_geometry(n, nprime, r);
    uint64_t ell = 1;
    for (uint32_t i = 0; i < nprime; ++i) ell *= r;
    return ell * (n - 1);
}

}  // namespace pmda

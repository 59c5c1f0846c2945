#include "pmda/pmds.hpp"

#include <algorithm>
#include <set>

namespace pmda {

namespace {

uint64_t pow_u64(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    for (uint32_t i = 0; i < e; ++i) r *= b;
    return r;
}

void check_common_geometry(uint32_t mu, uint32_t n, uint32_t r, uint32_t s) {
    if (mu < 2) throw GeometryError("mu must be >= 2");
    if (r < 2) throw GeometryError("r must be >= 2");
    if (n <= r) throw GeometryError("n must exceed r");
    if (s > mu * (n - r)) throw GeometryError("s exceeds mu*(n-r)");
}

// Smallest prime q > q_floor whose multiplicative group has a subgroup of
// order exactly `order` with at least `cosets` cosets.
uint64_t search_prime_q(uint64_t q_floor, uint64_t order, uint32_t cosets, uint32_t cap) {
    for (uint64_t q = q_floor + 1; q <= cap; ++q) {
        if (!Field::is_prime(q)) continue;
        if ((q - 1) % order != 0) continue;
        if ((q - 1) / order < cosets) continue;
        return q;
    }
    throw NoField("no prime q in (" + std::to_string(q_floor) + ", " + std::to_string(cap) +
                  "] with a subgroup of order " + std::to_string(order) + " and " +
                  std::to_string(cosets) + " cosets");
}

// Parity positions: the last r nodes of every group, plus the s extras
// assigned round-robin to the next-lowest unused index below n-r.
std::vector<std::pair<uint32_t, uint32_t>> systematic_info_set(uint32_t mu, uint32_t n,
                                                               uint32_t r, uint32_t s) {
    std::set<std::pair<uint32_t, uint32_t>> parity;
    for (uint32_t g = 0; g < mu; ++g)
        for (uint32_t j = n - r; j < n; ++j) parity.insert({g, j});
    for (uint32_t k = 0; k < s; ++k) {
        const uint32_t g = k % mu;
        bool placed = false;
        for (uint32_t j = n - r; j-- > 0;) {
            if (!parity.count({g, j})) {
                parity.insert({g, j});
                placed = true;
                break;
            }
        }
        if (!placed) throw GeometryError("cannot place global parity node");
    }
    std::vector<std::pair<uint32_t, uint32_t>> info;
    for (uint32_t g = 0; g < mu; ++g)
        for (uint32_t j = 0; j < n; ++j)
            if (!parity.count({g, j})) info.push_back({g, j});
    return info;
}

void validate_subgroup(const Subgroup& G, const FieldPtr& base) {
    if (!G.field || G.field->q() != base->q())
        throw ValidationError("subgroup field mismatch");
    const Field& f = *base;
    if (G.generator == 0 || G.order == 0 || (f.q() - 1) % G.order != 0)
        throw ValidationError("subgroup order must divide q-1");
    if (f.pow(G.generator, G.order) != 1)
        throw ValidationError("subgroup generator has wrong order");
    for (uint32_t k = 1; k < G.order; ++k)
        if (f.pow(G.generator, k) == 1)
            throw ValidationError("subgroup generator has wrong order");
    for (size_t i = 0; i < G.coset_reps.size(); ++i)
        for (size_t j = i + 1; j < G.coset_reps.size(); ++j)
            if (G.contains(f.div(G.coset_reps[i], G.coset_reps[j])))
                throw ValidationError("coset representatives are not in distinct cosets");
    if (!G.coset_reps.empty() && G.coset_reps[0] != 1)
        throw ValidationError("coset 0 must be represented by the identity");
}

void validate_coset_distinct(const Subgroup& G, const std::vector<uint32_t>& vals,
                             const char* what) {
    const Field& f = *G.field;
    for (uint32_t v : vals)
        if (v == 0) throw ValidationError(std::string(what) + " must be nonzero");
    for (size_t i = 0; i < vals.size(); ++i)
        for (size_t j = i + 1; j < vals.size(); ++j)
            if (G.contains(f.div(vals[i], vals[j])))
                throw ValidationError(std::string(what) + " values share a coset");
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::c2: return "c2";
        case Family::c3: return "c3";
        case Family::c4: return "c4";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    if (s == "c2") return Family::c2;
    if (s == "c3") return Family::c3;
    if (s == "c4") return Family::c4;
    throw Error("unknown family: " + s);
}

void CodeSpec::validate() const {
    if (!field || !base) throw ValidationError("missing field");
    if (mu < 2) throw ValidationError("mu must be >= 2");
    if (r < 2) throw ValidationError("r must be >= 2");
    if (n <= r) throw ValidationError("n must exceed r");
    if (s > mu * (n - r)) throw ValidationError("s exceeds mu*(n-r)");
    if (theta.size() != mu) throw ValidationError("theta must have mu entries");
    const uint32_t k_nodes = mu * (n - r) - s;
    if (info_set.size() != k_nodes) throw ValidationError("info_set has wrong size");
    {
        std::set<std::pair<uint32_t, uint32_t>> seen;
        for (auto [g, j] : info_set) {
            if (g >= mu || j >= n) throw ValidationError("info_set entry out of range");
            if (!seen.insert({g, j}).second) throw ValidationError("info_set entry repeated");
        }
    }
    validate_subgroup(subgroup, base);

    switch (family) {
        case Family::c2: {
            if (s != 2) throw ValidationError("c2 has s = 2");
            if (nprime < 1 || n <= nprime) throw ValidationError("need n > n' >= 1");
            if (ell != pow_u64(r, nprime)) throw ValidationError("ell must equal r^n'");
            if (base != field && base->q() != field->q())
                throw ValidationError("c2 subgroup lives in the code field");
            LambdaTable t{n, nprime, r, field, lambda};
            try {
                t.validate();
            } catch (const RequirementViolated& e) {
                throw ValidationError(e.what());
            }
            for (const auto& row : lambda)
                for (uint32_t v : row)
                    if (!subgroup.contains(v))
                        throw ValidationError("lambda values must lie in the subgroup");
            validate_coset_distinct(subgroup, theta, "theta");
            break;
        }
        case Family::c3: {
            if (s != 2 || r != 2 || ell != 2) throw ValidationError("c3 has r = s = ell = 2");
            if (lambda.size() != n) throw ValidationError("c3 needs n lambda values");
            if (subgroup.order < n) throw ValidationError("c3 subgroup must have order >= n");
            std::set<uint32_t> seen;
            for (const auto& row : lambda) {
                if (row.size() != 1) throw ValidationError("c3 lambda rows hold one value");
                if (row[0] == 0) throw ValidationError("lambda values must be nonzero");
                if (!subgroup.contains(row[0]))
                    throw ValidationError("lambda values must lie in the subgroup");
                if (!seen.insert(row[0]).second)
                    throw ValidationError("c3 lambda values must be pairwise distinct");
            }
            validate_coset_distinct(subgroup, theta, "theta");
            break;
        }
        case Family::c4: {
            if (s != 3) throw ValidationError("c4 has s = 3");
            if (nprime < 1 || n <= nprime) throw ValidationError("need n > n' >= 1");
            if (ell != pow_u64(r, nprime)) throw ValidationError("ell must equal r^n'");
            if (field->m() != 3 || base->m() != 1 || field->p() != base->q())
                throw ValidationError("c4 needs GF(q0^3) over prime GF(q0)");
            if (!d0 || !d1) throw ValidationError("c4 needs poles d0 and d1");
            if (*d0 == *d1) throw ValidationError("d0 and d1 must differ");
            if (*d0 >= base->q() || *d1 >= base->q())
                throw ValidationError("poles must lie in the base field");
            LambdaTable t{n, nprime, r, field, lambda};
            try {
                t.validate();
            } catch (const RequirementViolated& e) {
                throw ValidationError(e.what());
            }
            for (const auto& row : lambda)
                for (uint32_t v : row) {
                    if (v >= base->q())
                        throw ValidationError("lambda values must lie in the base field");
                    if (v == *d0) throw ValidationError("lambda collides with d0");
                    if (!subgroup.contains(base->inv(base->sub(v, *d1))))
                        throw ValidationError("1/(lambda - d1) must lie in the subgroup");
                }
            if (delta.size() != mu) throw ValidationError("delta must have mu entries");
            for (uint32_t v : delta)
                if (v >= base->q()) throw ValidationError("delta must lie in the base field");
            validate_coset_distinct(subgroup, delta, "delta");
            // 3-wise independence of theta over the base field
            for (uint32_t v : theta)
                if (v == 0) throw ValidationError("theta must be nonzero");
            auto coord_rank = [&](const std::vector<uint32_t>& idx) {
                Matrix m(base, idx.size(), 3);
                for (size_t i = 0; i < idx.size(); ++i) {
                    const auto c = field->coeffs(theta[idx[i]]);
                    for (size_t j = 0; j < 3; ++j) m.at(i, j) = c[j];
                }
                return rank(m);
            };
            for (uint32_t i = 0; i < mu; ++i)
                for (uint32_t j = i + 1; j < mu; ++j) {
                    if (coord_rank({i, j}) != 2)
                        throw ValidationError("theta pair is linearly dependent over GF(q0)");
                    for (uint32_t k = j + 1; k < mu; ++k)
                        if (coord_rank({i, j, k}) != 3)
                            throw ValidationError("theta triple is linearly dependent over GF(q0)");
                }
            break;
        }
    }
}

CodePlan plan_c2(uint32_t mu, uint32_t n, uint32_t nprime, uint32_t r, uint32_t cap) {
    check_common_geometry(mu, n, r, 2);
    CodePlan p{Family::c2, mu, n, nprime, r, 2, pow_u64(r, nprime)};
    p.phi_value = phi(n, nprime, r);
    p.pool_req = lambda_pool_requirement(n, nprime, r);
    p.q = search_prime_q(mu * p.phi_value, p.pool_req, mu, cap);
    p.q0 = p.q;
    p.cosets = static_cast<uint32_t>((p.q - 1) / p.pool_req);
    return p;
}

CodePlan plan_c3(uint32_t mu, uint32_t n, uint32_t cap) {
    if (mu < 2) throw GeometryError("mu must be >= 2");
    if (n < 4) throw GeometryError("c3 needs n >= 4");
    CodePlan p{Family::c3, mu, n, 0, 2, 2, 2};
    p.phi_value = n;
    p.pool_req = n;
    p.q = search_prime_q(static_cast<uint64_t>(mu) * n, n, mu, cap);
    p.q0 = p.q;
    p.cosets = static_cast<uint32_t>((p.q - 1) / n);
    return p;
}

CodePlan plan_c4(uint32_t mu, uint32_t n, uint32_t nprime, uint32_t r, uint32_t cap) {
    check_common_geometry(mu, n, r, 3);
    CodePlan p{Family::c4, mu, n, nprime, r, 3, pow_u64(r, nprime)};
    p.phi_value = phi(n, nprime, r);
    const uint64_t pool = lambda_pool_requirement(n, nprime, r);
    p.pool_req = std::max(p.phi_value + 1, pool + 1);
    p.pool_bound_binding = pool + 1 > p.phi_value + 1;
    p.q0 = search_prime_q(mu * (p.phi_value + 1), p.pool_req, mu, cap);
    p.q = p.q0 * p.q0 * p.q0;
    if (p.q > (1u << 20)) throw NoField("q0^3 exceeds the supported field range");
    p.cosets = static_cast<uint32_t>((p.q0 - 1) / p.pool_req);
    return p;
}

CodeInstance build_c2(uint32_t mu, uint32_t n, uint32_t nprime, uint32_t r, uint32_t cap) {
    const CodePlan p = plan_c2(mu, n, nprime, r, cap);
    CodeSpec spec;
    spec.family = Family::c2;
    spec.mu = mu; spec.n = n; spec.nprime = nprime; spec.r = r; spec.s = 2;
    spec.ell = static_cast<uint32_t>(p.ell);
    spec.field = Field::make(static_cast<uint32_t>(p.q), 1);
    spec.base = spec.field;
    spec.subgroup = find_subgroup(spec.field, static_cast<uint32_t>(p.pool_req), mu);
    std::vector<uint32_t> pool = spec.subgroup.elements();
    pool.resize(p.pool_req);
    spec.lambda = select_lambdas(n, nprime, r, spec.field, pool).values;
    spec.theta = spec.subgroup.coset_reps;
    spec.info_set = systematic_info_set(mu, n, r, 2);
    return CodeInstance::assemble(std::move(spec));
}

CodeInstance build_c3(uint32_t mu, uint32_t n, uint32_t cap) {
    const CodePlan p = plan_c3(mu, n, cap);
    CodeSpec spec;
    spec.family = Family::c3;
    spec.mu = mu; spec.n = n; spec.nprime = 0; spec.r = 2; spec.s = 2; spec.ell = 2;
    spec.field = Field::make(static_cast<uint32_t>(p.q), 1);
    spec.base = spec.field;
    spec.subgroup = find_subgroup(spec.field, n, mu);
    const auto elems = spec.subgroup.elements();
    spec.lambda.reserve(n);
    for (uint32_t i = 0; i < n; ++i) spec.lambda.push_back({elems[i]});
    spec.theta = spec.subgroup.coset_reps;
    spec.info_set = systematic_info_set(mu, n, 2, 2);
    return CodeInstance::assemble(std::move(spec));
}

CodeInstance build_c4(uint32_t mu, uint32_t n, uint32_t nprime, uint32_t r, uint32_t cap) {
    const CodePlan p = plan_c4(mu, n, nprime, r, cap);
    CodeSpec spec;
    spec.family = Family::c4;
    spec.mu = mu; spec.n = n; spec.nprime = nprime; spec.r = r; spec.s = 3;
    spec.ell = static_cast<uint32_t>(p.ell);
    spec.base = Field::make(static_cast<uint32_t>(p.q0), 1);
    spec.field = Field::make(static_cast<uint32_t>(p.q0), 3);
    spec.subgroup = find_subgroup(spec.base, static_cast<uint32_t>(p.pool_req), mu);
    const Field& bf = *spec.base;

    // d1 = 0 keeps the shifted pool inside the subgroup, hence nonzero.
    const uint32_t d1 = 0;
    std::vector<uint32_t> pool;
    for (uint32_t h : spec.subgroup.elements()) pool.push_back(bf.add(d1, h));
    uint32_t d0 = 0;
    {
        std::set<uint32_t> taken(pool.begin(), pool.end());
        taken.insert(d1);
        while (taken.count(d0)) ++d0;
        if (d0 >= bf.q()) throw PoolExhausted("no pole candidate left in GF(q0)");
    }
    pool.erase(std::remove(pool.begin(), pool.end(), d0), pool.end());
    if (pool.size() < lambda_pool_requirement(n, nprime, r))
        throw PoolExhausted("lambda pool too small after removing d0");
    spec.d0 = d0;
    spec.d1 = d1;
    spec.lambda = select_lambdas(n, nprime, r, spec.field, pool).values;

    const TowerBasis tower = subfield_basis(spec.field, spec.base);
    const Field& F = *spec.field;
    spec.theta.reserve(mu);
    for (uint32_t i = 0; i < mu; ++i) {
        const uint32_t xi = tower.embed(i);
        uint32_t t = tower.v0;
        t = F.add(t, F.mul(xi, tower.v1));
        t = F.add(t, F.mul(F.mul(xi, xi), tower.v2));
        spec.theta.push_back(t);
    }
    spec.delta = spec.subgroup.coset_reps;
    spec.info_set = systematic_info_set(mu, n, r, 3);
    return CodeInstance::assemble(std::move(spec));
}

CodeInstance CodeInstance::assemble(CodeSpec spec, bool validate) {
    if (validate) spec.validate();
    const FieldPtr& F = spec.field;
    const Field& f = *F;
    const uint32_t mu = spec.mu, n = spec.n, r = spec.r, s = spec.s, ell = spec.ell;

    LocalMatrices local;
    BlockMatrix H_local(F, r, n, ell);
    if (spec.family == Family::c3) {
        for (uint32_t i = 0; i < n; ++i) {
            const uint32_t lam = spec.lambda[i][0];
            H_local.set_diag(0, i, std::vector<uint32_t>(ell, 1));
            if (i % 2 == 0) {
                Matrix A(F, 2, 2);
                A.at(0, 0) = lam; A.at(0, 1) = 1; A.at(1, 1) = lam;
                H_local.set_dense(1, i, std::move(A));
            } else {
                H_local.set_diag(1, i, {lam, lam});
            }
        }
    } else {
        LambdaTable table{n, spec.nprime, r, F, spec.lambda};
        local = build_diagonals(table);
        if (spec.family == Family::c4) add_pole_variants(local, *spec.d0, *spec.d1);
        H_local = local_parity_check(local);
    }

    BlockMatrix H(F, mu * r + s, static_cast<size_t>(mu) * n, ell);
    for (uint32_t g = 0; g < mu; ++g)
        for (uint32_t j = 0; j < r; ++j)
            for (uint32_t i = 0; i < n; ++i) {
                const auto& b = H_local.block(j, i);
                if (b.kind == BlockMatrix::Kind::diag)
                    H.set_diag(g * r + j, g * n + i, b.diag);
                else if (b.kind == BlockMatrix::Kind::dense)
                    H.set_dense(g * r + j, g * n + i, *b.dense);
            }
    for (uint32_t g = 0; g < mu; ++g)
        for (uint32_t i = 0; i < n; ++i) {
            const size_t col = g * n + i;
            switch (spec.family) {
                case Family::c2: {
                    std::vector<uint32_t> ar(ell), th(ell);
                    for (uint32_t a = 0; a < ell; ++a) {
                        ar[a] = f.pow(local.A[i][a], r);
                        th[a] = f.mul(spec.theta[g], f.inv(local.A[i][a]));
                    }
                    H.set_diag(mu * r, col, std::move(ar));
                    H.set_diag(mu * r + 1, col, std::move(th));
                    break;
                }
                case Family::c3: {
                    const uint32_t lam = spec.lambda[i][0];
                    const uint32_t l2 = f.mul(lam, lam);
                    const uint32_t tl = f.mul(spec.theta[g], f.inv(lam));
                    H.set_diag(mu * r, col, {l2, l2});
                    H.set_diag(mu * r + 1, col, {tl, tl});
                    break;
                }
                case Family::c4: {
                    std::vector<uint32_t> ar(ell), th(ell), dl(ell);
                    for (uint32_t a = 0; a < ell; ++a) {
                        ar[a] = f.pow(local.A[i][a], r);
                        th[a] = f.mul(spec.theta[g], local.A_prime[i][a]);
                        dl[a] = f.mul(spec.delta[g], local.A_dprime[i][a]);
                    }
                    H.set_diag(mu * r, col, std::move(ar));
                    H.set_diag(mu * r + 1, col, std::move(th));
                    H.set_diag(mu * r + 2, col, std::move(dl));
                    break;
                }
            }
        }

    auto hd = std::make_shared<const Matrix>(H.expand());
    if (validate && rank(*hd) != hd->rows())
        throw ValidationError("parity-check rows are linearly dependent");

    CodeInstance inst(std::move(spec), std::move(local), std::move(H), std::move(H_local),
                      std::move(hd));
    std::vector<uint32_t> parity_nodes;
    {
        std::set<uint32_t> info;
        for (auto [g, j] : inst.spec_.info_set) info.insert(g * n + j);
        for (uint32_t c = 0; c < inst.spec_.nodes(); ++c)
            if (!info.count(c)) parity_nodes.push_back(c);
    }
    try {
        inst.encoder_ = std::make_shared<const ErasureSolver>(inst, parity_nodes);
    } catch (const Unrecoverable& e) {
        if (validate)
            throw ValidationError(std::string("parity positions are not decodable: ") + e.what());
    }
    return inst;
}

const ErasureSolver& CodeInstance::encoder() const {
    if (!encoder_) throw ValidationError("systematic encoder unavailable for this spec");
    return *encoder_;
}

StripeState CodeInstance::empty_stripe() const {
    StripeState st;
    st.field = spec_.field;
    st.mu = spec_.mu;
    st.n = spec_.n;
    st.ell = spec_.ell;
    st.columns.assign(spec_.nodes(), std::vector<uint32_t>(spec_.ell, 0));
    st.erased.assign(spec_.nodes(), 0);
    return st;
}

ErasureSolver::ErasureSolver(const CodeInstance& inst, std::vector<uint32_t> erased_nodes)
    : hd_(inst.parity_check_dense_ptr()), field_(inst.spec().field),
      mu_(inst.spec().mu), n_(inst.spec().n), ell_(inst.spec().ell),
      erased_(std::move(erased_nodes)),
      x_from_b_(field_, 0, 0) {
    std::sort(erased_.begin(), erased_.end());
    const Matrix& Hd = *hd_;
    const size_t R = Hd.rows();
    const size_t K = erased_.size() * ell_;
    const Field& f = *field_;
    for (uint32_t c = 0; c < mu_ * n_; ++c)
        if (!std::binary_search(erased_.begin(), erased_.end(), c)) known_.push_back(c);

    // Gauss-Jordan on [M | I] where M holds the erased thick columns; the
    // right half's top K rows then map b to the unknowns.
    Matrix aug(field_, R, K + R);
    for (size_t j = 0; j < erased_.size(); ++j)
        for (size_t u = 0; u < ell_; ++u)
            for (size_t i = 0; i < R; ++i)
                aug.at(i, j * ell_ + u) = Hd.at(i, erased_[j] * ell_ + u);
    for (size_t i = 0; i < R; ++i) aug.at(i, K + i) = 1;

    size_t row = 0;
    for (size_t c = 0; c < K && row < R; ++c) {
        size_t pivot = row;
        while (pivot < R && aug.at(pivot, c) == 0) ++pivot;
        if (pivot == R) continue;
        if (pivot != row)
            for (size_t j = 0; j < K + R; ++j) std::swap(aug.at(pivot, j), aug.at(row, j));
        const uint32_t pinv = f.inv(aug.at(row, c));
        for (size_t j = 0; j < K + R; ++j) aug.at(row, j) = f.mul(aug.at(row, j), pinv);
        for (size_t i = 0; i < R; ++i) {
            if (i == row) continue;
            const uint32_t factor = aug.at(i, c);
            if (factor == 0) continue;
            for (size_t j = c; j < K + R; ++j)
                aug.at(i, j) = f.sub(aug.at(i, j), f.mul(factor, aug.at(row, j)));
        }
        ++row;
    }
    if (row < K)
        throw Unrecoverable("erasure pattern is not correctable: rank " + std::to_string(row) +
                            " of " + std::to_string(K) + " unknowns",
                            K, row);
    Matrix X(field_, K, R);
    for (size_t i = 0; i < K; ++i)
        for (size_t j = 0; j < R; ++j) X.at(i, j) = aug.at(i, K + j);
    x_from_b_ = std::move(X);
}

StripeState ErasureSolver::restore(const StripeState& stripe) const {
    const Matrix& Hd = *hd_;
    const Field& f = *field_;
    const size_t R = Hd.rows();
    std::vector<uint32_t> b(R, 0);
    for (uint32_t c : known_) {
        if (stripe.erased[c])
            throw Error("stripe is missing a column the solver treats as known");
        const auto& col = stripe.columns[c];
        for (size_t u = 0; u < ell_; ++u) {
            const uint32_t v = col[u];
            if (v == 0) continue;
            const size_t cc = static_cast<size_t>(c) * ell_ + u;
            for (size_t i = 0; i < R; ++i) {
                const uint32_t h = Hd.at(i, cc);
                if (h != 0) b[i] = f.add(b[i], f.mul(h, v));
            }
        }
    }
    for (auto& v : b) v = f.neg(v);
    const std::vector<uint32_t> x = x_from_b_.apply(b);
    StripeState out = stripe;
    for (size_t j = 0; j < erased_.size(); ++j) {
        auto& col = out.columns[erased_[j]];
        for (size_t u = 0; u < ell_; ++u) col[u] = x[j * ell_ + u];
        out.erased[erased_[j]] = 0;
    }
    return out;
}

StripeState encode(const CodeInstance& inst, const std::vector<uint32_t>& info) {
    const CodeSpec& sp = inst.spec();
    const size_t k = sp.info_set.size() * sp.ell;
    if (info.size() != k)
        throw LengthMismatch("expected " + std::to_string(k) + " info symbols, got " +
                             std::to_string(info.size()));
    StripeState st = inst.empty_stripe();
    for (auto& v : info)
        if (v >= sp.field->q()) throw OutOfRange("info symbol out of field range");
    size_t pos = 0;
    for (auto [g, j] : sp.info_set) {
        auto& col = st.col(g, j);
        for (uint32_t u = 0; u < sp.ell; ++u) col[u] = info[pos++];
    }
    for (const uint32_t c : inst.encoder().erased_nodes()) st.erased[c] = 1;
    return inst.encoder().restore(st);
}

std::vector<uint32_t> extract_info(const CodeInstance& inst, const StripeState& stripe) {
    const CodeSpec& sp = inst.spec();
    std::vector<uint32_t> info;
    info.reserve(sp.info_set.size() * sp.ell);
    for (auto [g, j] : sp.info_set) {
        const auto& col = stripe.col(g, j);
        info.insert(info.end(), col.begin(), col.end());
    }
    return info;
}

StripeState decode(const CodeInstance& inst, const StripeState& stripe) {
    std::vector<uint32_t> erased;
    for (uint32_t c = 0; c < inst.spec().nodes(); ++c)
        if (stripe.erased[c]) erased.push_back(c);
    if (erased.empty()) return stripe;
    return ErasureSolver(inst, erased).restore(stripe);
}

std::vector<uint32_t> parity_residual(const CodeInstance& inst, const StripeState& stripe) {
    const CodeSpec& sp = inst.spec();
    std::vector<uint32_t> x(static_cast<size_t>(sp.nodes()) * sp.ell);
    for (uint32_t c = 0; c < sp.nodes(); ++c)
        for (uint32_t u = 0; u < sp.ell; ++u) x[static_cast<size_t>(c) * sp.ell + u] = stripe.columns[c][u];
    return inst.parity_check_dense().apply(x);
}

namespace {

// Triangular-family repair: project the two parity equations so that every
// helper whose block drops to rank 1 under the projection ships a single
// symbol.
std::pair<std::vector<uint32_t>, RepairPlan> repair_c3(const CodeInstance& inst,
                                                       const StripeState& stripe,
                                                       uint32_t g, uint32_t j) {
    const CodeSpec& sp = inst.spec();
    const Field& f = *sp.field;
    const uint32_t n = sp.n;
    const bool even_target = (j % 2 == 0);
    RepairPlan plan;
    plan.target = j;
    plan.anchors = {0};
    uint32_t acc0 = 0, acc1 = 0;
    for (uint32_t h = 0; h < n; ++h) {
        if (h == j) continue;
        const auto& col = stripe.col(g, h);
        const uint32_t lam = sp.lambda[h][0];
        const bool two = (h % 2 == 0) == even_target;
        HelperPlan hp;
        hp.node = g * n + h;
        hp.summed = false;
        hp.rows_per_anchor = {two ? std::vector<uint32_t>{0, 1} : std::vector<uint32_t>{0}};
        plan.bandwidth += two ? 2 : 1;
        plan.access += two ? 2 : 1;
        plan.helpers.push_back(std::move(hp));
        acc0 = f.add(acc0, col[0]);
        if (even_target) {
            // rows e0 and e0*A_h: lambda*f(0) plus f(1) when h is even
            uint32_t t = f.mul(lam, col[0]);
            if (h % 2 == 0) t = f.add(t, col[1]);
            acc1 = f.add(acc1, t);
        } else {
            // rows of S*eq1 - S'*eq2: -lambda*f(0) plus f(1) when h is odd
            uint32_t t = f.neg(f.mul(lam, col[0]));
            if (h % 2 == 1) t = f.add(t, col[1]);
            acc1 = f.add(acc1, t);
        }
    }
    const uint32_t lam_t = sp.lambda[j][0];
    std::vector<uint32_t> out(2, 0);
    out[0] = f.neg(acc0);
    if (even_target)
        out[1] = f.sub(f.neg(acc1), f.mul(lam_t, out[0]));
    else
        out[1] = f.add(f.neg(acc1), f.mul(lam_t, out[0]));
    return {out, plan};
}

}  // namespace

std::pair<std::vector<uint32_t>, RepairPlan> repair(const CodeInstance& inst,
                                                    const StripeState& stripe,
                                                    uint32_t g, uint32_t j) {
    const CodeSpec& sp = inst.spec();
    if (g >= sp.mu || j >= sp.n) throw BadIndex("node (g, j) out of range");
    for (uint32_t h = 0; h < sp.n; ++h)
        if (h != j && stripe.is_erased(g, h))
            throw HelperMissing("helper node " + std::to_string(h) + " in group " +
                                std::to_string(g) + " is erased");
    if (sp.family == Family::c3) return repair_c3(inst, stripe, g, j);
    RepairPlan plan = plan_local_repair(inst.local(), j);
    std::vector<std::vector<uint32_t>> columns;
    columns.reserve(sp.n);
    for (uint32_t h = 0; h < sp.n; ++h) columns.push_back(stripe.col(g, h));
    std::vector<uint32_t> content = run_local_repair(inst.local(), plan, columns);
    // report helper ids as global node ids
    for (auto& hp : plan.helpers) hp.node += g * sp.n;
    return {std::move(content), std::move(plan)};
}

uint64_t repair_bandwidth_formula(const CodeSpec& spec, uint32_t j) {
    if (j >= spec.n) throw BadIndex("node index out of range");
    if (spec.family == Family::c3) {
        const uint32_t n = spec.n;
        if (n % 2 == 0) return 3ull * n / 2 - 2;
        return (j % 2 == 0) ? (3ull * n - 3) / 2 : (3ull * n - 5) / 2;
    }
    return local_repair_bandwidth(spec.n, spec.nprime, spec.r, j);
}

uint64_t repair_access_formula(const CodeSpec& spec, uint32_t j) {
    if (j >= spec.n) throw BadIndex("node index out of range");
    if (spec.family == Family::c3) return repair_bandwidth_formula(spec, j);
    return local_repair_access(spec.n, spec.nprime, spec.r);
}

}  // namespace pmda

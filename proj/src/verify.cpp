#include "pmda/verify.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace pmda {

namespace {

uint64_t comb(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    uint64_t c = 1;
    for (uint64_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
}

// Lexicographic k-combination of [0, n) with the given rank.
std::vector<uint32_t> unrank_comb(uint64_t rank, uint32_t n, uint32_t k) {
    std::vector<uint32_t> out;
    out.reserve(k);
    uint32_t x = 0;
    for (uint32_t i = 0; i < k; ++i) {
        while (true) {
            const uint64_t c = comb(n - x - 1, k - i - 1);
            if (rank < c) break;
            rank -= c;
            ++x;
        }
        out.push_back(x++);
    }
    return out;
}

struct PatternSpace {
    uint32_t mu, n, r, s;
    uint64_t per_group;   // C(n, r)
    uint64_t extras;      // C(mu*(n-r), s)
    uint64_t total;

    PatternSpace(uint32_t mu_, uint32_t n_, uint32_t r_, uint32_t s_)
        : mu(mu_), n(n_), r(r_), s(s_) {
        per_group = comb(n, r);
        extras = comb(static_cast<uint64_t>(mu) * (n - r), s);
        total = extras;
        for (uint32_t g = 0; g < mu; ++g) total *= per_group;
    }

    // Decodes a pattern index into erased node ids plus its description.
    FailureRecord pattern(uint64_t idx, std::vector<uint32_t>& erased_nodes) const {
        FailureRecord rec;
        const uint64_t extra_rank = idx % extras;
        idx /= extras;
        std::vector<uint64_t> group_rank(mu);
        for (uint32_t g = mu; g-- > 0;) {
            group_rank[g] = idx % per_group;
            idx /= per_group;
        }
        erased_nodes.clear();
        std::vector<uint32_t> survivors;
        for (uint32_t g = 0; g < mu; ++g) {
            auto sel = unrank_comb(group_rank[g], n, r);
            for (uint32_t j : sel) erased_nodes.push_back(g * n + j);
            rec.per_group.push_back(std::move(sel));
            uint32_t k = 0;
            for (uint32_t j = 0; j < n; ++j)
                if (k < rec.per_group[g].size() && rec.per_group[g][k] == j)
                    ++k;
                else
                    survivors.push_back(g * n + j);
        }
        for (uint32_t pos : unrank_comb(extra_rank, static_cast<uint32_t>(survivors.size()), s)) {
            const uint32_t node = survivors[pos];
            erased_nodes.push_back(node);
            rec.extras.push_back({node / n, node % n});
        }
        return rec;
    }
};

size_t pattern_deficiency(const Matrix& Hd, uint32_t ell,
                          const std::vector<uint32_t>& erased_nodes) {
    std::vector<size_t> cols;
    cols.reserve(erased_nodes.size() * ell);
    for (uint32_t node : erased_nodes)
        for (uint32_t u = 0; u < ell; ++u) cols.push_back(static_cast<size_t>(node) * ell + u);
    Matrix sub = Hd.select_cols(cols);
    const size_t rk = rank(std::move(sub));
    return cols.size() - rk;
}

}  // namespace

std::string FailureRecord::to_string() const {
    std::ostringstream os;
    for (size_t g = 0; g < per_group.size(); ++g) {
        os << "g" << g << ":{";
        for (size_t i = 0; i < per_group[g].size(); ++i)
            os << (i ? "," : "") << per_group[g][i];
        os << "} ";
    }
    if (!extras.empty()) {
        os << "extras:{";
        for (size_t i = 0; i < extras.size(); ++i)
            os << (i ? "," : "") << "(" << extras[i].first << "," << extras[i].second << ")";
        os << "} ";
    }
    os << "deficiency " << deficiency;
    return os.str();
}

std::string PatternReport::to_string() const {
    std::ostringstream os;
    os << "part-i checks: " << part_i_checks << "\n";
    os << "part-ii patterns: " << part_ii_patterns << "\n";
    os << "failures: " << failures.size() << "\n";
    for (size_t i = 0; i < failures.size() && i < 20; ++i)
        os << "  " << failures[i].to_string() << "\n";
    if (failures.size() > 20) os << "  ... " << failures.size() - 20 << " more\n";
    os << "elapsed: " << elapsed_s << " s\n";
    os << (certified() ? "CERTIFIED" : "NOT CERTIFIED") << "\n";
    return os.str();
}

PatternReport verify_local_mds(const BlockMatrix& H, uint32_t n, uint32_t r) {
    const auto t0 = std::chrono::steady_clock::now();
    PatternReport rep;
    const Matrix Hd = H.expand();
    const uint32_t ell = static_cast<uint32_t>(H.ell());
    const uint64_t total = comb(n, r);
    for (uint64_t rk = 0; rk < total; ++rk) {
        const auto sel = unrank_comb(rk, n, r);
        const size_t def = pattern_deficiency(Hd, ell, sel);
        ++rep.part_i_checks;
        if (def != 0) {
            FailureRecord rec;
            rec.per_group.push_back(sel);
            rec.deficiency = def;
            rep.failures.push_back(std::move(rec));
        }
    }
    rep.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

PatternReport verify_pmds(const CodeInstance& inst, VerifyOptions opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const CodeSpec& sp = inst.spec();
    PatternReport rep;

    for (uint32_t g = 0; g < sp.mu; ++g) {
        PatternReport local = verify_local_mds(inst.local_parity(), sp.n, sp.r);
        rep.part_i_checks += local.part_i_checks;
        for (auto& f : local.failures) {
            FailureRecord rec;
            rec.per_group.assign(sp.mu, {});
            rec.per_group[g] = f.per_group[0];
            rec.deficiency = f.deficiency;
            rep.failures.push_back(std::move(rec));
        }
    }

    const PatternSpace space(sp.mu, sp.n, sp.r, sp.s);
    if (opts.exhaustive && space.total > opts.budget)
        throw TooLarge("pattern count " + std::to_string(space.total) + " exceeds budget " +
                       std::to_string(opts.budget) + "; use sampling");
    const uint64_t count = opts.exhaustive ? space.total : opts.samples;
    const Matrix& Hd = inst.parity_check_dense();

    auto index_of = [&](uint64_t i, std::mt19937_64& rng) {
        return opts.exhaustive ? i : rng() % space.total;
    };

    const unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1) {
        std::mt19937_64 rng(opts.seed);
        for (uint64_t i = 0; i < count; ++i) {
            std::vector<uint32_t> erased;
            FailureRecord rec = space.pattern(index_of(i, rng), erased);
            const size_t def = pattern_deficiency(Hd, sp.ell, erased);
            ++rep.part_ii_patterns;
            if (def != 0) {
                rec.deficiency = def;
                rep.failures.push_back(std::move(rec));
                if (rep.failures.size() >= opts.max_failures) break;
            }
        }
    } else {
        // Sampling draws indices up front so worker timing cannot change them.
        std::vector<uint64_t> sampled;
        if (!opts.exhaustive) {
            std::mt19937_64 rng(opts.seed);
            sampled.reserve(count);
            for (uint64_t i = 0; i < count; ++i) sampled.push_back(rng() % space.total);
        }
        std::atomic<uint64_t> next{0};
        std::atomic<uint64_t> checked{0};
        std::mutex merge;
        std::vector<std::pair<uint64_t, FailureRecord>> found;
        auto worker = [&]() {
            while (true) {
                const uint64_t i = next.fetch_add(1);
                if (i >= count) break;
                const uint64_t idx = opts.exhaustive ? i : sampled[i];
                std::vector<uint32_t> erased;
                FailureRecord rec = space.pattern(idx, erased);
                const size_t def = pattern_deficiency(Hd, sp.ell, erased);
                checked.fetch_add(1);
                if (def != 0) {
                    rec.deficiency = def;
                    std::lock_guard<std::mutex> lk(merge);
                    found.push_back({idx, std::move(rec)});
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        rep.part_ii_patterns = checked.load();
        std::sort(found.begin(), found.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [idx, rec] : found) rep.failures.push_back(std::move(rec));
    }

    rep.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

uint32_t rand_elem(const Field& f, std::mt19937_64& rng) { return rng() % f.q(); }

std::vector<uint32_t> rand_distinct(const Field& f, size_t k, std::mt19937_64& rng,
                                    const std::vector<uint32_t>& avoid = {}) {
    std::vector<uint32_t> out;
    while (out.size() < k) {
        const uint32_t v = rand_elem(f, rng);
        bool dup = std::find(out.begin(), out.end(), v) != out.end() ||
                   std::find(avoid.begin(), avoid.end(), v) != avoid.end();
        if (!dup) out.push_back(v);
    }
    return out;
}

Matrix rand_matrix(const FieldPtr& f, size_t rows, size_t cols, std::mt19937_64& rng) {
    Matrix m(f, rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) m.at(i, j) = rand_elem(*f, rng);
    return m;
}

// Block Vandermonde of commuting diagonals with nonsingular differences.
bool block_vandermonde_trial(const FieldPtr& fp, std::mt19937_64& rng) {
    const Field& f = *fp;
    const uint32_t r = 2 + rng() % 3;           // up to 4 blocks
    const uint32_t ell = 1 + rng() % 4;
    std::vector<std::vector<uint32_t>> diags(r, std::vector<uint32_t>(ell));
    for (uint32_t a = 0; a < ell; ++a) {
        const auto vals = rand_distinct(f, r, rng);
        for (uint32_t i = 0; i < r; ++i) diags[i][a] = vals[i];
    }
    BlockMatrix bv(fp, r, r, ell);
    for (uint32_t i = 0; i < r; ++i) {
        std::vector<uint32_t> pw(ell, 1);
        for (uint32_t j = 0; j < r; ++j) {
            bv.set_diag(j, i, pw);
            for (uint32_t a = 0; a < ell; ++a) pw[a] = f.mul(pw[a], diags[i][a]);
        }
    }
    return det(bv.expand()) != 0;
}

// Bordered block-diagonal determinant identity with sign (-1)^(rs(s-1)/2).
bool bordered_block_diag_trial(const FieldPtr& fp, std::mt19937_64& rng) {
    const Field& f = *fp;
    const uint32_t r = 1 + rng() % 3, s = 1 + rng() % 3;
    std::vector<Matrix> C, D;
    for (uint32_t i = 0; i < s; ++i) {
        C.push_back(rand_matrix(fp, r, r + 1, rng));
        D.push_back(rand_matrix(fp, s, r + 1, rng));
    }
    const size_t dim = static_cast<size_t>(s) * (r + 1);
    Matrix lhs(fp, dim, dim);
    for (uint32_t i = 0; i < s; ++i)
        for (uint32_t a = 0; a < r; ++a)
            for (uint32_t b = 0; b < r + 1; ++b)
                lhs.at(i * r + a, i * (r + 1) + b) = C[i].at(a, b);
    for (uint32_t a = 0; a < s; ++a)
        for (uint32_t i = 0; i < s; ++i)
            for (uint32_t b = 0; b < r + 1; ++b)
                lhs.at(static_cast<size_t>(s) * r + a, i * (r + 1) + b) = D[i].at(a, b);
    Matrix rhs(fp, s, s);
    for (uint32_t j = 0; j < s; ++j)
        for (uint32_t i = 0; i < s; ++i) {
            Matrix m(fp, r + 1, r + 1);
            for (uint32_t a = 0; a < r; ++a)
                for (uint32_t b = 0; b < r + 1; ++b) m.at(a, b) = C[i].at(a, b);
            for (uint32_t b = 0; b < r + 1; ++b) m.at(r, b) = D[i].at(j, b);
            rhs.at(j, i) = det(std::move(m));
        }
    uint32_t lhs_det = det(std::move(lhs));
    const uint64_t sign_exp = static_cast<uint64_t>(r) * s * (s - 1) / 2;
    if (sign_exp % 2 == 1) lhs_det = f.neg(lhs_det);
    return lhs_det == det(std::move(rhs));
}

// Three-term vanishing equivalence for the mixed widths r+1 / r+2.
bool three_term_vanishing_trial(const FieldPtr& fp, std::mt19937_64& rng) {
    const Field& f = *fp;
    const uint32_t r = 1 + rng() % 3;
    Matrix C0 = rand_matrix(fp, r, r + 1, rng);
    Matrix C1 = rand_matrix(fp, r, r + 2, rng);
    Matrix D0 = rand_matrix(fp, 3, r + 1, rng);
    Matrix D1 = rand_matrix(fp, 3, r + 2, rng);
    const size_t dim = 2 * r + 3;
    Matrix lhs(fp, dim, dim);
    for (uint32_t a = 0; a < r; ++a) {
        for (uint32_t b = 0; b < r + 1; ++b) lhs.at(a, b) = C0.at(a, b);
        for (uint32_t b = 0; b < r + 2; ++b) lhs.at(r + a, r + 1 + b) = C1.at(a, b);
    }
    for (uint32_t a = 0; a < 3; ++a) {
        for (uint32_t b = 0; b < r + 1; ++b) lhs.at(2 * r + a, b) = D0.at(a, b);
        for (uint32_t b = 0; b < r + 2; ++b) lhs.at(2 * r + a, r + 1 + b) = D1.at(a, b);
    }
    auto det_c0_row = [&](uint32_t j) {
        Matrix m(fp, r + 1, r + 1);
        for (uint32_t a = 0; a < r; ++a)
            for (uint32_t b = 0; b < r + 1; ++b) m.at(a, b) = C0.at(a, b);
        for (uint32_t b = 0; b < r + 1; ++b) m.at(r, b) = D0.at(j, b);
        return det(std::move(m));
    };
    auto det_c1_rows = [&](uint32_t j1, uint32_t j2) {
        Matrix m(fp, r + 2, r + 2);
        for (uint32_t a = 0; a < r; ++a)
            for (uint32_t b = 0; b < r + 2; ++b) m.at(a, b) = C1.at(a, b);
        for (uint32_t b = 0; b < r + 2; ++b) {
            m.at(r, b) = D1.at(j1, b);
            m.at(r + 1, b) = D1.at(j2, b);
        }
        return det(std::move(m));
    };
    uint32_t rhs = f.mul(det_c0_row(0), det_c1_rows(1, 2));
    rhs = f.sub(rhs, f.mul(det_c0_row(1), det_c1_rows(0, 2)));
    rhs = f.add(rhs, f.mul(det_c0_row(2), det_c1_rows(0, 1)));
    return (det(std::move(lhs)) == 0) == (rhs == 0);
}

bool cauchy_vandermonde_trial(const FieldPtr& fp, std::mt19937_64& rng) {
    const Field& f = *fp;
    const uint32_t n = 1 + rng() % 6;
    const uint32_t l = rng() % (n + 1);
    const auto c = rand_distinct(f, n, rng);
    const auto d = rand_distinct(f, l, rng, c);
    return cv_det(c, d, f) == det(cv_matrix(c, d, fp));
}

}  // namespace

std::string OracleReport::to_string() const {
    std::ostringstream os;
    for (const auto& l : lines)
        os << l.name << ": " << l.pass << " pass, " << l.fail << " fail\n";
    return os.str();
}

OracleReport oracle_suite(uint64_t seed, uint64_t trials) {
    OracleReport rep;
    const std::vector<std::pair<std::string, FieldPtr>> fields = {
        {"GF(13)", Field::make(13, 1)}, {"GF(11^3)", Field::make(11, 3)}};
    using Trial = bool (*)(const FieldPtr&, std::mt19937_64&);
    const std::vector<std::pair<std::string, Trial>> lemmas = {
        {"block-vandermonde", &block_vandermonde_trial},
        {"bordered-block-diagonal", &bordered_block_diag_trial},
        {"three-term-vanishing", &three_term_vanishing_trial},
        {"cauchy-vandermonde", &cauchy_vandermonde_trial}};
    uint64_t salt = 1;
    for (const auto& [fname, field] : fields)
        for (const auto& [lname, fn] : lemmas) {
            OracleReport::Line line;
            line.name = lname + " over " + fname;
            std::mt19937_64 rng(seed ^ (salt++ * 0x9e3779b97f4a7c15ull));
            for (uint64_t t = 0; t < trials; ++t)
                (fn(field, rng) ? line.pass : line.fail)++;
            rep.lines.push_back(std::move(line));
        }
    return rep;
}

}  // namespace pmda

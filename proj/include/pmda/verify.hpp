#ifndef PMDA_VERIFY_HPP
#define PMDA_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pmda/pmds.hpp"

namespace pmda {

struct TooLarge : Error { using Error::Error; };

struct FailureRecord {
    std::vector<std::vector<uint32_t>> per_group;  // erased node indices per group
    std::vector<std::pair<uint32_t, uint32_t>> extras;
    size_t deficiency = 0;
    std::string to_string() const;
};

struct PatternReport {
    uint64_t part_i_checks = 0;
    uint64_t part_ii_patterns = 0;
    std::vector<FailureRecord> failures;
    double elapsed_s = 0;

    bool certified() const { return failures.empty(); }
    uint64_t total_patterns() const { return part_i_checks + part_ii_patterns; }
    std::string to_string() const;
};

struct VerifyOptions {
    bool exhaustive = true;
    uint64_t samples = 0;          // used when exhaustive == false
    uint64_t budget = 1'000'000;   // exhaustive pattern cap
    unsigned jobs = 1;
    uint64_t max_failures = ~0ull; // early stop once reached (jobs == 1 only)
    uint64_t seed = 0x9e3779b97f4a7c15ull;
};

/// Every r-subset of thick columns must be nonsingular.
PatternReport verify_local_mds(const BlockMatrix& H, uint32_t n, uint32_t r);

/// Part i per group, then the full erasure enumeration: r per group plus
/// s extras anywhere among the survivors.
PatternReport verify_pmds(const CodeInstance& inst, VerifyOptions opts = {});

struct OracleReport {
    struct Line {
        std::string name;
        uint64_t pass = 0;
        uint64_t fail = 0;
    };
    std::vector<Line> lines;
    bool all_pass() const {
        for (const auto& l : lines)
            if (l.fail != 0) return false;
        return true;
    }
    std::string to_string() const;
};

/// Randomized determinant-identity checks (block Vandermonde, bordered
/// block-diagonal, three-term vanishing, Cauchy-Vandermonde closed form),
/// each run over GF(13) and GF(11^3).
OracleReport oracle_suite(uint64_t seed, uint64_t trials);

}  // namespace pmda

#endif

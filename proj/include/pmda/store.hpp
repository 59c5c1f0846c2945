#ifndef PMDA_STORE_HPP
#define PMDA_STORE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pmda/pmds.hpp"

namespace pmda {

struct CorruptHeader : Error { using Error::Error; };
struct HashMismatch : Error { using Error::Error; };
struct ShortRead : Error { using Error::Error; };

/// 54-byte shard header, little-endian integers.
struct ShardHeader {
    static constexpr char kMagic[4] = {'P', 'M', 'D', 'A'};
    static constexpr uint8_t kVersion = 1;
    static constexpr size_t kSize = 54;

    std::array<uint8_t, 32> code_spec_hash{};
    uint16_t group = 0;
    uint16_t node = 0;
    uint32_t ell = 0;
    uint8_t symbol_width = 0;
    uint64_t stripe_index = 0;

    std::vector<uint8_t> pack() const;
    static ShardHeader unpack(const uint8_t* data, size_t len);
};

/// Data bits packed per symbol: floor(log2 q), so every chunk value is a
/// valid field element.
uint32_t payload_bits(const Field& f);

/// Stored bytes per symbol: ceil(log2(q) / 8).
uint32_t symbol_width(const Field& f);

/// Info symbols carried by one stripe.
size_t stripe_info_symbols(const CodeInstance& inst);

/// Stripes needed to carry the 64-bit length trailer.
size_t trailer_stripes(const CodeInstance& inst);

/// Splits a byte buffer into per-stripe info-symbol vectors; the final
/// stripes carry the original length so unchunk is bit-exact.
std::vector<std::vector<uint32_t>> chunk(const std::vector<uint8_t>& data,
                                         const CodeInstance& inst);

std::vector<uint8_t> unchunk(const std::vector<std::vector<uint32_t>>& stripes,
                             const CodeInstance& inst);

std::string shard_filename(uint32_t group, uint32_t node, uint64_t stripe_index);

/// One file per node: header then ell fixed-width little-endian symbols.
void write_shards(const StripeState& stripe, const CodeSpec& spec,
                  const std::string& dir, uint64_t stripe_index);

/// Missing shard files come back as erased nodes.
StripeState read_shards(const CodeInstance& inst, const std::string& dir,
                        uint64_t stripe_index);

/// Highest stripe index + 1 found in the directory, 0 if none.
uint64_t count_stripes(const std::string& dir);

}  // namespace pmda

#endif

#include "pmda/store.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "sha256.hpp"

namespace fs = std::filesystem;

namespace pmda {

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(uint8_t(v));
    out.push_back(uint8_t(v >> 8));
}
void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
uint16_t get_u16(const uint8_t* p) { return uint16_t(p[0]) | uint16_t(p[1]) << 8; }
uint32_t get_u32(const uint8_t* p) {
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}
uint64_t get_u64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

// LSB-first bit packing, within bytes and within symbols.
class BitWriter {
public:
    void put(uint64_t value, uint32_t bits) {
        for (uint32_t i = 0; i < bits; ++i) {
            if (fill_ == 0) bytes_.push_back(0);
            if ((value >> i) & 1) bytes_.back() |= uint8_t(1u << fill_);
            fill_ = (fill_ + 1) % 8;
        }
    }
    const std::vector<uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<uint8_t> bytes_;
    uint32_t fill_ = 0;
};

class BitReader {
public:
    BitReader(const uint8_t* data, size_t len) : data_(data), bits_(len * 8) {}
    uint64_t get(uint32_t bits) {
        uint64_t v = 0;
        for (uint32_t i = 0; i < bits; ++i) {
            if (pos_ < bits_ && (data_[pos_ / 8] >> (pos_ % 8)) & 1) v |= uint64_t(1) << i;
            ++pos_;
        }
        return v;
    }

private:
    const uint8_t* data_;
    size_t bits_;
    size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> ShardHeader::pack() const {
    std::vector<uint8_t> out;
    out.reserve(kSize);
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.insert(out.end(), code_spec_hash.begin(), code_spec_hash.end());
    put_u16(out, group);
    put_u16(out, node);
    put_u32(out, ell);
    out.push_back(symbol_width);
    put_u64(out, stripe_index);
    return out;
}

ShardHeader ShardHeader::unpack(const uint8_t* data, size_t len) {
    if (len < kSize) throw ShortRead("shard shorter than its header");
    if (std::memcmp(data, kMagic, 4) != 0) throw CorruptHeader("bad shard magic");
    if (data[4] != kVersion) throw CorruptHeader("unsupported shard version");
    ShardHeader h;
    std::memcpy(h.code_spec_hash.data(), data + 5, 32);
    h.group = get_u16(data + 37);
    h.node = get_u16(data + 39);
    h.ell = get_u32(data + 41);
    h.symbol_width = data[45];
    h.stripe_index = get_u64(data + 46);
    return h;
}

uint32_t payload_bits(const Field& f) {
    uint32_t bits = 0;
    uint64_t v = f.q();
    while (v > 1) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

uint32_t symbol_width(const Field& f) {
    uint32_t bits = 0;
    uint64_t v = f.q() - 1;
    while (v > 0) {
        v >>= 1;
        ++bits;
    }
    return (bits + 7) / 8;
}

size_t stripe_info_symbols(const CodeInstance& inst) {
    return inst.spec().info_set.size() * inst.spec().ell;
}

size_t trailer_stripes(const CodeInstance& inst) {
    const size_t bits_per_stripe = stripe_info_symbols(inst) * payload_bits(*inst.spec().field);
    if (bits_per_stripe == 0) throw GeometryError("code carries no payload");
    return (64 + bits_per_stripe - 1) / bits_per_stripe;
}

std::vector<std::vector<uint32_t>> chunk(const std::vector<uint8_t>& data,
                                         const CodeInstance& inst) {
    const uint32_t pb = payload_bits(*inst.spec().field);
    const size_t syms = stripe_info_symbols(inst);
    const size_t bits_per_stripe = syms * pb;
    const size_t data_stripes = (data.size() * 8 + bits_per_stripe - 1) / bits_per_stripe;

    std::vector<std::vector<uint32_t>> out;
    out.reserve(data_stripes + trailer_stripes(inst));
    BitReader br(data.data(), data.size());
    for (size_t s = 0; s < data_stripes; ++s) {
        std::vector<uint32_t> stripe(syms);
        for (size_t i = 0; i < syms; ++i) stripe[i] = static_cast<uint32_t>(br.get(pb));
        out.push_back(std::move(stripe));
    }
    BitWriter trailer;
    trailer.put(static_cast<uint64_t>(data.size()), 64);
    BitReader tr(trailer.bytes().data(), trailer.bytes().size());
    for (size_t s = 0; s < trailer_stripes(inst); ++s) {
        std::vector<uint32_t> stripe(syms);
        for (size_t i = 0; i < syms; ++i) stripe[i] = static_cast<uint32_t>(tr.get(pb));
        out.push_back(std::move(stripe));
    }
    return out;
}

std::vector<uint8_t> unchunk(const std::vector<std::vector<uint32_t>>& stripes,
                             const CodeInstance& inst) {
    const uint32_t pb = payload_bits(*inst.spec().field);
    const size_t syms = stripe_info_symbols(inst);
    const size_t ts = trailer_stripes(inst);
    if (stripes.size() < ts) throw Error("missing length trailer stripes");
    BitWriter tw;
    for (size_t s = stripes.size() - ts; s < stripes.size(); ++s) {
        if (stripes[s].size() != syms) throw Error("stripe has wrong symbol count");
        for (uint32_t v : stripes[s]) tw.put(v, pb);
    }
    BitReader tr(tw.bytes().data(), tw.bytes().size());
    const uint64_t length = tr.get(64);

    BitWriter dw;
    for (size_t s = 0; s + ts < stripes.size(); ++s) {
        if (stripes[s].size() != syms) throw Error("stripe has wrong symbol count");
        for (uint32_t v : stripes[s]) {
            if (v >> pb) throw Error("stripe symbol outside the payload range");
            dw.put(v, pb);
        }
    }
    std::vector<uint8_t> data = dw.bytes();
    if (length > data.size()) throw Error("length trailer exceeds recovered payload");
    data.resize(length);
    return data;
}

std::string shard_filename(uint32_t group, uint32_t node, uint64_t stripe_index) {
    return "g" + std::to_string(group) + "_n" + std::to_string(node) + "_s" +
           std::to_string(stripe_index) + ".shard";
}

void write_shards(const StripeState& stripe, const CodeSpec& spec,
                  const std::string& dir, uint64_t stripe_index) {
    fs::create_directories(dir);
    const uint32_t width = symbol_width(*spec.field);
    const auto hash = spec.spec_hash();
    for (uint32_t g = 0; g < stripe.mu; ++g)
        for (uint32_t j = 0; j < stripe.n; ++j) {
            if (stripe.is_erased(g, j)) continue;
            ShardHeader h;
            h.code_spec_hash = hash;
            h.group = static_cast<uint16_t>(g);
            h.node = static_cast<uint16_t>(j);
            h.ell = stripe.ell;
            h.symbol_width = static_cast<uint8_t>(width);
            h.stripe_index = stripe_index;
            std::vector<uint8_t> bytes = h.pack();
            for (uint32_t v : stripe.col(g, j))
                for (uint32_t b = 0; b < width; ++b) bytes.push_back(uint8_t(v >> (8 * b)));
            const fs::path path = fs::path(dir) / shard_filename(g, j, stripe_index);
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("cannot write " + path.string());
            out.write(reinterpret_cast<const char*>(bytes.data()),
                      static_cast<std::streamsize>(bytes.size()));
        }
}

StripeState read_shards(const CodeInstance& inst, const std::string& dir,
                        uint64_t stripe_index) {
    const CodeSpec& sp = inst.spec();
    const uint32_t width = symbol_width(*sp.field);
    const auto expect_hash = sp.spec_hash();
    StripeState st = inst.empty_stripe();
    for (uint32_t g = 0; g < sp.mu; ++g)
        for (uint32_t j = 0; j < sp.n; ++j) {
            const fs::path path = fs::path(dir) / shard_filename(g, j, stripe_index);
            std::ifstream in(path, std::ios::binary);
            if (!in) {
                st.set_erased(g, j);
                continue;
            }
            std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
            ShardHeader h = ShardHeader::unpack(bytes.data(), bytes.size());
            if (h.group != g || h.node != j || h.ell != sp.ell || h.symbol_width != width ||
                h.stripe_index != stripe_index)
                throw CorruptHeader("shard header disagrees with its location: " + path.string());
            if (h.code_spec_hash != expect_hash)
                throw HashMismatch("shard was written under a different code spec: " +
                                   path.string());
            const size_t need = ShardHeader::kSize + static_cast<size_t>(sp.ell) * width;
            if (bytes.size() < need) throw ShortRead("truncated shard: " + path.string());
            auto& col = st.col(g, j);
            for (uint32_t u = 0; u < sp.ell; ++u) {
                uint32_t v = 0;
                for (uint32_t b = 0; b < width; ++b)
                    v |= uint32_t(bytes[ShardHeader::kSize + u * width + b]) << (8 * b);
                if (v >= sp.field->q())
                    throw CorruptHeader("shard symbol outside the field: " + path.string());
                col[u] = v;
            }
        }
    return st;
}

uint64_t count_stripes(const std::string& dir) {
    uint64_t max_plus_one = 0;
    if (!fs::exists(dir)) return 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const auto s_pos = name.rfind("_s");
        if (name.size() < 7 || name.substr(name.size() - 6) != ".shard" ||
            s_pos == std::string::npos)
            continue;
        const std::string idx = name.substr(s_pos + 2, name.size() - 6 - (s_pos + 2));
        if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos) continue;
        max_plus_one = std::max<uint64_t>(max_plus_one, std::stoull(idx) + 1);
    }
    return max_plus_one;
}

}  // namespace pmda

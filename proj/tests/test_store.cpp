#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "pmda/pmds.hpp"
#include "pmda/store.hpp"

using namespace pmda;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("pmda_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<uint8_t> random_bytes(size_t len, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> data(len);
    for (auto& b : data) b = uint8_t(rng());
    return data;
}

}  // namespace

TEST_CASE("payload bits and symbol width") {
    CHECK(payload_bits(*Field::make(13, 1)) == 3);
    CHECK(payload_bits(*Field::make(11, 3)) == 10);
    CHECK(symbol_width(*Field::make(13, 1)) == 1);
    CHECK(symbol_width(*Field::make(11, 3)) == 2);
}

TEST_CASE("chunk round trips, including the empty file") {
    const CodeInstance inst = build_c2(2, 4, 2, 2);
    const auto empty = chunk({}, inst);
    CHECK(empty.size() == trailer_stripes(inst));
    CHECK(unchunk(empty, inst).empty());

    for (size_t len : {1u, 2u, 3u, 100u, 4096u, 100000u}) {
        const auto data = random_bytes(len, len);
        const auto stripes = chunk(data, inst);
        for (const auto& s : stripes) {
            CHECK(s.size() == stripe_info_symbols(inst));
            for (uint32_t v : s) CHECK(v < 8);  // 3 payload bits in GF(13)
        }
        CHECK(unchunk(stripes, inst) == data);
    }
}

TEST_CASE("chunk round trips on a narrow-stripe code") {
    // c3 with n=4 carries 12 bits per stripe, less than the length trailer
    const CodeInstance inst = build_c3(2, 4);
    CHECK(stripe_info_symbols(inst) == 4);
    CHECK(trailer_stripes(inst) > 1);
    const auto data = random_bytes(1000, 99);
    CHECK(unchunk(chunk(data, inst), inst) == data);
}

TEST_CASE("shard write/read round trip") {
    const CodeInstance inst = build_c2(2, 4, 2, 2);
    std::mt19937_64 rng(7);
    std::vector<uint32_t> info(stripe_info_symbols(inst));
    for (auto& v : info) v = rng() % 13;
    const StripeState st = encode(inst, info);
    TempDir dir("shards");
    write_shards(st, inst.spec(), dir.path.string(), 5);
    CHECK(count_stripes(dir.path.string()) == 6);
    const StripeState back = read_shards(inst, dir.path.string(), 5);
    CHECK(back == st);

    SUBCASE("missing shards become erasures") {
        fs::remove(dir.path / shard_filename(0, 1, 5));
        fs::remove(dir.path / shard_filename(1, 3, 5));
        const StripeState damaged = read_shards(inst, dir.path.string(), 5);
        CHECK(damaged.is_erased(0, 1));
        CHECK(damaged.is_erased(1, 3));
        CHECK(decode(inst, damaged) == st);
    }

    SUBCASE("corrupt header is rejected") {
        const fs::path victim = dir.path / shard_filename(0, 0, 5);
        std::fstream io(victim, std::ios::binary | std::ios::in | std::ios::out);
        io.seekp(0);
        io.put('X');
        io.close();
        CHECK_THROWS_AS(read_shards(inst, dir.path.string(), 5), CorruptHeader);
    }

    SUBCASE("truncated shard is rejected") {
        const fs::path victim = dir.path / shard_filename(0, 0, 5);
        fs::resize_file(victim, ShardHeader::kSize + 1);
        CHECK_THROWS_AS(read_shards(inst, dir.path.string(), 5), ShortRead);
    }

    SUBCASE("foreign spec hash is rejected") {
        CodeSpec tweaked = inst.spec();
        tweaked.theta = {1, 3};  // same geometry, different spec bytes
        CHECK_THROWS_AS(read_shards(CodeInstance::assemble(tweaked, false),
                                    dir.path.string(), 5),
                        HashMismatch);
    }
}

TEST_CASE("file-level round trip through shard files") {
    const CodeInstance inst = build_c2(2, 4, 2, 2);
    const auto data = random_bytes(2048, 2048);
    const auto stripes = chunk(data, inst);
    TempDir dir("file_rt");
    for (size_t i = 0; i < stripes.size(); ++i)
        write_shards(encode(inst, stripes[i]), inst.spec(), dir.path.string(), i);

    // knock out a correctable pattern: r per group plus s extras
    for (auto [g, j] : {std::pair<uint32_t, uint32_t>{0, 0}, {0, 2}, {1, 1}, {1, 3},
                        {0, 3}, {1, 0}})
        for (size_t i = 0; i < stripes.size(); ++i)
            fs::remove(dir.path / shard_filename(g, j, i));

    std::vector<std::vector<uint32_t>> payload;
    for (size_t i = 0; i < stripes.size(); ++i) {
        const StripeState st = read_shards(inst, dir.path.string(), i);
        payload.push_back(extract_info(inst, decode(inst, st)));
    }
    CHECK(unchunk(payload, inst) == data);
}

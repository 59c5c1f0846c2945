#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "pmda/pmds.hpp"
#include "pmda/store.hpp"
#include "pmda/verify.hpp"

namespace fs = std::filesystem;
using namespace pmda;

namespace {

struct GenOpts {
    std::string family;
    uint32_t mu = 2, n = 0, nprime = 0, r = 2;
    std::string out;
};

CodeInstance build_from(const GenOpts& o) {
    const Family fam = family_from_name(o.family);
    switch (fam) {
        case Family::c2: return build_c2(o.mu, o.n, o.nprime, o.r);
        case Family::c3: return build_c3(o.mu, o.n);
        case Family::c4: return build_c4(o.mu, o.n, o.nprime, o.r);
    }
    throw Error("unreachable");
}

int cmd_gen(const GenOpts& o) {
    const CodeInstance inst = build_from(o);
    const CodeSpec& sp = inst.spec();
    std::printf("family %s  mu %u  n %u  nprime %u  r %u  s %u  ell %u\n",
                family_name(sp.family).c_str(), sp.mu, sp.n, sp.nprime, sp.r, sp.s, sp.ell);
    std::printf("q %u", sp.field->q());
    if (sp.family == Family::c4) std::printf("  q0 %u", sp.base->q());
    if (sp.family != Family::c3)
        std::printf("  phi %llu",
                    static_cast<unsigned long long>(phi(sp.n, sp.nprime, sp.r)));
    std::printf("\n");
    std::printf("subgroup order %u generator %u cosets %u\n", sp.subgroup.order,
                sp.subgroup.generator, (sp.base->q() - 1) / sp.subgroup.order);
    std::printf("node gamma Gamma\n");
    for (uint32_t j = 0; j < sp.n; ++j)
        std::printf("%4u %5llu %5llu\n", j,
                    static_cast<unsigned long long>(repair_bandwidth_formula(sp, j)),
                    static_cast<unsigned long long>(repair_access_formula(sp, j)));
    if (!o.out.empty()) {
        sp.save(o.out);
        std::printf("wrote %s\n", o.out.c_str());
    }
    return 0;
}

int cmd_encode(const std::string& spec_path, const std::string& in_path,
               const std::string& out_dir) {
    const CodeInstance inst = CodeInstance::assemble(CodeSpec::load(spec_path));
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw Error("cannot open " + in_path);
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    const auto stripes = chunk(data, inst);
    for (size_t i = 0; i < stripes.size(); ++i)
        write_shards(encode(inst, stripes[i]), inst.spec(), out_dir, i);
    std::printf("encoded %zu bytes into %zu stripes under %s\n", data.size(), stripes.size(),
                out_dir.c_str());
    return 0;
}

std::vector<std::pair<uint32_t, uint32_t>> parse_nodes(const std::string& arg) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("expected g:j, got " + item);
        out.push_back({static_cast<uint32_t>(std::stoul(item.substr(0, colon))),
                       static_cast<uint32_t>(std::stoul(item.substr(colon + 1)))});
    }
    return out;
}

int cmd_corrupt(const std::string& dir, const std::string& erase) {
    const auto nodes = parse_nodes(erase);
    const uint64_t stripes = count_stripes(dir);
    uint64_t removed = 0;
    for (auto [g, j] : nodes)
        for (uint64_t s = 0; s < stripes; ++s)
            removed += fs::remove(fs::path(dir) / shard_filename(g, j, s)) ? 1 : 0;
    std::printf("removed %llu shard files\n", static_cast<unsigned long long>(removed));
    return 0;
}

int cmd_decode(const std::string& spec_path, const std::string& dir,
               const std::string& out_path) {
    const CodeInstance inst = CodeInstance::assemble(CodeSpec::load(spec_path));
    const uint64_t stripes = count_stripes(dir);
    if (stripes == 0) throw Error("no shards found in " + dir);
    std::map<std::vector<uint32_t>, std::shared_ptr<ErasureSolver>> solvers;
    std::vector<std::vector<uint32_t>> payload;
    payload.reserve(stripes);
    for (uint64_t s = 0; s < stripes; ++s) {
        StripeState st = read_shards(inst, dir, s);
        std::vector<uint32_t> erased;
        for (uint32_t c = 0; c < inst.spec().nodes(); ++c)
            if (st.erased[c]) erased.push_back(c);
        if (!erased.empty()) {
            auto& solver = solvers[erased];
            if (!solver) solver = std::make_shared<ErasureSolver>(inst, erased);
            st = solver->restore(st);
        }
        payload.push_back(extract_info(inst, st));
    }
    const std::vector<uint8_t> data = unchunk(payload, inst);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + out_path + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    std::printf("decoded %zu bytes from %llu stripes\n", data.size(),
                static_cast<unsigned long long>(stripes));
    return 0;
}

int cmd_repair(const std::string& spec_path, const std::string& dir,
               const std::string& node_arg) {
    const CodeInstance inst = CodeInstance::assemble(CodeSpec::load(spec_path));
    const auto nodes = parse_nodes(node_arg);
    if (nodes.size() != 1) throw Error("repair takes exactly one g:j node");
    const auto [g, j] = nodes[0];
    const uint64_t stripes = count_stripes(dir);
    if (stripes == 0) throw Error("no shards found in " + dir);
    uint64_t bandwidth = 0, access = 0;
    for (uint64_t s = 0; s < stripes; ++s) {
        StripeState st = read_shards(inst, dir, s);
        auto [content, plan] = repair(inst, st, g, j);
        bandwidth += plan.bandwidth;
        access += plan.access;
        st.col(g, j) = content;
        st.set_erased(g, j, false);
        StripeState one = inst.empty_stripe();
        for (uint32_t c = 0; c < inst.spec().nodes(); ++c) one.erased[c] = 1;
        one.columns[st.node_id(g, j)] = content;
        one.erased[st.node_id(g, j)] = 0;
        write_shards(one, inst.spec(), dir, s);
    }
    const uint64_t gamma = repair_bandwidth_formula(inst.spec(), j);
    const uint64_t Gamma = repair_access_formula(inst.spec(), j);
    std::printf("repaired node %u:%u over %llu stripes\n", g, j,
                static_cast<unsigned long long>(stripes));
    std::printf("bandwidth %llu symbols (%llu per stripe, formula %llu)\n",
                static_cast<unsigned long long>(bandwidth),
                static_cast<unsigned long long>(bandwidth / stripes),
                static_cast<unsigned long long>(gamma));
    std::printf("access %llu symbols (%llu per stripe, formula %llu)\n",
                static_cast<unsigned long long>(access),
                static_cast<unsigned long long>(access / stripes),
                static_cast<unsigned long long>(Gamma));
    if (bandwidth != gamma * stripes || access != Gamma * stripes) {
        std::fprintf(stderr, "measured repair traffic disagrees with the formula\n");
        return 1;
    }
    return 0;
}

int cmd_verify(const std::string& spec_path, bool exhaustive, uint64_t samples,
               unsigned jobs) {
    const CodeInstance inst = CodeInstance::assemble(CodeSpec::load(spec_path));
    VerifyOptions opts;
    opts.exhaustive = exhaustive || samples == 0;
    opts.samples = samples;
    opts.jobs = jobs;
    const PatternReport rep = verify_pmds(inst, opts);
    std::printf("%s", rep.to_string().c_str());
    return rep.certified() ? 0 : 1;
}

struct Range {
    uint32_t lo = 0, hi = 0;
};

std::map<std::string, Range> parse_grid(const std::string& grid) {
    std::map<std::string, Range> out;
    std::stringstream ss(grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("grid entries look like n=4..8");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        const auto dots = val.find("..");
        Range r;
        if (dots == std::string::npos) {
            r.lo = r.hi = static_cast<uint32_t>(std::stoul(val));
        } else {
            r.lo = static_cast<uint32_t>(std::stoul(val.substr(0, dots)));
            r.hi = static_cast<uint32_t>(std::stoul(val.substr(dots + 2)));
        }
        if (r.lo > r.hi) throw Error("empty grid range for " + key);
        out[key] = r;
    }
    return out;
}

std::string ratio_string(uint64_t extra_num, uint64_t den) {
    if (extra_num == 0) return "1";
    const uint64_t g = std::gcd(extra_num, den);
    return "1+" + std::to_string(extra_num / g) + "/" + std::to_string(den / g);
}

int cmd_report(const std::string& family, uint32_t mu, const std::string& grid) {
    const Family fam = family_from_name(family);
    const auto ranges = parse_grid(grid);
    auto range_of = [&](const std::string& key, uint32_t def) {
        auto it = ranges.find(key);
        return it == ranges.end() ? Range{def, def} : it->second;
    };
    const Range rn = range_of("n", 4);
    const Range rnp = range_of("nprime", 2);
    const Range rr = range_of("r", 2);
    std::printf("family n nprime r ell q gamma ratio Gamma\n");
    for (uint32_t n = rn.lo; n <= rn.hi; ++n)
        for (uint32_t np = rnp.lo; np <= rnp.hi; ++np)
            for (uint32_t r = rr.lo; r <= rr.hi; ++r) {
                try {
                    CodePlan p;
                    uint64_t gamma, Gamma, extra;
                    if (fam == Family::c3) {
                        if (np != rnp.lo || r != rr.lo) continue;
                        p = plan_c3(mu, n);
                        gamma = Gamma = n % 2 == 0 ? 3ull * n / 2 - 2 : (3ull * n - 3) / 2;
                        std::printf("c3 %u - - %llu %llu %llu - %llu\n", n,
                                    static_cast<unsigned long long>(p.ell),
                                    static_cast<unsigned long long>(p.q),
                                    static_cast<unsigned long long>(gamma),
                                    static_cast<unsigned long long>(Gamma));
                        continue;
                    }
                    p = fam == Family::c2 ? plan_c2(mu, n, np, r) : plan_c4(mu, n, np, r);
                    // the worse of the two branches; unique when n' | n
                    const uint64_t b =
                        n % np == 0 ? n / np : (n + np - 1) / np;
                    extra = (b - 1) * (r - 1);
                    const uint64_t base_gamma = (p.ell / r) * (n - 1);
                    gamma = base_gamma + extra * (p.ell / r);
                    Gamma = p.ell * (n - 1);
                    std::printf("%s %u %u %u %llu %llu %llu %s %llu\n",
                                family_name(fam).c_str(), n, np, r,
                                static_cast<unsigned long long>(p.ell),
                                static_cast<unsigned long long>(p.q),
                                static_cast<unsigned long long>(gamma),
                                ratio_string(extra, n - 1).c_str(),
                                static_cast<unsigned long long>(Gamma));
                } catch (const GeometryError&) {
                    continue;
                } catch (const NoField& e) {
                    std::printf("%s %u %u %u - no-field (%s)\n", family_name(fam).c_str(), n,
                                np, r, e.what());
                }
            }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PMDS array-code toolkit: generate, encode, verify, repair"};
    app.require_subcommand(1);

    GenOpts gen;
    auto* g = app.add_subcommand("gen", "build a code spec and print its parameters");
    g->add_option("--family", gen.family, "c2, c3, or c4")->required();
    g->add_option("--mu", gen.mu, "number of local groups")->required();
    g->add_option("--n", gen.n, "group size")->required();
    g->add_option("--nprime", gen.nprime, "repair-locality parameter (c2/c4)");
    g->add_option("--r", gen.r, "local parities per group (c2/c4)");
    g->add_option("--out", gen.out, "write the spec JSON here");

    std::string spec_path, in_path, out_path, dir, erase_arg, node_arg, grid;
    bool exhaustive = false;
    uint64_t samples = 0;
    unsigned jobs = 1;
    uint32_t report_mu = 2;
    std::string report_family;

    auto* e = app.add_subcommand("encode", "chunk a file and write shards");
    e->add_option("--spec", spec_path, "code spec JSON")->required();
    e->add_option("--in", in_path, "input file")->required();
    e->add_option("--out", dir, "output shard directory")->required();

    auto* c = app.add_subcommand("corrupt", "delete shard files (fault injection)");
    c->add_option("--dir", dir, "shard directory")->required();
    c->add_option("--erase", erase_arg, "nodes g:j[,g:j...]")->required();

    auto* d = app.add_subcommand("decode", "read shards, decode, reassemble the file");
    d->add_option("--spec", spec_path, "code spec JSON")->required();
    d->add_option("--dir", dir, "shard directory")->required();
    d->add_option("--out", out_path, "output file")->required();

    auto* rp = app.add_subcommand("repair", "rebuild one node from its group");
    rp->add_option("--spec", spec_path, "code spec JSON")->required();
    rp->add_option("--dir", dir, "shard directory")->required();
    rp->add_option("--node", node_arg, "node as g:j")->required();

    auto* v = app.add_subcommand("verify", "certify the PMDS property");
    v->add_option("--spec", spec_path, "code spec JSON")->required();
    v->add_flag("--exhaustive", exhaustive, "enumerate every pattern (default)");
    v->add_option("--samples", samples, "random patterns instead of enumeration");
    v->add_option("--jobs", jobs, "worker threads");

    auto* rep = app.add_subcommand("report", "parameter table over a grid");
    rep->add_option("--family", report_family, "c2, c3, or c4")->required();
    rep->add_option("--mu", report_mu, "number of local groups");
    rep->add_option("--grid", grid, "e.g. \"n=4..8,nprime=2..3,r=2\"")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& h) {
        return app.exit(h);
    } catch (const CLI::ParseError& pe) {
        std::cerr << pe.what() << "\n";
        return 2;
    }

    try {
        if (g->parsed()) return cmd_gen(gen);
        if (e->parsed()) return cmd_encode(spec_path, in_path, dir);
        if (c->parsed()) return cmd_corrupt(dir, erase_arg);
        if (d->parsed()) return cmd_decode(spec_path, dir, out_path);
        if (rp->parsed()) return cmd_repair(spec_path, dir, node_arg);
        if (v->parsed()) return cmd_verify(spec_path, exhaustive, samples, jobs);
        if (rep->parsed()) return cmd_report(report_family, report_mu, grid);
    } catch (const Unrecoverable& u) {
        std::cerr << "unrecoverable: " << u.what() << "\n";
        std::cerr << "unknowns " << u.unknowns << ", rank " << u.achieved_rank
                  << ", deficiency " << (u.unknowns - u.achieved_rank) << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fran/fronthaul.hpp"

using namespace fran;

namespace {

constexpr double kSub = 100.0;  // subfile size used by the fixtures, bits

// Two ENs, two files, two subfiles; the caches cross-cover each other's
// missing halves, so packets of the same file can share one transmission.
struct CrossCoverFixture {
    CacheState cache;
    DeliveryRequirement req;
};

CrossCoverFixture cross_cover() {
    CacheState cache = CacheState::from_dump(2, 2, 2, kSub, "10\n01\n01\n10\n");
    Demand demand;
    demand.files = {1, 2};
    demand.requested = {1, 2};
    std::vector<std::vector<int>> serving = {{1, 2}, {1, 2}};
    DeliveryRequirement req = compute_requirements(cache, demand, serving);
    return {std::move(cache), std::move(req)};
}

ConflictGraph isolated_vertices(int n) {
    ConflictGraph g;
    g.v.resize(n);
    for (int i = 0; i < n; ++i) g.v[i] = {1, i + 1, {1}};
    g.nwords = (n + 63) / 64;
    g.adj.assign(size_t(n) * g.nwords, 0);
    return g;
}

void link(ConflictGraph& g, int a, int b) {
    g.adj[size_t(a) * g.nwords + b / 64] |= uint64_t(1) << (b % 64);
    g.adj[size_t(b) * g.nwords + a / 64] |= uint64_t(1) << (a % 64);
}

bool coloring_is_proper(const ConflictGraph& g, const Coloring& col) {
    for (int a = 0; a < g.order(); ++a)
        for (int b = a + 1; b < g.order(); ++b)
            if (g.adjacent(a, b) && col.color[a] == col.color[b]) return false;
    return true;
}

}  // namespace

TEST_CASE("strategy names") {
    CHECK(std::string(strategy_name(Strategy::Unicast)) == "unicast");
    CHECK(std::string(strategy_name(Strategy::Multicast)) == "multicast");
    CHECK(std::string(strategy_name(Strategy::Coded)) == "coded");
}

TEST_CASE("requirements list the missing subfiles of every serving EN") {
    // EN1 holds subfile 1 of the demanded file, EN2 holds subfile 2.
    CacheState cache = CacheState::from_dump(2, 1, 2, kSub, "10\n01\n");
    Demand demand;
    demand.files = {1};
    demand.requested = {1};
    DeliveryRequirement req = compute_requirements(cache, demand, {{1, 2}});
    CHECK(req.need == std::vector<NeedTriple>{{1, 1, 2}, {2, 1, 1}});

    FronthaulLoad uni = unicast_bits(req, kSub);
    CHECK(uni.strategy == Strategy::Unicast);
    CHECK(uni.count == 2);
    CHECK(uni.bits == 2 * kSub);
}

TEST_CASE("full caches leave nothing to transfer") {
    CacheState cache = CacheState::from_dump(2, 2, 2, kSub, "11\n11\n11\n11\n");
    Demand demand;
    demand.files = {1, 2};
    demand.requested = {1, 2};
    DeliveryRequirement req = compute_requirements(cache, demand, {{1, 2}, {1, 2}});
    CHECK(req.need.empty());
    CHECK(unicast_bits(req, kSub).bits == 0.0);
    CHECK(multicast_bits(req, kSub).bits == 0.0);
    CHECK(coded_bits(req, cache, kSub).bits == 0.0);
    CHECK(build_conflict_graph(req, cache).order() == 0);
}

TEST_CASE("two UEs sharing a file and an EN produce one requirement, not two") {
    CacheState cache = CacheState::from_dump(1, 1, 1, kSub, "0\n");
    Demand demand;
    demand.files = {1, 1};
    demand.requested = {1};
    DeliveryRequirement req = compute_requirements(cache, demand, {{1}, {1}});
    CHECK(req.need == std::vector<NeedTriple>{{1, 1, 1}});
}

TEST_CASE("multicast collapses a packet wanted by several ENs") {
    CacheState cache = CacheState::from_dump(2, 1, 1, kSub, "0\n0\n");
    Demand demand;
    demand.files = {1};
    demand.requested = {1};
    DeliveryRequirement req = compute_requirements(cache, demand, {{1, 2}});
    CHECK(req.need.size() == 2);
    CHECK(unicast_bits(req, kSub).bits == 2 * kSub);
    CHECK(multicast_bits(req, kSub).bits == 1 * kSub);

    // Both vertices carry the same packet, so they never conflict and merge
    // into a single transmission.
    ConflictGraph g = build_conflict_graph(req, cache);
    CHECK(g.order() == 2);
    CHECK_FALSE(g.adjacent(0, 1));
    ConflictGraph m = merge_shared_packets(g);
    REQUIRE(m.order() == 1);
    CHECK(m.v[0].ens == std::vector<int>{1, 2});
    CHECK(coded_bits(req, cache, kSub).count == 1);
}

TEST_CASE("empty caches make distinct packets pairwise conflicting") {
    CacheState cache = CacheState::from_dump(2, 2, 2, kSub, "00\n00\n00\n00\n");
    Demand demand;
    demand.files = {1, 2};
    demand.requested = {1, 2};
    DeliveryRequirement req = compute_requirements(cache, demand, {{1}, {2}});
    REQUIRE(req.need.size() == 4);
    ConflictGraph g = build_conflict_graph(req, cache);
    for (int a = 0; a < 4; ++a) {
        CHECK(g.degree(a) == 3);
        for (int b = a + 1; b < 4; ++b) CHECK(g.adjacent(a, b));
    }
    CHECK(g.dump_edges() == "4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    CHECK(optimal_color_bruteforce(g) == 4);

    FronthaulLoad mul = multicast_bits(req, kSub);
    FronthaulLoad cod = coded_bits(req, cache, kSub);
    CHECK(mul.count == 4);
    CHECK(cod.count == 4);
    CHECK(cod.bits == mul.bits);
}

TEST_CASE("cross-covering caches: requirements and uncoded loads") {
    auto [cache, req] = cross_cover();
    CHECK(req.need ==
          std::vector<NeedTriple>{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}, {2, 2, 2}});
    CHECK(unicast_bits(req, kSub).bits == 4 * kSub);
    // All four packets are distinct, so multicast saves nothing here.
    CHECK(multicast_bits(req, kSub).bits == 4 * kSub);
}

TEST_CASE("cross-covering caches: conflict structure") {
    auto [cache, req] = cross_cover();
    ConflictGraph g = build_conflict_graph(req, cache);
    REQUIRE(g.order() == 4);

    // Same EN, distinct packets: always in conflict.
    CHECK(g.adjacent(0, 1));
    CHECK(g.adjacent(2, 3));
    // Cross-EN pairs are covered on both sides, hence compatible.
    CHECK_FALSE(g.adjacent(0, 2));
    CHECK_FALSE(g.adjacent(0, 3));
    CHECK_FALSE(g.adjacent(1, 2));
    CHECK_FALSE(g.adjacent(1, 3));

    for (int a = 0; a < 4; ++a) CHECK(g.degree(a) == 1);
    CHECK(g.dump_edges() == "4\n0 1\n2 3\n");
}

TEST_CASE("cross-covering caches: coloring halves the load and stays decodable") {
    auto [cache, req] = cross_cover();
    ConflictGraph g = merge_shared_packets(build_conflict_graph(req, cache));
    REQUIRE(g.order() == 4);

    Coloring col = greedy_color(g);
    CHECK(col.n_colors == 2);
    CHECK(col.color == std::vector<int>{0, 1, 0, 1});
    CHECK(coloring_is_proper(g, col));
    CHECK(is_decodable(g, col, cache));
    CHECK(optimal_color_bruteforce(g) == 2);

    FronthaulLoad cod = coded_bits(req, cache, kSub);
    CHECK(cod.strategy == Strategy::Coded);
    CHECK(cod.count == 2);
    CHECK(cod.bits == 2 * kSub);

    // Pairing the two packets wanted by the same EN is not decodable.
    Coloring bad;
    bad.color = {0, 0, 1, 1};
    bad.n_colors = 2;
    CHECK_FALSE(is_decodable(g, bad, cache));
}

TEST_CASE("merging unions the conflict sets of a shared packet") {
    CacheState cache = CacheState::from_dump(3, 2, 1, kSub, "0\n0\n0\n0\n0\n0\n");
    Demand demand;
    demand.files = {1, 2};
    demand.requested = {1, 2};
    DeliveryRequirement req = compute_requirements(cache, demand, {{1, 2}, {3}});
    REQUIRE(req.need.size() == 3);

    ConflictGraph g = build_conflict_graph(req, cache);
    ConflictGraph m = merge_shared_packets(g);
    REQUIRE(m.order() == 2);
    CHECK(m.v[0].ens == std::vector<int>{1, 2});
    CHECK(m.v[1].ens == std::vector<int>{3});
    CHECK(m.adjacent(0, 1));
    CHECK(greedy_color(m).n_colors == 2);
}

TEST_CASE("compatible vertices all share one color") {
    ConflictGraph g = isolated_vertices(5);
    Coloring col = greedy_color(g);
    CHECK(col.n_colors == 1);
    for (int c : col.color) CHECK(c == 0);
}

TEST_CASE("exhaustive coloring oracle") {
    ConflictGraph tri = isolated_vertices(3);
    link(tri, 0, 1);
    link(tri, 0, 2);
    link(tri, 1, 2);
    CHECK(optimal_color_bruteforce(tri) == 3);
    CHECK(greedy_color(tri).n_colors == 3);

    CHECK(optimal_color_bruteforce(isolated_vertices(4)) == 1);
    CHECK(optimal_color_bruteforce(isolated_vertices(0)) == 0);

    CHECK_THROWS_AS(optimal_color_bruteforce(isolated_vertices(13)),
                    std::invalid_argument);
    CHECK_THROWS_AS(optimal_color_bruteforce(tri, 2), std::invalid_argument);

    // A 5-cycle defeats pure clique reasoning; the exact answer is 3.
    ConflictGraph c5 = isolated_vertices(5);
    for (int i = 0; i < 5; ++i) link(c5, i, (i + 1) % 5);
    CHECK(optimal_color_bruteforce(c5) == 3);
}

TEST_CASE("random instances keep the load ordering and decode everywhere") {
    std::mt19937_64 pick(2024);
    const double mus[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int t = 0; t < 80; ++t) {
        SystemConfig cfg;
        cfg.N = 2 + int(pick() % 3);
        cfg.F = 2 + int(pick() % 4);
        cfg.L = 1 + int(pick() % 6);
        cfg.mu = mus[pick() % 5];
        cfg.M = 1 + int(pick() % cfg.N);
        cfg.S = 1000.0 * cfg.L;

        StreamFactory cache_streams{77, StreamPurpose::Cache, uint64_t(t)};
        CacheState cache = populate_caches(cache_streams, cfg);
        RandomStream drng = StreamFactory{77, StreamPurpose::Demand, uint64_t(t)}.unit(0);
        Demand demand = sample_demand(drng, zipf_pmf(cfg.F, cfg.gamma), cfg.N);
        std::vector<std::vector<int>> serving;
        for (int k = 1; k <= cfg.N; ++k) serving.push_back(serving_set(k, cfg.M, cfg.N));

        DeliveryRequirement req = compute_requirements(cache, demand, serving);
        CHECK(std::is_sorted(req.need.begin(), req.need.end()));
        CHECK(std::adjacent_find(req.need.begin(), req.need.end()) == req.need.end());

        FronthaulLoad uni = unicast_bits(req, cfg.subfile_bits());
        FronthaulLoad mul = multicast_bits(req, cfg.subfile_bits());
        FronthaulLoad cod = coded_bits(req, cache, cfg.subfile_bits());
        CHECK(cod.count <= mul.count);
        CHECK(mul.count <= uni.count);
        CHECK(cod.bits == cod.count * cfg.subfile_bits());

        ConflictGraph merged = merge_shared_packets(build_conflict_graph(req, cache));
        Coloring col = greedy_color(merged);
        CHECK(col.n_colors == cod.count);
        CHECK(coloring_is_proper(merged, col));
        CHECK(is_decodable(merged, col, cache));
        if (merged.order() <= 10) CHECK(col.n_colors >= optimal_color_bruteforce(merged));

        if (cfg.mu == 0.0) CHECK(cod.count == mul.count);
        if (cfg.mu == 1.0) {
            CHECK(uni.count == 0);
            CHECK(mul.count == 0);
            CHECK(cod.count == 0);
        }
    }
}

TEST_CASE("coloring stays proper past one bitset word of vertices") {
    SystemConfig cfg;
    cfg.N = 4;
    cfg.F = 2;
    cfg.L = 30;
    cfg.mu = 0.25;
    cfg.M = 2;
    cfg.S = 30000.0;

    StreamFactory cache_streams{5, StreamPurpose::Cache, 0};
    CacheState cache = populate_caches(cache_streams, cfg);
    Demand demand;
    demand.files = {1, 2, 1, 2};
    demand.requested = {1, 2};
    std::vector<std::vector<int>> serving;
    for (int k = 1; k <= 4; ++k) serving.push_back(serving_set(k, 2, 4));

    DeliveryRequirement req = compute_requirements(cache, demand, serving);
    ConflictGraph g = build_conflict_graph(req, cache);
    REQUIRE(g.order() > 64);

    Coloring col = greedy_color(g);
    CHECK(coloring_is_proper(g, col));
    CHECK(is_decodable(g, col, cache));

    FronthaulLoad cod = coded_bits(req, cache, cfg.subfile_bits());
    CHECK(cod.count <= multicast_bits(req, cfg.subfile_bits()).count);
}

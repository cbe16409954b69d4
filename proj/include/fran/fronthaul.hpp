#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fran/cache.hpp"
#include "fran/model.hpp"

namespace fran {

enum class Strategy { Unicast, Multicast, Coded };

const char* strategy_name(Strategy s);

// One subfile an EN is missing: EN `en` needs packet (file, sub). 1-based.
struct NeedTriple {
    int en, file, sub;
    friend auto operator<=>(const NeedTriple&, const NeedTriple&) = default;
};

// All fronthaul transfer requirements of one realization, deduplicated and
// sorted by (en, file, sub).
struct DeliveryRequirement {
    std::vector<NeedTriple> need;
    Demand demand;
    std::vector<std::vector<int>> serving;  // per UE, 1-based EN indices
};

// Vertices are wanted packets tagged with the ENs that want them; an edge
// forbids the pair from sharing one coded transmission. A vertex built from
// a single requirement triple has ens = {en}; merged vertices carry every
// EN wanting the packet.
struct ConflictGraph {
    struct Vertex {
        int file, sub;
        std::vector<int> ens;  // ascending, 1-based
    };

    std::vector<Vertex> v;
    int nwords = 0;
    std::vector<uint64_t> adj;  // v.size() rows of nwords bitset words

    int order() const { return static_cast<int>(v.size()); }
    const uint64_t* row(int i) const { return adj.data() + size_t(i) * nwords; }
    bool adjacent(int a, int b) const {
        return (row(a)[b / 64] >> (b % 64)) & 1u;
    }
    int degree(int i) const;

    // "<order>\n" then one "u v" line per edge, u < v.
    std::string dump_edges() const;
};

struct FronthaulLoad {
    Strategy strategy;
    double bits;  // S_B
    long count;   // transmissions of one subfile size each; n_sub for Coded
};

struct Coloring {
    std::vector<int> color;  // per vertex, 0-based color ids
    int n_colors = 0;
};

// Missing subfiles per (serving EN, requested file) under the given demand.
DeliveryRequirement compute_requirements(const CacheState& cache, const Demand& demand,
                                         const std::vector<std::vector<int>>& serving);

// Every requirement is sent separately: S_B = |d| * subfile_bits.
FronthaulLoad unicast_bits(const DeliveryRequirement& req, double subfile_bits);

// Each distinct packet is sent once: S_B = #distinct(file,sub) * subfile_bits.
FronthaulLoad multicast_bits(const DeliveryRequirement& req, double subfile_bits);

// One vertex per requirement triple; u,v conflict iff their packets differ
// and not (u's EN caches v's packet and v's EN caches u's packet).
ConflictGraph build_conflict_graph(const DeliveryRequirement& req, const CacheState& cache);

// Collapse vertices with identical packets; conflict sets are unioned.
ConflictGraph merge_shared_packets(const ConflictGraph& g);

// First-fit greedy coloring, vertices ordered by decreasing conflict degree,
// ties broken by (smallest EN, file, sub).
Coloring greedy_color(const ConflictGraph& g);

// Conflict graph -> merge -> greedy colors; S_B = n_colors * subfile_bits.
FronthaulLoad coded_bits(const DeliveryRequirement& req, const CacheState& cache,
                         double subfile_bits);

// Exact chromatic number by branch and bound; throws std::invalid_argument
// above max_vertices.
int optimal_color_bruteforce(const ConflictGraph& g, int max_vertices = 12);

// True iff within every color class, each EN wanting a packet caches all
// other distinct packets of the class.
bool is_decodable(const ConflictGraph& g, const Coloring& coloring, const CacheState& cache);

}  // namespace fran

#include "fran/fronthaul.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "fran/kernels.hpp"

namespace fran {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Unicast: return "unicast";
        case Strategy::Multicast: return "multicast";
        case Strategy::Coded: return "coded";
    }
    return "?";
}

int ConflictGraph::degree(int i) const {
    int d = 0;
    const uint64_t* r = row(i);
    for (int w = 0; w < nwords; ++w) d += __builtin_popcountll(r[w]);
    return d;
}

std::string ConflictGraph::dump_edges() const {
    std::string out = std::to_string(order()) + "\n";
    for (int a = 0; a < order(); ++a)
        for (int b = a + 1; b < order(); ++b)
            if (adjacent(a, b)) out += std::to_string(a) + " " + std::to_string(b) + "\n";
    return out;
}

DeliveryRequirement compute_requirements(const CacheState& cache, const Demand& demand,
                                         const std::vector<std::vector<int>>& serving) {
    DeliveryRequirement req;
    req.demand = demand;
    req.serving = serving;
    const int L = cache.subfiles_per_file();
    for (size_t k = 0; k < serving.size(); ++k) {
        int file = demand.files[k];
        for (int en : serving[k]) {
            for (int l = 1; l <= L; ++l)
                if (!cache.cached0(en - 1, file - 1, l - 1))
                    req.need.push_back({en, file, l});
        }
    }
    std::sort(req.need.begin(), req.need.end());
    req.need.erase(std::unique(req.need.begin(), req.need.end()), req.need.end());
    return req;
}

FronthaulLoad unicast_bits(const DeliveryRequirement& req, double subfile_bits) {
    long n = static_cast<long>(req.need.size());
    return {Strategy::Unicast, n * subfile_bits, n};
}

FronthaulLoad multicast_bits(const DeliveryRequirement& req, double subfile_bits) {
    std::vector<std::pair<int, int>> pk;
    pk.reserve(req.need.size());
    for (const NeedTriple& t : req.need) pk.emplace_back(t.file, t.sub);
    std::sort(pk.begin(), pk.end());
    long n = static_cast<long>(std::unique(pk.begin(), pk.end()) - pk.begin());
    return {Strategy::Multicast, n * subfile_bits, n};
}

namespace {

void set_edge(ConflictGraph& g, int a, int b) {
    g.adj[size_t(a) * g.nwords + b / 64] |= uint64_t(1) << (b % 64);
    g.adj[size_t(b) * g.nwords + a / 64] |= uint64_t(1) << (a % 64);
}

// conflict test for single-EN vertices
bool conflicts(const CacheState& cache, const NeedTriple& u, const NeedTriple& v) {
    if (u.file == v.file && u.sub == v.sub) return false;
    bool u_covers = cache.cached0(u.en - 1, v.file - 1, v.sub - 1);
    bool v_covers = cache.cached0(v.en - 1, u.file - 1, u.sub - 1);
    return !(u_covers && v_covers);
}

}  // namespace

ConflictGraph build_conflict_graph(const DeliveryRequirement& req, const CacheState& cache) {
    ConflictGraph g;
    const int n = static_cast<int>(req.need.size());
    g.v.resize(n);
    for (int i = 0; i < n; ++i)
        g.v[i] = {req.need[i].file, req.need[i].sub, {req.need[i].en}};
    g.nwords = (n + 63) / 64;
    g.adj.assign(size_t(n) * g.nwords, 0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (conflicts(cache, req.need[a], req.need[b])) set_edge(g, a, b);
    return g;
}

ConflictGraph merge_shared_packets(const ConflictGraph& g) {
    std::map<std::pair<int, int>, int> packet_group;
    std::vector<int> group_of(g.order());
    ConflictGraph m;
    for (int i = 0; i < g.order(); ++i) {
        auto key = std::make_pair(g.v[i].file, g.v[i].sub);
        auto [it, fresh] = packet_group.try_emplace(key, static_cast<int>(m.v.size()));
        if (fresh) m.v.push_back({g.v[i].file, g.v[i].sub, {}});
        group_of[i] = it->second;
        auto& ens = m.v[it->second].ens;
        ens.insert(ens.end(), g.v[i].ens.begin(), g.v[i].ens.end());
    }
    for (auto& vert : m.v) {
        std::sort(vert.ens.begin(), vert.ens.end());
        vert.ens.erase(std::unique(vert.ens.begin(), vert.ens.end()), vert.ens.end());
    }
    const int n = m.order();
    m.nwords = (n + 63) / 64;
    m.adj.assign(size_t(n) * m.nwords, 0);
    for (int a = 0; a < g.order(); ++a) {
        const uint64_t* r = g.row(a);
        for (int w = 0; w < g.nwords; ++w) {
            uint64_t bits = r[w];
            while (bits) {
                int b = w * 64 + __builtin_ctzll(bits);
                bits &= bits - 1;
                if (group_of[a] != group_of[b]) set_edge(m, group_of[a], group_of[b]);
            }
        }
    }
    return m;
}

Coloring greedy_color(const ConflictGraph& g) {
    const int n = g.order();
    Coloring out;
    out.color.assign(n, -1);
    if (n == 0) return out;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> deg(n);
    for (int i = 0; i < n; ++i) deg[i] = g.degree(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (deg[a] != deg[b]) return deg[a] > deg[b];
        const auto& va = g.v[a];
        const auto& vb = g.v[b];
        return std::tuple(va.ens.front(), va.file, va.sub) <
               std::tuple(vb.ens.front(), vb.file, vb.sub);
    });

    std::vector<std::vector<uint64_t>> class_bits;
    const auto& k = kernels::active();
    for (int v : order) {
        int c = 0;
        for (; c < static_cast<int>(class_bits.size()); ++c)
            if (!k.and_any(g.nwords, g.row(v), class_bits[c].data())) break;
        if (c == static_cast<int>(class_bits.size()))
            class_bits.emplace_back(g.nwords, 0);
        class_bits[c][v / 64] |= uint64_t(1) << (v % 64);
        out.color[v] = c;
    }
    out.n_colors = static_cast<int>(class_bits.size());
    return out;
}

FronthaulLoad coded_bits(const DeliveryRequirement& req, const CacheState& cache,
                         double subfile_bits) {
    ConflictGraph g = merge_shared_packets(build_conflict_graph(req, cache));
    Coloring col = greedy_color(g);
    return {Strategy::Coded, col.n_colors * subfile_bits, col.n_colors};
}

namespace {

bool kcolorable(const ConflictGraph& g, const std::vector<int>& order, int kmax,
                std::vector<int>& color, int pos) {
    if (pos == g.order()) return true;
    int v = order[pos];
    int used = 0;
    for (int i = 0; i < pos; ++i) used = std::max(used, color[order[i]] + 1);
    int limit = std::min(kmax, used + 1);  // first use of a fresh color: lowest id only
    for (int c = 0; c < limit; ++c) {
        bool ok = true;
        for (int i = 0; i < pos && ok; ++i)
            if (color[order[i]] == c && g.adjacent(v, order[i])) ok = false;
        if (!ok) continue;
        color[v] = c;
        if (kcolorable(g, order, kmax, color, pos + 1)) return true;
        color[v] = -1;
    }
    return false;
}

}  // namespace

int optimal_color_bruteforce(const ConflictGraph& g, int max_vertices) {
    const int n = g.order();
    if (n > max_vertices)
        throw std::invalid_argument("optimal_color_bruteforce: instance too large");
    if (n == 0) return 0;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> deg(n);
    for (int i = 0; i < n; ++i) deg[i] = g.degree(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return deg[a] > deg[b]; });
    for (int k = 1; k <= n; ++k) {
        std::vector<int> color(n, -1);
        if (kcolorable(g, order, k, color, 0)) return k;
    }
    return n;
}

bool is_decodable(const ConflictGraph& g, const Coloring& coloring, const CacheState& cache) {
    for (int a = 0; a < g.order(); ++a) {
        for (int b = 0; b < g.order(); ++b) {
            if (a == b || coloring.color[a] != coloring.color[b]) continue;
            if (g.v[a].file == g.v[b].file && g.v[a].sub == g.v[b].sub) continue;
            for (int en : g.v[a].ens)
                if (!cache.cached0(en - 1, g.v[b].file - 1, g.v[b].sub - 1)) return false;
        }
    }
    return true;
}

}  // namespace fran

#include "afib/hvg.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace afib {

namespace {

void add_edge(HvGraph& g, int a, int b) {
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
}

}  // namespace

HvGraph build_hvg(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    if (n < 1) {
        throw Error(ErrorCode::SeriesTooShort, "visibility graph needs at least 1 value");
    }
    HvGraph g;
    g.vertex_count = static_cast<std::size_t>(n);

    // Stack holds indices still visible from the right, values strictly
    // decreasing bottom to top. A new value pops (and links) everything it
    // hides; an equal value also hides the stack top.
    std::vector<int> stack;
    stack.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        while (!stack.empty() && values[stack.back()] < values[t]) {
            add_edge(g, stack.back(), t);
            stack.pop_back();
        }
        if (!stack.empty()) {
            add_edge(g, stack.back(), t);
            if (values[stack.back()] == values[t]) stack.pop_back();
        }
        stack.push_back(t);
    }

    g.adjacency.assign(g.vertex_count, {});
    g.degrees.assign(g.vertex_count, 0);
    for (const auto& [a, b] : g.edges) {
        g.adjacency[static_cast<std::size_t>(a)].push_back(b);
        g.adjacency[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
    for (std::size_t v = 0; v < g.vertex_count; ++v) {
        g.degrees[v] = static_cast<int>(g.adjacency[v].size());
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

HvGraph build_hvg(const IbiSequence& ibi) { return build_hvg(ibi.intervals_ms); }

std::vector<int> eccentricities(const HvGraph& g) {
    const int n = static_cast<int>(g.vertex_count);
    std::vector<int> ecc(g.vertex_count, 0);
    std::vector<int> dist(g.vertex_count);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        std::queue<int> q;
        q.push(s);
        int furthest = 0;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            furthest = std::max(furthest, dist[static_cast<std::size_t>(u)]);
            for (int v : g.adjacency[static_cast<std::size_t>(u)]) {
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    q.push(v);
                }
            }
        }
        ecc[static_cast<std::size_t>(s)] = furthest;
    }
    return ecc;
}

int radius(const HvGraph& g) {
    if (g.vertex_count == 0) {
        throw Error(ErrorCode::SeriesTooShort, "radius of an empty graph is undefined");
    }
    const auto ecc = eccentricities(g);
    return *std::min_element(ecc.begin(), ecc.end());
}

int hvg_radius(const IbiSequence& ibi) { return radius(build_hvg(ibi)); }

MixingMatrix mixing_matrix(const HvGraph& g) {
    if (g.edges.empty()) {
        throw Error(ErrorCode::NoEdges, "mixing matrix needs at least one edge");
    }
    MixingMatrix m;
    const double half = 1.0 / (2.0 * static_cast<double>(g.edges.size()));
    for (const auto& [u, v] : g.edges) {
        const int a = g.degrees[static_cast<std::size_t>(u)];
        const int b = g.degrees[static_cast<std::size_t>(v)];
        m.entries[{a, b}] += half;
        m.entries[{b, a}] += half;
    }
    return m;
}

double mixing_entropy(const MixingMatrix& m) {
    double s = 0.0;
    for (const auto& [degrees, e] : m.entries) {
        if (e > 0.0) s += e * std::log(e);
    }
    return s;
}

double hvg_disassortative_entropy(const IbiSequence& ibi) {
    if (ibi.size() < 2) {
        throw Error(ErrorCode::SeriesTooShort, "disassortative entropy needs at least 2 intervals");
    }
    return mixing_entropy(mixing_matrix(build_hvg(ibi)));
}

}  // namespace afib

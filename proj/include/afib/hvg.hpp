#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "afib/types.hpp"

namespace afib {

/// Undirected horizontal visibility graph over one interval series. Vertices
/// are series indices (0-based); vertices a < b are joined iff every value
/// strictly between them lies strictly below min(values[a], values[b]).
/// Equal intermediate values block visibility, so adjacent indices are always
/// joined and the graph is connected and outerplanar (edge count <= 2N - 3).
struct HvGraph {
    std::size_t vertex_count = 0;
    std::vector<std::pair<int, int>> edges;   // (a, b) with a < b
    std::vector<std::vector<int>> adjacency;  // sorted neighbor lists
    std::vector<int> degrees;
};

/// Joint degree distribution over edge endpoints: entries[{a, b}] is the
/// fraction of half-edges joining a degree-a vertex to a degree-b vertex.
/// Symmetric; entries sum to 1.
struct MixingMatrix {
    std::map<std::pair<int, int>, double> entries;
};

/// Monotonic-stack sweep, O(N) amortized.
HvGraph build_hvg(const std::vector<double>& values);
HvGraph build_hvg(const IbiSequence& ibi);

/// Breadth-first distances from every vertex.
std::vector<int> eccentricities(const HvGraph& g);

/// Minimum eccentricity. A single vertex has radius 0.
int radius(const HvGraph& g);
int hvg_radius(const IbiSequence& ibi);

MixingMatrix mixing_matrix(const HvGraph& g);

/// Sum of e * ln(e) over nonzero mixing-matrix entries; always <= 0.
double mixing_entropy(const MixingMatrix& m);
double hvg_disassortative_entropy(const IbiSequence& ibi);

}  // namespace afib

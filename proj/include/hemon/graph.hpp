#pragma once

#include <utility>
#include <vector>

#include "hemon/error.hpp"

namespace hemon::graph {

using NodeId = int;

struct WeightedEdge {
    NodeId u = 0;
    NodeId v = 0;
    double w = 0.0;
};

// Ordered vertex sequence along graph edges. A single vertex is a valid
// degenerate path of length 0.
struct Path {
    std::vector<NodeId> vertices;

    Path() = default;
    explicit Path(std::vector<NodeId> v) : vertices(std::move(v)) {}

    int length() const { return static_cast<int>(vertices.size()) - 1; }
    bool operator==(const Path&) const = default;
};

// Union-find over node ids 0..n-1: path halving + union by rank.
class DisjointSet {
public:
    explicit DisjointSet(int n);

    NodeId find(NodeId x);
    // Merges the classes of a and b; returns false if already joined.
    bool unite(NodeId a, NodeId b);

private:
    std::vector<NodeId> parent_;
    std::vector<int> rank_;
};

// Undirected weighted graph over node ids 0..N-1. No self-loops, no
// duplicate pairs, all weights finite. Immutable after construction.
class WeightedGraph {
public:
    WeightedGraph(int node_count, std::vector<WeightedEdge> edges);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    // Edges normalized to u < v, sorted by (u, v).
    const std::vector<WeightedEdge>& edges() const { return edges_; }
    const std::vector<NodeId>& neighbors(NodeId v) const;
    int degree(NodeId v) const;

private:
    int node_count_;
    std::vector<WeightedEdge> edges_;
    std::vector<std::vector<NodeId>> adj_;  // ascending per node
};

// Unweighted tree over node ids 0..N-1; edges carry implicit weight 1.
// Construction checks the N-1 edge count and connectivity.
class Tree {
public:
    Tree(int node_count, std::vector<std::pair<NodeId, NodeId>> edges);

    int node_count() const { return node_count_; }
    // Edges normalized to u < v, sorted by (u, v).
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    const std::vector<NodeId>& neighbors(NodeId v) const;
    int degree(NodeId v) const;

private:
    int node_count_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<std::vector<NodeId>> adj_;  // ascending per node
};

// Vertex-disjoint union of trees over a subset of node ids. Construction
// rejects cycles. Immutable after construction.
class Forest {
public:
    Forest(std::vector<NodeId> nodes, std::vector<std::pair<NodeId, NodeId>> edges);

    const std::vector<NodeId>& nodes() const { return nodes_; }  // ascending
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    int component_count() const { return component_count_; }
    // Component index of a contained node; components numbered by smallest
    // contained node id.
    int component_of(NodeId v) const;

private:
    std::vector<NodeId> nodes_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<int> component_;  // dense over max id + 1; -1 = absent
    int component_count_ = 0;
};

// A forest component: a Tree over local ids 0..k-1 plus its original node
// labels (ascending; labels[local] = original id).
struct LabeledTree {
    Tree tree;
    std::vector<NodeId> labels;
};

// Kruskal over edges sorted by descending weight, ties by ascending
// (min id, max id). Throws DataError on a disconnected input, naming the
// components. The result carries unit edge weights by construction.
Tree max_spanning_tree(const WeightedGraph& g);

// The unique tree path from u to v (inclusive); u == v gives the degenerate
// single-vertex path.
Path shortest_path(const Tree& t, NodeId u, NodeId v);

// A path realizing the tree diameter, found by double traversal. Ties are
// broken toward smaller node ids and the sequence starts from the
// smaller-id endpoint, so the result is deterministic.
Path longest_shortest_path(const Tree& t);

int diameter(const Tree& t);

// Components ordered by smallest contained node id.
std::vector<LabeledTree> connected_components(const Forest& f);

}  // namespace hemon::graph

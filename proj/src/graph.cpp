#include "hemon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <string>

namespace hemon::graph {

namespace {

void check_node_id(NodeId v, int node_count, const char* what) {
    if (v < 0 || v >= node_count) {
        throw DataError(std::string(what) + ": node id " + std::to_string(v) +
                        " out of range [0, " + std::to_string(node_count) + ")");
    }
}

std::vector<std::vector<NodeId>> build_adjacency(int node_count,
                                                 const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<std::vector<NodeId>> adj(node_count);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

// BFS over an adjacency list; returns distances (-1 unreachable) and parents.
struct BfsResult {
    std::vector<int> dist;
    std::vector<NodeId> parent;
};

BfsResult bfs(const std::vector<std::vector<NodeId>>& adj, NodeId start) {
    BfsResult r;
    r.dist.assign(adj.size(), -1);
    r.parent.assign(adj.size(), -1);
    std::deque<NodeId> queue{start};
    r.dist[start] = 0;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : adj[u]) {
            if (r.dist[v] < 0) {
                r.dist[v] = r.dist[u] + 1;
                r.parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    return r;
}

// Farthest node from start, preferring the smallest id among ties.
NodeId farthest_from(const BfsResult& r) {
    NodeId best = -1;
    int best_dist = -1;
    for (NodeId v = 0; v < static_cast<NodeId>(r.dist.size()); ++v) {
        if (r.dist[v] > best_dist) {
            best_dist = r.dist[v];
            best = v;
        }
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// DisjointSet
// ---------------------------------------------------------------------------

DisjointSet::DisjointSet(int n) : parent_(n), rank_(n, 0) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
}

NodeId DisjointSet::find(NodeId x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSet::unite(NodeId a, NodeId b) {
    NodeId ra = find(a);
    NodeId rb = find(b);
    if (ra == rb) return false;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    return true;
}

// ---------------------------------------------------------------------------
// WeightedGraph
// ---------------------------------------------------------------------------

WeightedGraph::WeightedGraph(int node_count, std::vector<WeightedEdge> edges)
    : node_count_(node_count) {
    if (node_count <= 0) {
        throw DataError("graph must have at least one node (got " +
                        std::to_string(node_count) + ")");
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    edges_.reserve(edges.size());
    for (WeightedEdge e : edges) {
        check_node_id(e.u, node_count, "edge endpoint");
        check_node_id(e.v, node_count, "edge endpoint");
        if (e.u == e.v) {
            throw DataError("self-loop on node " + std::to_string(e.u));
        }
        if (!std::isfinite(e.w)) {
            throw DataError("non-finite weight on edge (" + std::to_string(e.u) + ", " +
                            std::to_string(e.v) + ")");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!seen.insert({e.u, e.v}).second) {
            throw DataError("duplicate edge (" + std::to_string(e.u) + ", " +
                            std::to_string(e.v) + ")");
        }
        edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    adj_.assign(node_count_, {});
    for (const auto& e : edges_) {
        adj_[e.u].push_back(e.v);
        adj_[e.v].push_back(e.u);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

const std::vector<NodeId>& WeightedGraph::neighbors(NodeId v) const {
    check_node_id(v, node_count_, "neighbors");
    return adj_[v];
}

int WeightedGraph::degree(NodeId v) const {
    check_node_id(v, node_count_, "degree");
    return static_cast<int>(adj_[v].size());
}

// ---------------------------------------------------------------------------
// Tree
// ---------------------------------------------------------------------------

Tree::Tree(int node_count, std::vector<std::pair<NodeId, NodeId>> edges)
    : node_count_(node_count) {
    if (node_count <= 0) {
        throw DataError("tree must have at least one node (got " +
                        std::to_string(node_count) + ")");
    }
    if (static_cast<int>(edges.size()) != node_count - 1) {
        throw DataError("tree over " + std::to_string(node_count) + " nodes needs " +
                        std::to_string(node_count - 1) + " edges, got " +
                        std::to_string(edges.size()));
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    for (auto& [u, v] : edges) {
        check_node_id(u, node_count, "tree edge endpoint");
        check_node_id(v, node_count, "tree edge endpoint");
        if (u == v) throw DataError("self-loop on node " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second) {
            throw DataError("duplicate tree edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ")");
        }
    }
    edges_ = std::move(edges);
    std::sort(edges_.begin(), edges_.end());
    adj_ = build_adjacency(node_count_, edges_);

    // N-1 edges + connected implies acyclic.
    auto r = bfs(adj_, 0);
    for (NodeId v = 0; v < node_count_; ++v) {
        if (r.dist[v] < 0) {
            throw DataError("tree edges do not connect node " + std::to_string(v));
        }
    }
}

const std::vector<NodeId>& Tree::neighbors(NodeId v) const {
    check_node_id(v, node_count_, "neighbors");
    return adj_[v];
}

int Tree::degree(NodeId v) const {
    check_node_id(v, node_count_, "degree");
    return static_cast<int>(adj_[v].size());
}

// ---------------------------------------------------------------------------
// Forest
// ---------------------------------------------------------------------------

Forest::Forest(std::vector<NodeId> nodes, std::vector<std::pair<NodeId, NodeId>> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    if (nodes_.empty()) throw DataError("forest must contain at least one node");
    if (nodes_.front() < 0) throw DataError("negative node id in forest");

    const int cap = nodes_.back() + 1;
    component_.assign(cap, -1);
    for (NodeId v : nodes_) component_[v] = -2;  // present, unlabeled

    DisjointSet ds(cap);
    for (auto& [u, v] : edges_) {
        if (u < 0 || u >= cap || component_[u] == -1 || v < 0 || v >= cap ||
            component_[v] == -1) {
            throw DataError("forest edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") references a node outside the forest");
        }
        if (u == v) throw DataError("self-loop on node " + std::to_string(u));
        if (!ds.unite(u, v)) {
            throw DataError("forest contains a cycle through (" + std::to_string(u) + ", " +
                            std::to_string(v) + ")");
        }
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    // Label components in order of smallest contained node id.
    std::vector<int> root_label(cap, -1);
    for (NodeId v : nodes_) {
        NodeId r = ds.find(v);
        if (root_label[r] < 0) root_label[r] = component_count_++;
        component_[v] = root_label[r];
    }
}

int Forest::component_of(NodeId v) const {
    if (v < 0 || v >= static_cast<int>(component_.size()) || component_[v] < 0) {
        throw DataError("node " + std::to_string(v) + " is not in the forest");
    }
    return component_[v];
}

std::vector<LabeledTree> connected_components(const Forest& f) {
    std::vector<std::vector<NodeId>> comp_nodes(f.component_count());
    for (NodeId v : f.nodes()) comp_nodes[f.component_of(v)].push_back(v);

    std::vector<std::vector<std::pair<NodeId, NodeId>>> comp_edges(f.component_count());
    for (const auto& [u, v] : f.edges()) comp_edges[f.component_of(u)].push_back({u, v});

    std::vector<LabeledTree> out;
    out.reserve(f.component_count());
    for (int c = 0; c < f.component_count(); ++c) {
        const auto& labels = comp_nodes[c];  // ascending already
        std::vector<std::pair<NodeId, NodeId>> local;
        local.reserve(comp_edges[c].size());
        for (const auto& [u, v] : comp_edges[c]) {
            auto lu = static_cast<NodeId>(
                std::lower_bound(labels.begin(), labels.end(), u) - labels.begin());
            auto lv = static_cast<NodeId>(
                std::lower_bound(labels.begin(), labels.end(), v) - labels.begin());
            local.push_back({lu, lv});
        }
        out.push_back(LabeledTree{Tree(static_cast<int>(labels.size()), std::move(local)), labels});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Algorithms
// ---------------------------------------------------------------------------

Tree max_spanning_tree(const WeightedGraph& g) {
    const int n = g.node_count();
    std::vector<WeightedEdge> order = g.edges();
    std::sort(order.begin(), order.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        if (a.w != b.w) return a.w > b.w;
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });

    DisjointSet ds(n);
    std::vector<std::pair<NodeId, NodeId>> chosen;
    chosen.reserve(n - 1);
    for (const auto& e : order) {
        if (ds.unite(e.u, e.v)) {
            chosen.push_back({e.u, e.v});
            if (static_cast<int>(chosen.size()) == n - 1) break;
        }
    }

    if (static_cast<int>(chosen.size()) != n - 1) {
        // Disconnected: report the components.
        std::vector<std::vector<NodeId>> groups;
        std::vector<int> label(n, -1);
        for (NodeId v = 0; v < n; ++v) {
            NodeId r = ds.find(v);
            if (label[r] < 0) {
                label[r] = static_cast<int>(groups.size());
                groups.emplace_back();
            }
            groups[label[r]].push_back(v);
        }
        std::ostringstream msg;
        msg << "graph is disconnected: " << groups.size() << " components:";
        for (const auto& grp : groups) {
            msg << " {";
            for (std::size_t i = 0; i < grp.size() && i < 8; ++i) {
                if (i) msg << ",";
                msg << grp[i];
            }
            if (grp.size() > 8) msg << ",... " << grp.size() << " nodes";
            msg << "}";
        }
        throw DataError(msg.str());
    }
    return Tree(n, std::move(chosen));
}

Path shortest_path(const Tree& t, NodeId u, NodeId v) {
    check_node_id(u, t.node_count(), "shortest_path");
    check_node_id(v, t.node_count(), "shortest_path");
    if (u == v) return Path({u});

    std::vector<std::vector<NodeId>> adj(t.node_count());
    for (NodeId x = 0; x < t.node_count(); ++x) adj[x] = t.neighbors(x);
    auto r = bfs(adj, u);

    std::vector<NodeId> seq;
    for (NodeId cur = v; cur != -1; cur = r.parent[cur]) seq.push_back(cur);
    std::reverse(seq.begin(), seq.end());
    return Path(std::move(seq));
}

Path longest_shortest_path(const Tree& t) {
    if (t.node_count() == 1) return Path({0});

    std::vector<std::vector<NodeId>> adj(t.node_count());
    for (NodeId x = 0; x < t.node_count(); ++x) adj[x] = t.neighbors(x);

    NodeId a = farthest_from(bfs(adj, 0));
    auto second = bfs(adj, a);
    NodeId b = farthest_from(second);

    std::vector<NodeId> seq;
    for (NodeId cur = b; cur != -1; cur = second.parent[cur]) seq.push_back(cur);
    std::reverse(seq.begin(), seq.end());  // now runs a -> b
    if (seq.back() < seq.front()) std::reverse(seq.begin(), seq.end());
    return Path(std::move(seq));
}

int diameter(const Tree& t) {
    return longest_shortest_path(t).length();
}

}  // namespace hemon::graph

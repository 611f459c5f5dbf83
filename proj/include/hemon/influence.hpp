#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hemon/graph.hpp"

namespace hemon::influence {

// Closed-form influence of node v on node u over a unit-weight tree: after
// k = dist(u, v) random-walk propagation steps the Jacobian of u's
// representation with respect to v's initial feature is a scalar multiple of
// the identity, and its induced norm is
//     1 / (d_u * d_{p1} * ... * d_{p_{k-1}})
// with degrees taken along the unique u-v path (p1..p_{k-1} are the interior
// nodes). For u == v the Jacobian is the identity and the value is 1.
double node_influence_closed(const graph::Tree& t, graph::NodeId u, graph::NodeId v);

// Independent oracle for the closed form: entry (u, v) of the k-th power of
// the row-normalized adjacency operator P = D^-1 A, in absolute value. At
// k = dist(u, v) the only length-k walk from u to v is the tree path, so
// this must match node_influence_closed.
double node_influence_oracle(const graph::Tree& t, graph::NodeId u, graph::NodeId v, int steps);

// Same oracle with the walk-operator powers cached, for bulk audits.
class RandomWalkOracle {
public:
    explicit RandomWalkOracle(const graph::Tree& t);

    double value(graph::NodeId u, graph::NodeId v, int steps) const;

private:
    int node_count_;
    Eigen::MatrixXd step_;                           // D^-1 A
    mutable std::vector<Eigen::MatrixXd> powers_;    // powers_[k] = step_^k
};

// Sum of pairwise influences over all ordered vertex pairs of a path, with
// degrees taken within the path subgraph (endpoints 1, interiors 2). The
// degenerate single-vertex path carries no information (0).
double path_information_literal(const graph::Path& p);

// Information carried by a diameter path as a function of the diameter d:
//     sum_{k=1}^{d} (d - k + 1) * 2 / 2^(k-1)
// counting every unordered pair at distance k as contributing 2/2^(k-1).
// d == 0 gives 0. Note this over-counts pairs whose nearer node is interior
// to the path (their literal value is 1/2^k, not 1/2^(k-1)); see
// path_information_literal for the per-pair form actually realized.
double path_information_closed_form(int d);

// Exhaustive search for the path with maximum literal path information,
// enumerating the unique path of every vertex pair. Guarded to small trees;
// ties resolved toward lexicographically smallest (endpoint, endpoint).
graph::Path max_information_path_bruteforce(const graph::Tree& t);

inline constexpr int kBruteForceNodeLimit = 14;

}  // namespace hemon::influence

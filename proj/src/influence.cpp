#include "hemon/influence.hpp"

#include <cmath>
#include <string>

namespace hemon::influence {

using graph::NodeId;
using graph::Path;
using graph::Tree;

double node_influence_closed(const Tree& t, NodeId u, NodeId v) {
    if (u == v) {
        t.degree(u);  // id check
        return 1.0;
    }
    const Path p = graph::shortest_path(t, u, v);
    // Denominator: receiver degree and interior degrees; the source node's
    // degree does not appear.
    double denom = t.degree(p.vertices.front());
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) {
        denom *= t.degree(p.vertices[i]);
    }
    return 1.0 / denom;
}

RandomWalkOracle::RandomWalkOracle(const Tree& t) : node_count_(t.node_count()) {
    step_ = Eigen::MatrixXd::Zero(node_count_, node_count_);
    for (NodeId u = 0; u < node_count_; ++u) {
        const double d = static_cast<double>(t.degree(u));
        for (NodeId v : t.neighbors(u)) step_(u, v) = 1.0 / d;
    }
    powers_.push_back(Eigen::MatrixXd::Identity(node_count_, node_count_));
}

double RandomWalkOracle::value(NodeId u, NodeId v, int steps) const {
    if (u < 0 || u >= node_count_ || v < 0 || v >= node_count_) {
        throw DataError("oracle: node id out of range");
    }
    if (steps < 0) throw DataError("oracle: negative step count");
    while (static_cast<int>(powers_.size()) <= steps) {
        powers_.push_back(powers_.back() * step_);
    }
    return std::abs(powers_[steps](u, v));
}

double node_influence_oracle(const Tree& t, NodeId u, NodeId v, int steps) {
    return RandomWalkOracle(t).value(u, v, steps);
}

double path_information_literal(const Path& p) {
    const int m = p.length();
    if (m < 0) throw DataError("path information of an empty vertex sequence");
    if (m == 0) return 0.0;

    // The path viewed as its own tree: a chain of m+1 nodes.
    std::vector<std::pair<NodeId, NodeId>> chain;
    chain.reserve(m);
    for (int i = 0; i < m; ++i) chain.push_back({i, i + 1});
    const Tree path_tree(m + 1, std::move(chain));

    double total = 0.0;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            if (i != j) total += node_influence_closed(path_tree, i, j);
        }
    }
    return total;
}

double path_information_closed_form(int d) {
    if (d < 0) throw DataError("negative diameter");
    double total = 0.0;
    for (int k = 1; k <= d; ++k) {
        total += (d - k + 1) * 2.0 / std::exp2(k - 1);
    }
    return total;
}

Path max_information_path_bruteforce(const Tree& t) {
    const int n = t.node_count();
    if (n > kBruteForceNodeLimit) {
        throw DataError("brute-force path search limited to " +
                        std::to_string(kBruteForceNodeLimit) + " nodes, got " +
                        std::to_string(n));
    }
    if (n == 1) return Path({0});

    Path best;
    double best_info = -1.0;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            Path p = graph::shortest_path(t, u, v);
            const double info = path_information_literal(p);
            if (info > best_info) {
                best_info = info;
                best = std::move(p);
            }
        }
    }
    return best;
}

}  // namespace hemon::influence

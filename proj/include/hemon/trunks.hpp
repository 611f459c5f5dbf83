#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hemon/connectome.hpp"
#include "hemon/graph.hpp"

namespace hemon::trunks {

// One trunk: the longest shortest path extracted from component
// `component_index` (1-based) of the forest at level `level` (1-based).
// A single-node component yields a degenerate length-0 trunk.
struct Trunk {
    int level = 0;
    int component_index = 0;
    graph::Path path;

    bool operator==(const Trunk&) const = default;
};

// Leveled trunk decomposition of a tree. Trunks within a level are
// vertex-disjoint; the trunk edge sets across all levels partition the
// tree's edges; every node appears in at least one level's area. Areas at
// different levels may share junction nodes.
class TrunkHierarchy {
public:
    TrunkHierarchy(int node_count, std::vector<std::vector<Trunk>> levels);

    int node_count() const { return node_count_; }
    int level_count() const { return static_cast<int>(levels_.size()); }
    const std::vector<Trunk>& trunks_at(int level) const;   // level is 1-based
    const std::vector<graph::NodeId>& area_nodes(int level) const;  // sorted ascending
    const std::vector<std::vector<Trunk>>& levels() const { return levels_; }

    bool operator==(const TrunkHierarchy&) const = default;

private:
    int node_count_ = 0;
    std::vector<std::vector<Trunk>> levels_;
    std::vector<std::vector<graph::NodeId>> areas_;
};

// Node set of one level of the hierarchy, optionally joined against an
// atlas for per-system counts.
struct EmotionalArea {
    int level = 0;
    std::vector<graph::NodeId> nodes;
};

// Iterated longest-shortest-path removal: per level, extract the diameter
// path of every forest component as a trunk, drop its edges, then drop the
// nodes that became isolated; repeat until no nodes remain.
TrunkHierarchy decompose(const graph::Tree& t);

EmotionalArea area_at(const TrunkHierarchy& h, int level);

// Tally of functional systems over an area's nodes.
std::map<std::string, int> system_composition(const EmotionalArea& area,
                                              const connectome::RoiAtlas& atlas);

// JSON schema: {levels:[{level, trunks:[[node ids]]}], areas:[[node ids]]}.
nlohmann::json export_hierarchy(const TrunkHierarchy& h);
TrunkHierarchy import_hierarchy(const nlohmann::json& doc);

}  // namespace hemon::trunks

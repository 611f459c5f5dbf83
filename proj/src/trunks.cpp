#include "hemon/trunks.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

namespace hemon::trunks {

using graph::NodeId;
using graph::Path;
using graph::Tree;

TrunkHierarchy::TrunkHierarchy(int node_count, std::vector<std::vector<Trunk>> levels)
    : node_count_(node_count), levels_(std::move(levels)) {
    if (node_count_ <= 0) throw DataError("hierarchy must cover at least one node");
    if (levels_.empty()) throw DataError("hierarchy has no levels");

    areas_.reserve(levels_.size());
    std::vector<bool> covered(node_count_, false);
    for (std::size_t li = 0; li < levels_.size(); ++li) {
        if (levels_[li].empty()) {
            throw DataError("hierarchy level " + std::to_string(li + 1) + " has no trunks");
        }
        std::set<NodeId> area;
        for (const Trunk& t : levels_[li]) {
            if (t.level != static_cast<int>(li + 1)) {
                throw DataError("trunk level mismatch at level " + std::to_string(li + 1));
            }
            for (NodeId v : t.path.vertices) {
                if (v < 0 || v >= node_count_) {
                    throw DataError("trunk node " + std::to_string(v) + " out of range");
                }
                if (!area.insert(v).second) {
                    throw DataError("trunks at level " + std::to_string(li + 1) +
                                    " share node " + std::to_string(v));
                }
                covered[v] = true;
            }
        }
        areas_.emplace_back(area.begin(), area.end());
    }
    for (NodeId v = 0; v < node_count_; ++v) {
        if (!covered[v]) {
            throw DataError("node " + std::to_string(v) + " is not covered by any level");
        }
    }
}

const std::vector<Trunk>& TrunkHierarchy::trunks_at(int level) const {
    if (level < 1 || level > level_count()) {
        throw DataError("level " + std::to_string(level) + " out of range [1, " +
                        std::to_string(level_count()) + "]");
    }
    return levels_[level - 1];
}

const std::vector<NodeId>& TrunkHierarchy::area_nodes(int level) const {
    if (level < 1 || level > level_count()) {
        throw DataError("level " + std::to_string(level) + " out of range [1, " +
                        std::to_string(level_count()) + "]");
    }
    return areas_[level - 1];
}

TrunkHierarchy decompose(const Tree& t) {
    const int n = t.node_count();
    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId v = 0; v < n; ++v) adj[v] = t.neighbors(v);
    std::vector<bool> alive(n, true);
    int alive_count = n;

    std::vector<std::vector<Trunk>> levels;
    while (alive_count > 0) {
        const int level = static_cast<int>(levels.size()) + 1;
        std::vector<Trunk> trunks;

        std::vector<NodeId> live;
        std::vector<std::pair<NodeId, NodeId>> live_edges;
        for (NodeId v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            live.push_back(v);
            for (NodeId w : adj[v]) {
                if (v < w) live_edges.push_back({v, w});
            }
        }
        const graph::Forest forest(live, live_edges);

        for (const auto& [comp, labels] : graph::connected_components(forest)) {
            Path local = graph::longest_shortest_path(comp);
            Path global;
            global.vertices.reserve(local.vertices.size());
            for (NodeId lv : local.vertices) global.vertices.push_back(labels[lv]);
            trunks.push_back(
                Trunk{level, static_cast<int>(trunks.size()) + 1, std::move(global)});
        }

        // Remove trunk edges, then the nodes they leave isolated.
        for (const Trunk& trunk : trunks) {
            const auto& path = trunk.path.vertices;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                const NodeId a = path[i];
                const NodeId b = path[i + 1];
                std::erase(adj[a], b);
                std::erase(adj[b], a);
            }
        }
        for (NodeId v : live) {
            if (adj[v].empty()) {
                alive[v] = false;
                --alive_count;
            }
        }
        levels.push_back(std::move(trunks));
    }
    return TrunkHierarchy(n, std::move(levels));
}

EmotionalArea area_at(const TrunkHierarchy& h, int level) {
    return EmotionalArea{level, h.area_nodes(level)};
}

std::map<std::string, int> system_composition(const EmotionalArea& area,
                                              const connectome::RoiAtlas& atlas) {
    std::map<std::string, int> counts;
    for (NodeId v : area.nodes) {
        counts[atlas.roi(v).system] += 1;
    }
    return counts;
}

nlohmann::json export_hierarchy(const TrunkHierarchy& h) {
    nlohmann::json doc;
    doc["node_count"] = h.node_count();
    doc["levels"] = nlohmann::json::array();
    doc["areas"] = nlohmann::json::array();
    for (int level = 1; level <= h.level_count(); ++level) {
        nlohmann::json entry;
        entry["level"] = level;
        entry["trunks"] = nlohmann::json::array();
        for (const Trunk& t : h.trunks_at(level)) {
            entry["trunks"].push_back(t.path.vertices);
        }
        doc["levels"].push_back(std::move(entry));
        doc["areas"].push_back(h.area_nodes(level));
    }
    return doc;
}

TrunkHierarchy import_hierarchy(const nlohmann::json& doc) {
    if (!doc.contains("levels") || !doc["levels"].is_array()) {
        throw DataError("hierarchy document missing 'levels' array");
    }
    if (!doc.contains("node_count") || !doc["node_count"].is_number_integer()) {
        throw DataError("hierarchy document missing integer 'node_count'");
    }
    std::vector<std::vector<Trunk>> levels;
    for (const auto& entry : doc["levels"]) {
        const int level = entry.at("level").get<int>();
        if (level != static_cast<int>(levels.size()) + 1) {
            throw DataError("hierarchy levels must be contiguous from 1");
        }
        std::vector<Trunk> trunks;
        for (const auto& verts : entry.at("trunks")) {
            Trunk t;
            t.level = level;
            t.component_index = static_cast<int>(trunks.size()) + 1;
            t.path.vertices = verts.get<std::vector<NodeId>>();
            if (t.path.vertices.empty()) throw DataError("empty trunk in hierarchy document");
            trunks.push_back(std::move(t));
        }
        levels.push_back(std::move(trunks));
    }
    TrunkHierarchy h(doc["node_count"].get<int>(), std::move(levels));

    // Cross-check the stored areas against the reconstruction.
    if (doc.contains("areas")) {
        const auto& areas = doc["areas"];
        if (static_cast<int>(areas.size()) != h.level_count()) {
            throw DataError("hierarchy 'areas' length does not match levels");
        }
        for (int level = 1; level <= h.level_count(); ++level) {
            auto stored = areas[level - 1].get<std::vector<NodeId>>();
            std::sort(stored.begin(), stored.end());
            if (stored != h.area_nodes(level)) {
                throw DataError("hierarchy 'areas' disagree with trunks at level " +
                                std::to_string(level));
            }
        }
    }
    return h;
}

}  // namespace hemon::trunks

#include "auvplan/ops_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "auvplan/rng.hpp"

namespace auvplan {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

double edge_length(const Node& a, const Node& b) noexcept { return distance(a.position, b.position); }

double expected_edge_time(const Edge& e, double cruise_speed) {
  if (!(cruise_speed > 0.0)) throw GraphError("expected_edge_time: cruise speed must be positive");
  return e.length / cruise_speed;
}

OperationGraph::OperationGraph(std::vector<Vec3> positions, const std::vector<std::pair<NodeId, NodeId>>& links,
                               Vec3 bounds, double cruise_speed, std::uint64_t seed, std::size_t neighbors_per_node)
    : bounds_(bounds), cruise_speed_(cruise_speed), seed_(seed), neighbors_per_node_(neighbors_per_node) {
  if (positions.size() < 2) throw GraphError("OperationGraph: at least two nodes are required");
  if (!(cruise_speed > 0.0) || !std::isfinite(cruise_speed))
    throw GraphError("OperationGraph: cruise speed must be positive");
  if (!(bounds.x > 0.0) || !(bounds.y > 0.0) || !(bounds.z > 0.0))
    throw GraphError("OperationGraph: bounds must be positive");

  nodes_.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Vec3 p = positions[i];
    if (p.x < 0.0 || p.y < 0.0 || p.z < 0.0 || p.x > bounds.x || p.y > bounds.y || p.z > bounds.z)
      throw GraphError("OperationGraph: node " + std::to_string(i) + " lies outside the volume bounds");
    nodes_.push_back({i, p});
  }

  adjacency_.resize(nodes_.size());
  std::set<std::pair<NodeId, NodeId>> seen;
  for (auto [u, v] : links) {
    if (u >= nodes_.size() || v >= nodes_.size()) throw GraphError("OperationGraph: edge references unknown node");
    if (u == v) throw GraphError("OperationGraph: self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      throw GraphError("OperationGraph: duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    Edge e{u, v, edge_length(nodes_[u], nodes_[v]), 0.0};
    e.expected_time = expected_edge_time(e, cruise_speed_);
    adjacency_[u].push_back(edges_.size());
    adjacency_[v].push_back(edges_.size());
    edges_.push_back(e);
  }
  if (!is_connected()) throw GraphError("OperationGraph: graph is not connected");
}

std::optional<EdgeId> OperationGraph::find_edge(NodeId u, NodeId v) const {
  for (EdgeId e : adjacency_.at(u)) {
    if (edges_[e].other(u) == v) return e;
  }
  return std::nullopt;
}

std::vector<double> OperationGraph::expected_times() const {
  std::vector<double> t(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) t[i] = edges_[i].expected_time;
  return t;
}

bool OperationGraph::is_connected() const {
  DisjointSets sets(nodes_.size());
  std::size_t components = nodes_.size();
  for (const auto& e : edges_) {
    if (sets.unite(e.a, e.b)) --components;
  }
  return components == 1;
}

NodeId OperationGraph::nearest_node(Vec3 p) const {
  NodeId best = 0;
  double best_d = distance(nodes_[0].position, p);
  for (const auto& n : nodes_) {
    const double d = distance(n.position, p);
    if (d < best_d) {
      best_d = d;
      best = n.id;
    }
  }
  return best;
}

OperationGraph generate_network(const NetworkParams& p) {
  const std::size_t k = p.node_count;
  if (k < 2) throw GraphError("generate_network: at least two nodes are required");
  if (p.neighbors_per_node < 1) throw GraphError("generate_network: neighbors_per_node must be at least 1");
  if (p.neighbors_per_node >= k) throw GraphError("generate_network: neighbors_per_node must be below node count");
  if (!(p.bounds.x > 0.0) || !(p.bounds.y > 0.0) || !(p.bounds.z > 0.0))
    throw GraphError("generate_network: bounds must be positive");

  Rng rng(p.seed);
  std::vector<Vec3> pos(k);
  for (auto& q : pos) {
    q.x = rng.uniform(0.0, p.bounds.x);
    q.y = rng.uniform(0.0, p.bounds.y);
    q.z = rng.uniform(0.0, p.bounds.z);
  }

  std::set<std::pair<NodeId, NodeId>> links;
  std::vector<NodeId> others;
  for (NodeId i = 0; i < k; ++i) {
    others.clear();
    for (NodeId j = 0; j < k; ++j) {
      if (j != i) others.push_back(j);
    }
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(p.neighbors_per_node),
                      others.end(), [&](NodeId a, NodeId b) {
                        const double da = distance(pos[i], pos[a]);
                        const double db = distance(pos[i], pos[b]);
                        return da < db || (da == db && a < b);
                      });
    for (std::size_t n = 0; n < p.neighbors_per_node; ++n) {
      links.insert({std::min(i, others[n]), std::max(i, others[n])});
    }
  }

  // Connectivity repair.
  DisjointSets sets(k);
  std::size_t components = k;
  for (auto [u, v] : links) {
    if (sets.unite(u, v)) --components;
  }
  while (components > 1) {
    double best = INFINITY;
    std::pair<NodeId, NodeId> link{0, 0};
    for (NodeId u = 0; u < k; ++u) {
      for (NodeId v = u + 1; v < k; ++v) {
        if (sets.find(u) == sets.find(v)) continue;
        const double d = distance(pos[u], pos[v]);
        if (d < best) {
          best = d;
          link = {u, v};
        }
      }
    }
    links.insert(link);
    sets.unite(link.first, link.second);
    --components;
  }

  return OperationGraph(std::move(pos), std::vector<std::pair<NodeId, NodeId>>(links.begin(), links.end()),
                        p.bounds, p.cruise_speed, p.seed, p.neighbors_per_node);
}

}  // namespace auvplan

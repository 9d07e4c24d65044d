#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "auvplan/geometry.hpp"

namespace auvplan {

using NodeId = std::size_t;
using EdgeId = std::size_t;

struct Node {
  NodeId id = 0;
  Vec3 position;
};

/// Undirected edge, stored once with a < b.
struct Edge {
  NodeId a = 0;
  NodeId b = 0;
  double length = 0.0;         // m
  double expected_time = 0.0;  // s, length / cruise speed

  NodeId other(NodeId n) const noexcept { return n == a ? b : a; }
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double edge_length(const Node& a, const Node& b) noexcept;

/// l / |v|. The realized delay is accounted for by the mission controller.
double expected_edge_time(const Edge& e, double cruise_speed);

/// Connected undirected waypoint network. Immutable after construction.
class OperationGraph {
 public:
  /// Builds from explicit node positions and endpoint pairs; lengths and
  /// expected times are derived. Throws on self-loops, duplicates, bad ids,
  /// non-positive speed, or a disconnected result.
  OperationGraph(std::vector<Vec3> positions, const std::vector<std::pair<NodeId, NodeId>>& links, Vec3 bounds,
                 double cruise_speed, std::uint64_t seed = 0, std::size_t neighbors_per_node = 0);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const Edge& edge(EdgeId id) const { return edges_.at(id); }
  const std::vector<EdgeId>& incident(NodeId id) const { return adjacency_.at(id); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  Vec3 bounds() const noexcept { return bounds_; }
  double cruise_speed() const noexcept { return cruise_speed_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t neighbors_per_node() const noexcept { return neighbors_per_node_; }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;

  /// Expected traversal time of every edge, indexed by EdgeId.
  std::vector<double> expected_times() const;

  bool is_connected() const;

  /// Node closest to the given point; ties go to the lowest id.
  NodeId nearest_node(Vec3 p) const;
  NodeId default_start() const { return nearest_node({0.0, 0.0, 0.0}); }
  NodeId default_target() const { return nearest_node(bounds_); }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
  Vec3 bounds_;
  double cruise_speed_;
  std::uint64_t seed_;
  std::size_t neighbors_per_node_;
};

struct NetworkParams {
  std::size_t node_count = 30;
  Vec3 bounds{10000.0, 10000.0, 100.0};
  std::size_t neighbors_per_node = 4;
  double cruise_speed = knots_to_mps(5.0);
  std::uint64_t seed = 1;
};

/// Uniform nodes in the box, symmetric k-nearest-neighbour union, then the
/// shortest inter-component link is added until the graph is connected.
OperationGraph generate_network(const NetworkParams& params);

}  // namespace auvplan

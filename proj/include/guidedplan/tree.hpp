#pragma once

#include <guidedplan/path_cost.hpp>
#include <guidedplan/pose_index.hpp>
#include <guidedplan/steering.hpp>

#include <vector>

namespace guidedplan
{

/// Collision-checked steering edge with its cost and end directions.
struct Edge
{
    SteeringPath path;
    double cost = 0.0;   ///< path_cost of the discretized edge
    int first_dir = 0;   ///< driving direction (+1 / -1) at the start of the edge
    int last_dir = 0;    ///< driving direction at the end of the edge
};

struct Vertex
{
    State state;
    int parent = -1;
    double cost = 0.0;   ///< cost-to-come (start tree) or cost-to-go (goal tree)
    Edge edge;           ///< parent -> this (start tree) or this -> parent (goal tree)
    std::vector<int> children;
};

/// Search tree rooted at the start (edges drive away from the root) or at the goal
/// (reversed: edges drive towards the root).
class Tree
{
  public:
    Tree(const State &root, bool reversed, const Extent &extent, double w_cusp);

    bool reversed() const { return reversed_; }
    std::size_t size() const { return vertices_.size(); }
    const Vertex &vertex(int id) const { return vertices_[id]; }
    const std::vector<Vertex> &vertices() const { return vertices_; }
    const PoseIndex &index() const { return index_; }

    /// Cusp penalty between the edge of `parent` and an edge attached to it.
    double junction(int parent, const Edge &edge) const;
    /// Cost of `child` if attached to `parent` via `edge`.
    double cost_via(int parent, const Edge &edge) const { return vertices_[parent].cost + edge.cost + junction(parent, edge); }

    int add(int parent, const State &state, Edge edge);

    /// Moves `id` under `new_parent` if that lowers its cost without raising any
    /// child's cost; updates the subtree. Returns whether the rewire happened.
    bool rewire(int id, int new_parent, Edge edge);

    /// Largest |stored - recomputed| cost over all vertices.
    double max_cost_error() const;

    /// Vertex ids from the root to `id`.
    std::vector<int> path_to_root(int id) const;

  private:
    void propagate(int id);

    bool reversed_;
    double w_cusp_;
    std::vector<Vertex> vertices_;
    PoseIndex index_;
};

} // namespace guidedplan

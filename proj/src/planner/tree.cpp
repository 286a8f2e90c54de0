#include <guidedplan/errors.hpp>
#include <guidedplan/tree.hpp>

#include <algorithm>
#include <cmath>

namespace guidedplan
{

Tree::Tree(const State &root, bool reversed, const Extent &extent, double w_cusp)
    : reversed_(reversed), w_cusp_(w_cusp), index_(extent, 2.0)
{
    vertices_.push_back({root, -1, 0.0, {}, {}});
    index_.insert(0, root.pose);
}

double Tree::junction(int parent, const Edge &edge) const
{
    const Vertex &p = vertices_[parent];
    if (p.parent < 0)
        return 0.0;
    // Start tree: parent's edge ends where the new edge starts. Goal tree: the new
    // edge ends where the parent's edge starts.
    const bool cusp = reversed_ ? edge.last_dir != p.edge.first_dir : p.edge.last_dir != edge.first_dir;
    return cusp ? w_cusp_ : 0.0;
}

int Tree::add(int parent, const State &state, Edge edge)
{
    const int id = static_cast<int>(vertices_.size());
    const double cost = cost_via(parent, edge);
    vertices_.push_back({state, parent, cost, std::move(edge), {}});
    vertices_[parent].children.push_back(id);
    index_.insert(id, state.pose);
    return id;
}

bool Tree::rewire(int id, int new_parent, Edge edge)
{
    Vertex &v = vertices_[id];
    if (v.parent < 0 || new_parent == id || new_parent == v.parent)
        return false;
    const double new_cost = cost_via(new_parent, edge);
    if (!(new_cost < v.cost - 1e-12))
        return false;
    for (int c : v.children)
    {
        const Vertex &child = vertices_[c];
        const bool cusp = reversed_ ? child.edge.last_dir != edge.first_dir : edge.last_dir != child.edge.first_dir;
        const double child_new = new_cost + child.edge.cost + (cusp ? w_cusp_ : 0.0);
        if (child_new > child.cost + 1e-12)
            return false;
    }
    for (int a = new_parent; a >= 0; a = vertices_[a].parent)
        if (a == id)
            return false;

    auto &siblings = vertices_[v.parent].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), id));
    v.parent = new_parent;
    v.edge = std::move(edge);
    v.cost = new_cost;
    vertices_[new_parent].children.push_back(id);
    propagate(id);
    return true;
}

void Tree::propagate(int id)
{
    std::vector<int> stack{id};
    while (!stack.empty())
    {
        const int u = stack.back();
        stack.pop_back();
        for (int c : vertices_[u].children)
        {
            vertices_[c].cost = cost_via(u, vertices_[c].edge);
            stack.push_back(c);
        }
    }
}

double Tree::max_cost_error() const
{
    double err = 0.0;
    for (std::size_t i = 1; i < vertices_.size(); ++i)
    {
        const Vertex &v = vertices_[i];
        err = std::max(err, std::abs(v.cost - cost_via(v.parent, v.edge)));
    }
    return err;
}

std::vector<int> Tree::path_to_root(int id) const
{
    std::vector<int> ids;
    for (int a = id; a >= 0; a = vertices_[a].parent)
        ids.push_back(a);
    std::reverse(ids.begin(), ids.end());
    return ids;
}

} // namespace guidedplan

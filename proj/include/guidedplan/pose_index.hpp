#pragma once

#include <guidedplan/grid.hpp>
#include <guidedplan/metrics.hpp>

#include <utility>
#include <vector>

namespace guidedplan
{

/// Bucketed nearest-neighbor index over poses under the weighted pose metric.
class PoseIndex
{
  public:
    PoseIndex(const Extent &extent, double bucket_size, MetricConfig metric = {});

    void insert(int id, const Pose &pose);
    std::size_t size() const { return poses_.size(); }

    /// Id of the nearest pose (smallest id on ties); -1 when empty.
    int nearest(const Pose &query) const;

    /// Up to k (distance, id) pairs with distance <= radius, ordered by distance then id.
    std::vector<std::pair<double, int>> near(const Pose &query, double radius, std::size_t k) const;

  private:
    int bucket_x(double x) const;
    int bucket_y(double y) const;

    Extent extent_;
    double bucket_;
    MetricConfig metric_;
    int nx_;
    int ny_;
    std::vector<std::vector<int>> buckets_;
    std::vector<Pose> poses_;   ///< indexed by id
};

} // namespace guidedplan

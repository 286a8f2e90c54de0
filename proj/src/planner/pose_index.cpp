#include <guidedplan/pose_index.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace guidedplan
{

PoseIndex::PoseIndex(const Extent &extent, double bucket_size, MetricConfig metric)
    : extent_(extent), bucket_(bucket_size), metric_(metric),
      nx_(std::max(1, static_cast<int>(std::ceil(extent.width() / bucket_size)))),
      ny_(std::max(1, static_cast<int>(std::ceil(extent.height() / bucket_size)))),
      buckets_(static_cast<std::size_t>(nx_) * ny_)
{
}

int PoseIndex::bucket_x(double x) const
{
    return std::clamp(static_cast<int>(std::floor((x - extent_.x_min) / bucket_)), 0, nx_ - 1);
}

int PoseIndex::bucket_y(double y) const
{
    return std::clamp(static_cast<int>(std::floor((y - extent_.y_min) / bucket_)), 0, ny_ - 1);
}

void PoseIndex::insert(int id, const Pose &pose)
{
    if (static_cast<std::size_t>(id) >= poses_.size())
        poses_.resize(id + 1);
    poses_[id] = pose;
    buckets_[static_cast<std::size_t>(bucket_y(pose.y())) * nx_ + bucket_x(pose.x())].push_back(id);
}

int PoseIndex::nearest(const Pose &query) const
{
    if (poses_.empty())
        return -1;
    const int qx = bucket_x(query.x());
    const int qy = bucket_y(query.y());
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring)
    {
        // Points in ring r are at least (r - 1) buckets away in position; queries
        // outside the extent are clamped, so this bound only applies inside it.
        const bool inside = query.x() >= extent_.x_min && query.x() <= extent_.x_max && query.y() >= extent_.y_min &&
                            query.y() <= extent_.y_max;
        if (inside && best >= 0 && metric_.w_pos * (ring - 1) * bucket_ > best_d)
            break;
        for (int by = qy - ring; by <= qy + ring; ++by)
        {
            if (by < 0 || by >= ny_)
                continue;
            const bool edge_row = by == qy - ring || by == qy + ring;
            for (int bx = qx - ring; bx <= qx + ring; bx += (edge_row ? 1 : 2 * ring))
            {
                if (bx >= 0 && bx < nx_)
                {
                    for (int id : buckets_[static_cast<std::size_t>(by) * nx_ + bx])
                    {
                        const double d = pose_distance(query, poses_[id], metric_);
                        if (d < best_d || (d == best_d && id < best))
                        {
                            best_d = d;
                            best = id;
                        }
                    }
                }
                if (ring == 0)
                    break;
            }
        }
    }
    return best;
}

std::vector<std::pair<double, int>> PoseIndex::near(const Pose &query, double radius, std::size_t k) const
{
    std::vector<std::pair<double, int>> out;
    if (poses_.empty() || k == 0)
        return out;
    const double reach = radius / metric_.w_pos;
    const int bx0 = bucket_x(query.x() - reach);
    const int bx1 = bucket_x(query.x() + reach);
    const int by0 = bucket_y(query.y() - reach);
    const int by1 = bucket_y(query.y() + reach);
    for (int by = by0; by <= by1; ++by)
        for (int bx = bx0; bx <= bx1; ++bx)
            for (int id : buckets_[static_cast<std::size_t>(by) * nx_ + bx])
            {
                const double d = pose_distance(query, poses_[id], metric_);
                if (d <= radius)
                    out.emplace_back(d, id);
            }
    if (out.size() > k)
    {
        std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), out.end());
        out.resize(k);
    }
    else
    {
        std::sort(out.begin(), out.end());
    }
    return out;
}

} // namespace guidedplan

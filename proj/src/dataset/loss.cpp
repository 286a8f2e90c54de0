#include <guidedplan/dataset.hpp>
#include <guidedplan/errors.hpp>

#include <algorithm>
#include <cmath>

namespace guidedplan
{

double loss(const LogitPlanes &pred, const PredictionGrids &labels, const TrainConfig &cfg, double weights_sq_sum)
{
    const std::size_t n = labels.p_path.size();
    if (pred.logit_off.size() != n || pred.logit_on.size() != n || pred.sin_theta.size() != n ||
        pred.cos_theta.size() != n || labels.sin_theta.size() != n || labels.cos_theta.size() != n)
        throw PreconditionError("loss: plane sizes differ");

    double total = 0.0;
    for (std::size_t c = 0; c < n; ++c)
    {
        const bool on = labels.p_path[c] > 0.5f;
        const double a = pred.logit_off[c];
        const double b = pred.logit_on[c];
        const double m = std::max(a, b);
        const double lse = m + std::log(std::exp(a - m) + std::exp(b - m));
        const double ce = lse - (on ? b : a);
        const double ds = pred.sin_theta[c] - labels.sin_theta[c];
        const double dc = pred.cos_theta[c] - labels.cos_theta[c];
        const double mse = ds * ds + dc * dc;
        const double f_ce = on ? cfg.gamma_ce : 1.0;
        const double f_mse = on ? cfg.gamma_mse : 1.0;
        total += f_ce * ce + f_mse * mse;
    }
    return total + 0.5 * cfg.l2_lambda * weights_sq_sum;
}

} // namespace guidedplan

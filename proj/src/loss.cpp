#include "spinecurve/loss.hpp"

#include <cmath>

namespace spinecurve {

double heatmap_loss(std::span<const double> pred, std::span<const double> gt, double tau) {
    if (pred.size() != gt.size())
        throw ShapeMismatch("heatmap_loss: pred and gt sizes differ");
    if (pred.empty()) throw ShapeMismatch("heatmap_loss: empty arrays");
    double sum = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - gt[i];
        sum += d * d * std::pow(tau, gt[i]);
    }
    return sum / static_cast<double>(pred.size());
}

double vector_loss(std::span<const double> pred, std::span<const double> gt) {
    if (pred.size() != gt.size())
        throw ShapeMismatch("vector_loss: pred and gt sizes differ");
    if (pred.empty()) throw ShapeMismatch("vector_loss: empty arrays");
    double sum = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - gt[i]);
    return sum / static_cast<double>(pred.size());
}

double total_loss(std::span<const double> heatmap_pred, std::span<const double> heatmap_gt,
                  std::span<const double> vector_pred, std::span<const double> vector_gt,
                  const Spine& spine_pred, const LossWeights& w) {
    const double lh = heatmap_loss(heatmap_pred, heatmap_gt, w.tau);
    const double lv = vector_loss(vector_pred, vector_gt);
    const double lc = constraint_violation(spine_pred, w.eps_deg).score_deg;
    return w.lambda_heatmap * lh + w.lambda_vector * lv + w.lambda_constraint * lc;
}

} // namespace spinecurve

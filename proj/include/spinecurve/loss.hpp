#pragma once

#include <span>

#include "spinecurve/diagnosis.hpp"

namespace spinecurve {

/// Training-loss weights. Defaults are the configuration that performed
/// best in tuning: heatmap 1.0, vector 0.05, constraint 0.05.
struct LossWeights {
    double lambda_heatmap = 1.0;
    double lambda_vector = 0.05;
    double lambda_constraint = 0.05;
    double tau = 10.0;       // heatmap weighting base; peak pixels weigh tau^1
    double eps_deg = 5.0;    // constraint tolerance
};

/// Weighted MSE over heatmap values: mean of (pred - gt)^2 * tau^gt.
double heatmap_loss(std::span<const double> pred, std::span<const double> gt, double tau);

/// Mean absolute error over angle-vector components.
double vector_loss(std::span<const double> pred, std::span<const double> gt);

/// Weighted sum of the three components; the constraint term is the
/// biomechanical violation score of the decoded spine.
double total_loss(std::span<const double> heatmap_pred, std::span<const double> heatmap_gt,
                  std::span<const double> vector_pred, std::span<const double> vector_gt,
                  const Spine& spine_pred, const LossWeights& w = {});

} // namespace spinecurve

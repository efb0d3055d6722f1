#pragma once

#include <array>

#include "spinecurve/landmark.hpp"
#include "spinecurve/matrix.hpp"
#include "spinecurve/svd.hpp"

namespace spinecurve {

/// 18x18 matrix of pairwise endplate angles:
///   gamma(i, j) = upper angle of vertebra i - lower angle of vertebra j
/// (1-based accessors). A cell is clinically valid when i <= j; pairs where
/// the upper endplate belongs to a vertebra caudal to the lower endplate's
/// vertebra carry no clinical meaning and are masked. The mask never enters
/// the decomposition; it gates candidate curves and display only.
class AngleMatrix {
public:
    explicit AngleMatrix(const Spine& spine);

    const Matrix& gamma() const { return gamma_; }

    /// Pairwise angle by 1-based vertebra indices.
    double gamma_at(int upper_index, int lower_index) const {
        return gamma_.at(upper_index - 1, lower_index - 1);
    }

    bool valid(int upper_index, int lower_index) const {
        return upper_index <= lower_index;
    }

    const std::array<double, kNumVertebrae>& theta_upper() const { return theta_upper_; }
    const std::array<double, kNumVertebrae>& theta_lower() const { return theta_lower_; }

private:
    Matrix gamma_;
    std::array<double, kNumVertebrae> theta_upper_{};
    std::array<double, kNumVertebrae> theta_lower_{};
};

AngleMatrix build_angle_matrix(const Spine& spine);

/// Per-vertebra scores from the leading singular triplet of the angle
/// matrix: score_i = sigma_1 * U(i, 1). The sign is fixed so the inner
/// product with the upper endplate angle vector is >= 0; an all-zero
/// matrix yields all-zero scores.
struct Pc1Scores {
    std::array<double, kNumVertebrae> scores{};
    std::vector<double> sigma;
};

Pc1Scores pc1_scores(const AngleMatrix& am);

} // namespace spinecurve

#include "spinecurve/angle_matrix.hpp"

namespace spinecurve {

AngleMatrix::AngleMatrix(const Spine& spine)
    : gamma_(kNumVertebrae, kNumVertebrae),
      theta_upper_(spine.upper_angles()),
      theta_lower_(spine.lower_angles()) {
    for (int i = 0; i < kNumVertebrae; ++i)
        for (int j = 0; j < kNumVertebrae; ++j)
            gamma_.at(i, j) = theta_upper_[static_cast<size_t>(i)] -
                              theta_lower_[static_cast<size_t>(j)];
}

AngleMatrix build_angle_matrix(const Spine& spine) { return AngleMatrix(spine); }

Pc1Scores pc1_scores(const AngleMatrix& am) {
    Pc1Scores out;
    const SvdResult dec = svd(am.gamma());
    out.sigma = dec.sigma;
    if (dec.sigma.front() == 0.0) return out; // straight spine: all-zero scores

    for (int i = 0; i < kNumVertebrae; ++i)
        out.scores[static_cast<size_t>(i)] = dec.sigma.front() * dec.u.at(i, 0);

    double dot = 0.0;
    for (int i = 0; i < kNumVertebrae; ++i)
        dot += out.scores[static_cast<size_t>(i)] * am.theta_upper()[static_cast<size_t>(i)];
    if (dot < 0.0)
        for (double& s : out.scores) s = -s;
    return out;
}

} // namespace spinecurve

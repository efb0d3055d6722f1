#include "spinecurve/landmark.hpp"

#include <cmath>

namespace spinecurve {

namespace {

const std::array<std::string, kNumVertebrae> kLabels = {
    "C7", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9",
    "T10", "T11", "T12", "L1", "L2", "L3", "L4", "L5"};

constexpr double kRadToDeg = 180.0 / M_PI;

bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Corner-derived endplates must agree with stored ones to this tolerance.
constexpr double kCornerConsistencyTol = 1e-6;

} // namespace

VertebraId::VertebraId(int index) : index_(index) {
    if (index < 1 || index > kNumVertebrae)
        throw SpineValidation("vertebra index out of range 1..18: " + std::to_string(index));
}

VertebraId VertebraId::from_label(const std::string& label) {
    for (int i = 0; i < kNumVertebrae; ++i)
        if (kLabels[static_cast<size_t>(i)] == label) return VertebraId(i + 1);
    throw SpineValidation("unknown vertebra label: '" + label + "'");
}

const std::string& VertebraId::label() const {
    return kLabels[static_cast<size_t>(index_ - 1)];
}

double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Endplate corners_to_endplate(const Point2& left, const Point2& right) {
    if (!finite(left) || !finite(right))
        throw NonFiniteInput("endplate corner coordinates must be finite");
    if (left == right)
        throw CoincidentPoints("endplate corners coincide");
    const double dx = right.x - left.x;
    const double dy = right.y - left.y;
    const double angle = std::atan2(dy, dx) * kRadToDeg;
    if (std::abs(angle) > 90.0)
        throw SteepEndplate("endplate angle outside [-90, 90]: " + std::to_string(angle));
    return Endplate{{(left.x + right.x) / 2.0, (left.y + right.y) / 2.0}, angle};
}

double directional_angle(const Point2& center_i, const Point2& center_j) {
    if (!finite(center_i) || !finite(center_j))
        throw NonFiniteInput("vertebra centers must be finite");
    if (center_i == center_j)
        throw CoincidentCenters("vertebra centers coincide");
    return std::atan2(center_j.x - center_i.x, center_j.y - center_i.y) * kRadToDeg;
}

Point2 vertebra_center(const Vertebra& v) {
    return {(v.upper.midpoint.x + v.lower.midpoint.x) / 2.0,
            (v.upper.midpoint.y + v.lower.midpoint.y) / 2.0};
}

double mean_tilt(const Vertebra& v) {
    return (v.upper.angle_deg + v.lower.angle_deg) / 2.0;
}

Spine::Spine(std::string case_id, std::vector<Vertebra> vertebrae,
             std::optional<std::pair<double, double>> image_size)
    : case_id_(std::move(case_id)),
      vertebrae_(std::move(vertebrae)),
      image_size_(image_size) {
    if (vertebrae_.size() != kNumVertebrae)
        throw SpineValidation("spine '" + case_id_ + "' has " +
                              std::to_string(vertebrae_.size()) +
                              " vertebrae, expected 18");
    for (int i = 0; i < kNumVertebrae; ++i) {
        const Vertebra& v = vertebrae_[static_cast<size_t>(i)];
        const std::string where = "spine '" + case_id_ + "' vertebra " + v.id.label();
        if (v.id.index() != i + 1)
            throw SpineValidation("spine '" + case_id_ + "': expected " +
                                  kLabels[static_cast<size_t>(i)] + " at position " +
                                  std::to_string(i + 1) + ", found " + v.id.label());
        if (!finite(v.upper.midpoint) || !finite(v.lower.midpoint) ||
            !std::isfinite(v.upper.angle_deg) || !std::isfinite(v.lower.angle_deg))
            throw SpineValidation(where + ": non-finite landmark data");
        if (std::abs(v.upper.angle_deg) > 90.0 || std::abs(v.lower.angle_deg) > 90.0)
            throw SpineValidation(where + ": endplate angle outside [-90, 90]");
        if (v.upper.midpoint.y > v.lower.midpoint.y)
            throw SpineValidation(where + ": superior endplate lies below inferior endplate");
        if (v.corners) {
            const Endplate u = corners_to_endplate(v.corners->ul, v.corners->ur);
            const Endplate l = corners_to_endplate(v.corners->ll, v.corners->lr);
            if (distance(u.midpoint, v.upper.midpoint) > kCornerConsistencyTol ||
                distance(l.midpoint, v.lower.midpoint) > kCornerConsistencyTol ||
                std::abs(u.angle_deg - v.upper.angle_deg) > kCornerConsistencyTol ||
                std::abs(l.angle_deg - v.lower.angle_deg) > kCornerConsistencyTol)
                throw SpineValidation(where + ": endplates disagree with corner landmarks");
        }
    }
    for (int i = 1; i < kNumVertebrae; ++i) {
        const Point2 prev = vertebra_center(vertebrae_[static_cast<size_t>(i - 1)]);
        const Point2 cur = vertebra_center(vertebrae_[static_cast<size_t>(i)]);
        if (cur.y <= prev.y)
            throw SpineValidation("spine '" + case_id_ + "': vertebral centers not strictly " +
                                  "descending in the image at " +
                                  vertebrae_[static_cast<size_t>(i)].id.label());
    }
}

std::array<double, kNumVertebrae> Spine::upper_angles() const {
    std::array<double, kNumVertebrae> a{};
    for (int i = 0; i < kNumVertebrae; ++i)
        a[static_cast<size_t>(i)] = vertebrae_[static_cast<size_t>(i)].upper.angle_deg;
    return a;
}

std::array<double, kNumVertebrae> Spine::lower_angles() const {
    std::array<double, kNumVertebrae> a{};
    for (int i = 0; i < kNumVertebrae; ++i)
        a[static_cast<size_t>(i)] = vertebrae_[static_cast<size_t>(i)].lower.angle_deg;
    return a;
}

} // namespace spinecurve

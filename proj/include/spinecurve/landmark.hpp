#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinecurve/errors.hpp"

namespace spinecurve {

/// Number of vertebrae tracked per spine: C7, T1..T12, L1..L5.
inline constexpr int kNumVertebrae = 18;

/// Identifies one of the 18 vertebrae. Index runs 1..18 cranial to caudal
/// (1 = C7, 2..13 = T1..T12, 14..18 = L1..L5).
class VertebraId {
public:
    VertebraId() = default;
    explicit VertebraId(int index);
    static VertebraId from_label(const std::string& label);

    int index() const { return index_; }
    const std::string& label() const;

    bool operator==(const VertebraId& o) const { return index_ == o.index_; }
    bool operator<(const VertebraId& o) const { return index_ < o.index_; }

private:
    int index_ = 1;
};

/// Image-space point: +x right, +y down, units are pixels.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
};

double distance(const Point2& a, const Point2& b);

/// One vertebral endplate: midpoint plus tilt relative to horizontal.
/// Positive angle means the right endpoint sits lower in the image.
struct Endplate {
    Point2 midpoint;
    double angle_deg = 0.0;
};

/// Four corner landmarks of a vertebral body.
struct Corners {
    Point2 ul, ur, ll, lr;
};

struct Vertebra {
    VertebraId id;
    Endplate upper;
    Endplate lower;
    std::optional<Corners> corners;
};

/// Derive an endplate from its left/right corner landmarks.
/// angle = atan2(yR - yL, xR - xL), clamped to [-90, 90] by validation.
Endplate corners_to_endplate(const Point2& left, const Point2& right);

/// Angle of the segment from center_i to a caudal center_j, measured from
/// the vertical axis: beta = atan2(dx, dy). Sign matches the endplate
/// tilt convention (positive = rightward lean).
double directional_angle(const Point2& center_i, const Point2& center_j);

Point2 vertebra_center(const Vertebra& v);

/// (upper angle + lower angle) / 2.
double mean_tilt(const Vertebra& v);

/// A full 18-vertebra case. Construction validates ordering invariants:
/// exactly 18 vertebrae with indices 1..18 sorted cranial to caudal,
/// vertebral centers strictly increasing in y, per-vertebra endplate
/// ordering (upper above lower), all angles within [-90, 90].
class Spine {
public:
    Spine(std::string case_id, std::vector<Vertebra> vertebrae,
          std::optional<std::pair<double, double>> image_size = std::nullopt);

    const std::string& case_id() const { return case_id_; }
    const std::vector<Vertebra>& vertebrae() const { return vertebrae_; }
    const std::optional<std::pair<double, double>>& image_size() const { return image_size_; }

    /// Access by 1-based vertebra index.
    const Vertebra& at(int index) const { return vertebrae_[static_cast<size_t>(index - 1)]; }
    const Vertebra& at(VertebraId id) const { return at(id.index()); }

    std::array<double, kNumVertebrae> upper_angles() const;
    std::array<double, kNumVertebrae> lower_angles() const;

private:
    std::string case_id_;
    std::vector<Vertebra> vertebrae_;
    std::optional<std::pair<double, double>> image_size_;
};

} // namespace spinecurve

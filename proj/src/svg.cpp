#include "spinecurve/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace spinecurve {

namespace {

std::string f2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Diverging blue-white-red map for t in [-1, 1].
std::string diverging_color(double t) {
    t = std::clamp(t, -1.0, 1.0);
    int r = 255;
    int g = 255;
    int b = 255;
    if (t >= 0.0) {
        g = static_cast<int>(std::lround(255.0 * (1.0 - t)));
        b = g;
    } else {
        r = static_cast<int>(std::lround(255.0 * (1.0 + t)));
        g = r;
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string svg_open(double w, double h) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(w) << "\" height=\""
        << f2(h) << "\" viewBox=\"0 0 " << f2(w) << " " << f2(h) << "\">\n";
    return out.str();
}

std::string text(double x, double y, const std::string& s, int size,
                 const std::string& anchor = "middle") {
    std::ostringstream out;
    out << "<text x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
        << "</text>\n";
    return out.str();
}

} // namespace

std::string gamma_heatmap_svg(const AngleMatrix& am, const std::string& title) {
    constexpr double cell = 26.0;
    constexpr double margin = 60.0;
    const double size = margin + kNumVertebrae * cell + 20.0;

    double max_abs = 0.0;
    for (int i = 1; i <= kNumVertebrae; ++i)
        for (int j = 1; j <= kNumVertebrae; ++j)
            if (am.valid(i, j)) max_abs = std::max(max_abs, std::abs(am.gamma_at(i, j)));
    if (max_abs == 0.0) max_abs = 1.0;

    std::ostringstream out;
    out << svg_open(size, size + 24.0);
    out << text(size / 2.0, 18.0, title, 13);
    for (int i = 1; i <= kNumVertebrae; ++i) {
        const double y = margin + (i - 1) * cell;
        out << text(margin - 8.0, y + cell * 0.7, VertebraId(i).label(), 9, "end");
        out << text(margin + (i - 1) * cell + cell / 2.0, margin - 8.0, VertebraId(i).label(), 9);
        for (int j = 1; j <= kNumVertebrae; ++j) {
            if (!am.valid(i, j)) continue; // masked: blank
            const double x = margin + (j - 1) * cell;
            out << "<rect x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" width=\"" << f2(cell)
                << "\" height=\"" << f2(cell) << "\" fill=\""
                << diverging_color(am.gamma_at(i, j) / max_abs)
                << "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
        }
    }
    out << text(margin, size + 10.0,
                "range +/- " + f2(max_abs) + " deg (red right, blue left)", 10, "start");
    out << "</svg>\n";
    return out.str();
}

std::string pc1_curve_svg(const Pc1Scores& pc1, const std::vector<Extremum>& extrema,
                          const std::string& title) {
    constexpr double w = 640.0;
    constexpr double h = 360.0;
    constexpr double ml = 50.0;
    constexpr double mr = 20.0;
    constexpr double mt = 40.0;
    constexpr double mb = 50.0;

    double lo = 0.0;
    double hi = 0.0;
    for (double s : pc1.scores) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (hi - lo < 1e-12) {
        hi += 1.0;
        lo -= 1.0;
    }
    auto px = [&](int index1) {
        return ml + (w - ml - mr) * (index1 - 1) / double(kNumVertebrae - 1);
    };
    auto py = [&](double score) { return mt + (h - mt - mb) * (hi - score) / (hi - lo); };

    std::ostringstream out;
    out << svg_open(w, h);
    out << text(w / 2.0, 20.0, title, 13);
    if (lo < 0.0 && hi > 0.0)
        out << "<line x1=\"" << f2(ml) << "\" y1=\"" << f2(py(0.0)) << "\" x2=\"" << f2(w - mr)
            << "\" y2=\"" << f2(py(0.0)) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (int i = 1; i <= kNumVertebrae; ++i)
        out << f2(px(i)) << "," << f2(py(pc1.scores[static_cast<size_t>(i - 1)])) << " ";
    out << "\"/>\n";

    for (int i = 1; i <= kNumVertebrae; ++i) {
        out << "<circle cx=\"" << f2(px(i)) << "\" cy=\""
            << f2(py(pc1.scores[static_cast<size_t>(i - 1)]))
            << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
        out << text(px(i), h - mb + 16.0, VertebraId(i).label(), 8);
    }
    for (const Extremum& e : extrema) {
        const double x = px(e.vertebra.index());
        const double y = py(e.score);
        const std::string color = e.kind == ExtremumKind::Max ? "#d62728" : "#2ca02c";
        out << "<circle cx=\"" << f2(x) << "\" cy=\"" << f2(y) << "\" r=\"5\" fill=\"none\""
            << " stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << text(x, y - 9.0, e.vertebra.label(), 9);
    }
    out << "</svg>\n";
    return out.str();
}

std::string spine_overlay_svg(const Spine& spine, const CurveReport& report) {
    double min_x = 1e30;
    double max_x = -1e30;
    double max_y = 0.0;
    auto visit = [&](const Point2& p) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    };
    for (const Vertebra& v : spine.vertebrae()) {
        if (v.corners) {
            visit(v.corners->ul);
            visit(v.corners->ur);
            visit(v.corners->ll);
            visit(v.corners->lr);
        } else {
            visit(v.upper.midpoint);
            visit(v.lower.midpoint);
        }
    }
    const double pad = 120.0;
    const double ox = -(min_x - pad);
    const double w = (max_x - min_x) + 2.0 * pad;
    const double h = max_y + pad;

    std::ostringstream out;
    out << svg_open(w, h);
    out << text(w / 2.0, 18.0, spine.case_id() + " (" + to_string(report.severity) + ", max " +
                                   f2(report.max_cobb_deg) + " deg)", 13);

    for (const Vertebra& v : spine.vertebrae()) {
        if (v.corners) {
            out << "<polygon fill=\"#f0f0f5\" stroke=\"#555566\" stroke-width=\"1\" points=\""
                << f2(v.corners->ul.x + ox) << "," << f2(v.corners->ul.y) << " "
                << f2(v.corners->ur.x + ox) << "," << f2(v.corners->ur.y) << " "
                << f2(v.corners->lr.x + ox) << "," << f2(v.corners->lr.y) << " "
                << f2(v.corners->ll.x + ox) << "," << f2(v.corners->ll.y) << "\"/>\n";
        } else {
            out << "<line x1=\"" << f2(v.upper.midpoint.x + ox) << "\" y1=\""
                << f2(v.upper.midpoint.y) << "\" x2=\"" << f2(v.lower.midpoint.x + ox)
                << "\" y2=\"" << f2(v.lower.midpoint.y)
                << "\" stroke=\"#555566\" stroke-width=\"2\"/>\n";
        }
        out << text(ox + min_x - pad * 0.45, vertebra_center(v).y + 3.0, v.id.label(), 9, "start");
    }

    // Endplate lines of each curve's end vertebrae, extended for emphasis.
    auto endplate_line = [&](const Endplate& e, const std::string& color) {
        const double a = e.angle_deg * M_PI / 180.0;
        const double half = 110.0;
        out << "<line x1=\"" << f2(e.midpoint.x + ox - half * std::cos(a)) << "\" y1=\""
            << f2(e.midpoint.y - half * std::sin(a)) << "\" x2=\""
            << f2(e.midpoint.x + ox + half * std::cos(a)) << "\" y2=\""
            << f2(e.midpoint.y + half * std::sin(a)) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
    };
    for (const Curve& c : report.curves) {
        const std::string color = c.direction == CurveDirection::Right ? "#d62728" : "#2ca02c";
        const Vertebra& upper = spine.at(c.upper_ev);
        const Vertebra& lower = spine.at(c.lower_ev);
        endplate_line(upper.upper, color);
        endplate_line(lower.lower, color);

        // Cobb arc: bow between the outer ends of the two endplate lines.
        const double au = upper.upper.angle_deg * M_PI / 180.0;
        const double al = lower.lower.angle_deg * M_PI / 180.0;
        const double half = 110.0;
        const double x1 = upper.upper.midpoint.x + ox + half * std::cos(au);
        const double y1 = upper.upper.midpoint.y + half * std::sin(au);
        const double x2 = lower.lower.midpoint.x + ox + half * std::cos(al);
        const double y2 = lower.lower.midpoint.y + half * std::sin(al);
        const double cx = std::max(x1, x2) + 40.0;
        const double cy = (y1 + y2) / 2.0;
        out << "<path d=\"M " << f2(x1) << " " << f2(y1) << " Q " << f2(cx) << " " << f2(cy)
            << " " << f2(x2) << " " << f2(y2) << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1\" stroke-dasharray=\"5 4\"/>\n";

        const double label_y =
            (vertebra_center(upper).y + vertebra_center(lower).y) / 2.0;
        out << text(w - pad * 0.9, label_y,
                    c.upper_ev.label() + std::string("-") + c.lower_ev.label() + " " +
                        f2(c.cobb_deg) + " deg " + to_string(c.direction),
                    10, "start");
    }
    out << "</svg>\n";
    return out.str();
}

std::string confusion_matrix_svg(const EvalReport& report) {
    constexpr double cell = 90.0;
    constexpr double margin = 110.0;
    const double size = margin + 3 * cell + 30.0;
    const char* labels[3] = {"normal/mild", "moderate", "severe"};

    int max_count = 1;
    for (const auto& row : report.confusion)
        for (int v : row) max_count = std::max(max_count, v);

    std::ostringstream out;
    out << svg_open(size, size + 20.0);
    out << text(size / 2.0, 20.0, "severity confusion (rows: truth, columns: predicted)", 12);
    for (int g = 0; g < 3; ++g) {
        out << text(margin - 10.0, margin + g * cell + cell * 0.55, labels[g], 11, "end");
        out << text(margin + g * cell + cell / 2.0, margin - 12.0, labels[g], 11);
        for (int p = 0; p < 3; ++p) {
            const int count =
                report.confusion[static_cast<size_t>(g)][static_cast<size_t>(p)];
            const double shade = static_cast<double>(count) / max_count;
            const int tone = 255 - static_cast<int>(std::lround(150.0 * shade));
            char fill[16];
            std::snprintf(fill, sizeof(fill), "#%02x%02xff", tone, tone);
            out << "<rect x=\"" << f2(margin + p * cell) << "\" y=\"" << f2(margin + g * cell)
                << "\" width=\"" << f2(cell) << "\" height=\"" << f2(cell) << "\" fill=\"" << fill
                << "\" stroke=\"#666677\"/>\n";
            out << text(margin + p * cell + cell / 2.0, margin + g * cell + cell * 0.58,
                        std::to_string(count), 16);
        }
    }
    out << text(margin, margin + 3 * cell + 22.0,
                "diagnostic accuracy " + f2(report.da_pct) + "% over " +
                    std::to_string(report.n_cases) + " cases",
                11, "start");
    out << "</svg>\n";
    return out.str();
}

} // namespace spinecurve

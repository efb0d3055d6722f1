#include "spinecurve/landmark_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace spinecurve {

namespace {

using nlohmann::json;

double number_at(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        throw ParseError(where + ": missing field '" + key + "'");
    if (!j[key].is_number())
        throw ParseError(where + ": field '" + key + "' is not a number");
    return j[key].get<double>();
}

Point2 point_at(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        throw ParseError(where + ": missing point '" + key + "'");
    const json& p = j[key];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ParseError(where + ": point '" + key + "' must be [x, y]");
    const Point2 out{p[0].get<double>(), p[1].get<double>()};
    if (!std::isfinite(out.x) || !std::isfinite(out.y))
        throw ParseError(where + ": point '" + key + "' is not finite");
    if (out.x < 0.0 || out.y < 0.0)
        throw ParseError(where + ": point '" + key + "' has negative image coordinates");
    return out;
}

Vertebra parse_vertebra(const json& jv, const std::string& where_base) {
    if (!jv.contains("label") || !jv["label"].is_string())
        throw ParseError(where_base + ": vertebra entry missing string 'label'");
    const std::string label = jv["label"].get<std::string>();
    const std::string where = where_base + ": vertebra " + label;

    Vertebra v;
    v.id = VertebraId::from_label(label);
    if (jv.contains("corners")) {
        const json& jc = jv["corners"];
        Corners c;
        c.ul = point_at(jc, "UL", where);
        c.ur = point_at(jc, "UR", where);
        c.ll = point_at(jc, "LL", where);
        c.lr = point_at(jc, "LR", where);
        v.upper = corners_to_endplate(c.ul, c.ur);
        v.lower = corners_to_endplate(c.ll, c.lr);
        v.corners = c;
    } else if (jv.contains("upper") && jv.contains("lower")) {
        auto parse_plate = [&](const json& jp, const char* side) {
            Endplate e;
            e.midpoint = point_at(jp, "mid", where + " " + side);
            e.angle_deg = number_at(jp, "angle_deg", where + " " + side);
            if (!std::isfinite(e.angle_deg) || std::abs(e.angle_deg) > 90.0)
                throw ParseError(where + " " + side + ": angle_deg outside [-90, 90]");
            return e;
        };
        v.upper = parse_plate(jv["upper"], "upper");
        v.lower = parse_plate(jv["lower"], "lower");
    } else {
        throw ParseError(where + ": needs either 'corners' or 'upper'/'lower'");
    }
    return v;
}

Spine assemble_spine(const std::string& case_id, std::vector<Vertebra> found,
                     std::optional<std::pair<double, double>> image_size,
                     const std::string& where) {
    std::vector<bool> seen(kNumVertebrae, false);
    for (const Vertebra& v : found) {
        const size_t slot = static_cast<size_t>(v.id.index() - 1);
        if (seen[slot])
            throw ParseError(where + ": duplicate vertebra " + v.id.label());
        seen[slot] = true;
    }
    for (int i = 0; i < kNumVertebrae; ++i)
        if (!seen[static_cast<size_t>(i)])
            throw ParseError(where + ": missing vertebra " + VertebraId(i + 1).label());
    std::sort(found.begin(), found.end(),
              [](const Vertebra& a, const Vertebra& b) { return a.id < b.id; });
    try {
        return Spine(case_id, std::move(found), image_size);
    } catch (const SpineValidation& e) {
        throw ParseError(where + ": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

Spine parse_landmark_json(const std::string& text, const std::string& source_name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source_name + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("case_id") || !doc["case_id"].is_string())
        throw ParseError(source_name + ": missing string 'case_id'");
    const std::string case_id = doc["case_id"].get<std::string>();
    const std::string where = source_name + " (case " + case_id + ")";

    std::optional<std::pair<double, double>> image_size;
    if (doc.contains("image_size")) {
        const json& s = doc["image_size"];
        if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
            throw ParseError(where + ": image_size must be [width, height]");
        image_size = std::make_pair(s[0].get<double>(), s[1].get<double>());
    }

    if (!doc.contains("vertebrae") || !doc["vertebrae"].is_array())
        throw ParseError(where + ": missing 'vertebrae' array");
    std::vector<Vertebra> found;
    for (const json& jv : doc["vertebrae"]) found.push_back(parse_vertebra(jv, where));
    return assemble_spine(case_id, std::move(found), image_size, where);
}

std::vector<Spine> parse_landmark_csv(const std::string& text, const std::string& source_name) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(source_name + ": empty CSV");
    const std::vector<std::string> expected = {"case_id", "label", "ulx", "uly", "urx",
                                               "ury", "llx", "lly", "lrx", "lry"};
    if (split_csv_line(line) != expected)
        throw MissingColumns(source_name + ": header must be " +
                             "case_id,label,ulx,uly,urx,ury,llx,lly,lrx,lry");

    // Keyed by case_id in file order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<Vertebra>> cases;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::string where = source_name + ":" + std::to_string(line_no);
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != expected.size())
            throw ParseError(where + ": expected 10 fields, found " + std::to_string(f.size()));
        double coords[8];
        for (int i = 0; i < 8; ++i) {
            try {
                size_t pos = 0;
                coords[i] = std::stod(f[static_cast<size_t>(i + 2)], &pos);
                if (pos != f[static_cast<size_t>(i + 2)].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError(where + ": field '" + expected[static_cast<size_t>(i + 2)] +
                                 "' is not a number");
            }
            if (!std::isfinite(coords[i]) || coords[i] < 0.0)
                throw ParseError(where + ": field '" + expected[static_cast<size_t>(i + 2)] +
                                 "' must be a non-negative finite coordinate");
        }
        Vertebra v;
        try {
            v.id = VertebraId::from_label(f[1]);
            Corners c{{coords[0], coords[1]}, {coords[2], coords[3]},
                      {coords[4], coords[5]}, {coords[6], coords[7]}};
            v.upper = corners_to_endplate(c.ul, c.ur);
            v.lower = corners_to_endplate(c.ll, c.lr);
            v.corners = c;
        } catch (const Error& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (cases.find(f[0]) == cases.end()) order.push_back(f[0]);
        cases[f[0]].push_back(v);
    }
    if (order.empty()) throw ParseError(source_name + ": no data rows");

    std::vector<Spine> spines;
    for (const std::string& id : order)
        spines.push_back(assemble_spine(id, std::move(cases[id]), std::nullopt,
                                        source_name + " (case " + id + ")"));
    return spines;
}

std::string write_landmark_json(const Spine& spine) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.10f", v);
        return std::string(buf);
    };
    auto point = [&](const Point2& p) { return "[" + num(p.x) + ", " + num(p.y) + "]"; };

    out << "{\n  \"case_id\": " << json(spine.case_id()).dump() << ",\n";
    if (spine.image_size())
        out << "  \"image_size\": [" << num(spine.image_size()->first) << ", "
            << num(spine.image_size()->second) << "],\n";
    out << "  \"vertebrae\": [\n";
    for (int i = 1; i <= kNumVertebrae; ++i) {
        const Vertebra& v = spine.at(i);
        out << "    {\"label\": \"" << v.id.label() << "\", ";
        if (v.corners) {
            out << "\"corners\": {\"UL\": " << point(v.corners->ul)
                << ", \"UR\": " << point(v.corners->ur)
                << ", \"LL\": " << point(v.corners->ll)
                << ", \"LR\": " << point(v.corners->lr) << "}}";
        } else {
            out << "\"upper\": {\"mid\": " << point(v.upper.midpoint)
                << ", \"angle_deg\": " << num(v.upper.angle_deg) << "}, "
                << "\"lower\": {\"mid\": " << point(v.lower.midpoint)
                << ", \"angle_deg\": " << num(v.lower.angle_deg) << "}}";
        }
        out << (i < kNumVertebrae ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

Spine load_landmark_file(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::vector<Spine> spines = parse_landmark_csv(read_file(path), path);
        if (spines.size() != 1)
            throw ParseError(path + ": expected exactly one case, found " +
                             std::to_string(spines.size()));
        return std::move(spines.front());
    }
    return parse_landmark_json(read_file(path), path);
}

} // namespace spinecurve

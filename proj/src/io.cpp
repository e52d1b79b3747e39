#include "steinerlab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace steinerlab {

using nlohmann::json;

namespace {

json points_json(const std::vector<Point>& pts) {
    json out = json::array();
    for (const Point& p : pts) out.push_back(json::array({p.x, p.y}));
    return out;
}

std::vector<std::vector<Point>> polylines(const Chain& c) {
    std::vector<std::vector<Point>> out;
    for (const Segment& s : c.segments) {
        if (s.is_point()) {
            out.push_back({s.a});
            continue;
        }
        if (!out.empty() && out.back().size() > 1 && out.back().back() == s.a) {
            out.back().push_back(s.b);
        } else {
            out.push_back({s.a, s.b});
        }
    }
    return out;
}

std::vector<Point> read_points(const json& j, const std::string& field, std::size_t min_size) {
    if (!j.is_array()) throw FormatError(field + ": expected a list of [x, y] pairs");
    if (j.size() < min_size) {
        throw FormatError(field + ": expected at least " + std::to_string(min_size) + " points");
    }
    std::vector<Point> pts;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const json& p = j[k];
        const std::string name = field + "[" + std::to_string(k) + "]";
        if (!p.is_array() || p.size() != 2) throw FormatError(name + ": expected [x, y]");
        for (int c = 0; c < 2; ++c) {
            if (!p[c].is_number()) {
                throw FormatError(name + "[" + std::to_string(c) + "]: expected a number");
            }
        }
        Point q{p[0].get<double>(), p[1].get<double>()};
        if (!is_finite(q)) throw FormatError(name + ": coordinates must be finite");
        pts.push_back(q);
    }
    return pts;
}

const json* list_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) return nullptr;
    if (!it->is_array()) throw FormatError(std::string(key) + ": expected a list");
    return &*it;
}

bool ring_contains(const std::vector<Point>& ring, Point p) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = ring[i];
        const Point b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string svg_ring(const Ring& r) {
    std::string d;
    for (std::size_t i = 0; i < r.vertices.size(); ++i) {
        d += (i == 0 ? "M" : " L");
        d += svg_num(r.vertices[i].x) + " " + svg_num(r.vertices[i].y);
    }
    return d + " Z";
}

}  // namespace

json to_json(const CompactSet& set) {
    json regions = json::array();
    json holes = json::array();
    json chains = json::array();
    for (const Region& r : set.regions) {
        regions.push_back(points_json(r.outer.vertices));
        for (const Ring& h : r.holes) holes.push_back(points_json(h.vertices));
    }
    for (const Chain& c : set.chains) {
        for (const auto& line : polylines(c)) chains.push_back(points_json(line));
    }
    return json{{"regions", regions}, {"holes", holes}, {"chains", chains}};
}

CompactSet set_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("set: expected an object with regions, holes, chains");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "regions" && it.key() != "holes" && it.key() != "chains") {
            throw FormatError(it.key() + ": unknown field");
        }
    }
    std::vector<std::vector<Point>> outers;
    std::vector<std::vector<Ring>> holes;
    if (const json* rs = list_field(j, "regions")) {
        for (std::size_t k = 0; k < rs->size(); ++k) {
            outers.push_back(read_points((*rs)[k], "regions[" + std::to_string(k) + "]", 3));
        }
    }
    holes.resize(outers.size());
    if (const json* hs = list_field(j, "holes")) {
        for (std::size_t k = 0; k < hs->size(); ++k) {
            const std::string name = "holes[" + std::to_string(k) + "]";
            std::vector<Point> pts = read_points((*hs)[k], name, 3);
            std::size_t owner = outers.size();
            for (std::size_t r = 0; r < outers.size() && owner == outers.size(); ++r) {
                bool all = true;
                for (const Point& p : pts) all = all && ring_contains(outers[r], p);
                if (all) owner = r;
            }
            if (owner == outers.size()) throw FormatError(name + ": not inside any region");
            holes[owner].push_back(Ring{std::move(pts)});
        }
    }
    std::vector<Region> regions;
    for (std::size_t r = 0; r < outers.size(); ++r) {
        regions.push_back(make_region(Ring{outers[r]}, holes[r]));
    }
    std::vector<Chain> chains;
    if (const json* cs = list_field(j, "chains")) {
        for (std::size_t k = 0; k < cs->size(); ++k) {
            std::vector<Point> pts = read_points((*cs)[k], "chains[" + std::to_string(k) + "]", 1);
            Chain c;
            if (pts.size() == 1) c.segments.push_back({pts[0], pts[0]});
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) c.segments.push_back({pts[i], pts[i + 1]});
            chains.push_back(std::move(c));
        }
    }
    CompactSet set = make_set(std::move(regions), std::move(chains));
    validate(set);
    return set;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

CompactSet load_set(const std::string& path) {
    const json j = read_json(path);
    try {
        return set_from_json(j);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    } catch (const GeometryError& e) {
        throw GeometryError(path + ": " + e.what());
    }
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot write");
    out << text;
}

void write_json(const json& j, const std::string& path) {
    write_text(j.dump(2) + "\n", path);
}

void save_set(const CompactSet& set, const std::string& path) {
    write_json(to_json(set), path);
}

std::string to_svg(const CompactSet& set) {
    BoundingBox box = bounding_box(set);
    if (!box.valid()) box = BoundingBox{{-1, -1}, {1, 1}};
    const double span = std::max({box.width(), box.height(), 1e-6});
    const double m = 0.05 * span;
    const double x0 = box.lo.x - m;
    const double y0 = box.lo.y - m;
    const double w = box.width() + 2 * m;
    const double h = box.height() + 2 * m;
    const std::string stroke = svg_num(span / 400);

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"" << svg_num(512 * h / w)
      << "\" viewBox=\"" << svg_num(x0) << " " << svg_num(-(y0 + h)) << " " << svg_num(w) << " "
      << svg_num(h) << "\">\n";
    s << "<g transform=\"scale(1,-1)\" stroke=\"black\" stroke-width=\"" << stroke << "\">\n";
    for (const Region& r : set.regions) {
        s << "<path fill=\"#9ab\" d=\"" << svg_ring(r.outer) << "\"/>\n";
        for (const Ring& hole : r.holes) s << "<path fill=\"white\" d=\"" << svg_ring(hole) << "\"/>\n";
    }
    for (const Chain& c : set.chains) {
        for (const auto& line : polylines(c)) {
            if (line.size() == 1) {
                s << "<circle cx=\"" << svg_num(line[0].x) << "\" cy=\"" << svg_num(line[0].y)
                  << "\" r=\"" << stroke << "\"/>\n";
                continue;
            }
            s << "<polyline fill=\"none\" points=\"";
            for (std::size_t i = 0; i < line.size(); ++i) {
                s << (i ? " " : "") << svg_num(line[i].x) << "," << svg_num(line[i].y);
            }
            s << "\"/>\n";
        }
    }
    s << "</g>\n</svg>\n";
    return s.str();
}

void save_svg(const CompactSet& set, const std::string& path) {
    write_text(to_svg(set), path);
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace steinerlab

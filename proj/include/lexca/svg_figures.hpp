#pragma once

// Publication-style SVG output: a frequency wordcloud, a factorial-plane
// scatter, and a chronological trajectory. Everything is deterministic:
// fixed 2-decimal coordinates, spiral placement with AABB collision tests,
// greedy label displacement, no randomness. Text extents are estimated from
// a bundled per-character advance-width table for a Helvetica-compatible
// sans face; the estimate is approximate but stable.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "lexca/error.hpp"
#include "lexca/lexical_table.hpp"

namespace lexca {

struct PlotSpec {
    double width = 960.0;
    double height = 720.0;
    double margin = 48.0;
    std::vector<std::string> palette = {"#4d4d4d", "#2e7d32", "#1565c0",
                                        "#c62828", "#6a1b9a", "#ef6c00"};
    std::size_t max_labels = 400;       // points beyond this keep markers only
    double min_font = 11.0;             // wordcloud extremes
    double max_font = 52.0;
    double label_font = 11.0;           // scatter/trajectory annotations
    std::string font_family = "Helvetica, Arial, sans-serif";
    std::string background = "#ffffff";
};

namespace detail {

// Advance widths in 1/1000 em for ASCII 32..126 (Helvetica metrics).
inline constexpr std::array<int, 95> k_char_widths = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333,
    278, 278, 556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278,
    584, 584, 584, 556, 1015, 667, 667, 722, 722, 667, 611, 778, 722, 278,
    500, 667, 556, 833, 722, 778, 667, 778, 722, 667, 611, 722, 667, 944,
    667, 667, 611, 278, 278, 278, 469, 556, 333, 556, 556, 500, 556, 556,
    278, 556, 556, 222, 222, 500, 222, 833, 556, 556, 556, 556, 333, 500,
    278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584};

inline double text_width(std::string_view text, double font_size) {
    double units = 0.0;
    for (unsigned char c : text) {
        if (c >= 0x80 && c < 0xC0) continue;  // UTF-8 continuation byte
        if (c >= 32 && c <= 126) {
            units += k_char_widths[c - 32];
        } else {
            units += 600;  // non-ASCII and controls: generic width
        }
    }
    return units * font_size / 1000.0;
}

inline std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

inline std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Box {
    double x0, y0, x1, y1;
    bool overlaps(const Box& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
};

inline void svg_open(std::string& svg, const PlotSpec& spec) {
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           fmt2(spec.width) + "\" height=\"" + fmt2(spec.height) + "\" viewBox=\"0 0 " +
           fmt2(spec.width) + " " + fmt2(spec.height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt2(spec.width) + "\" height=\"" +
           fmt2(spec.height) + "\" fill=\"" + spec.background + "\"/>\n";
}

inline void check_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) {
        throw PreconditionError("render: non-finite coordinate for " + what);
    }
}

}  // namespace detail

struct WordPlacement {
    std::string term;
    double x = 0.0, y = 0.0;  // center of the bounding box
    double font_size = 0.0;
    double width = 0.0, height = 0.0;
};

struct WordcloudResult {
    std::string svg;
    std::vector<WordPlacement> placements;
    std::vector<std::string> dropped;  // words that found no free spot
};

inline WordcloudResult render_wordcloud(const std::vector<GlossaryEntry>& glossary,
                                        const PlotSpec& spec) {
    if (glossary.empty()) throw ArgumentError("render_wordcloud: empty glossary");

    double f_hi = std::sqrt(static_cast<double>(glossary.front().frequency));
    double f_lo = f_hi;
    for (const auto& g : glossary) {
        if (g.frequency <= 0) {
            throw PreconditionError("render_wordcloud: non-positive frequency for \"" + g.term +
                                    "\"");
        }
        f_lo = std::min(f_lo, std::sqrt(static_cast<double>(g.frequency)));
        f_hi = std::max(f_hi, std::sqrt(static_cast<double>(g.frequency)));
    }
    auto font_for = [&](std::int64_t freq) {
        if (f_hi <= f_lo) return spec.max_font;
        double t = (std::sqrt(static_cast<double>(freq)) - f_lo) / (f_hi - f_lo);
        return spec.min_font + (spec.max_font - spec.min_font) * t;
    };

    const double usable_w = spec.width - 2 * spec.margin;
    const double usable_h = spec.height - 2 * spec.margin;
    {
        // The largest box must fit at all, or no layout exists.
        double fs = font_for(glossary.front().frequency);
        double w = detail::text_width(glossary.front().term, fs);
        if (w > usable_w || fs > usable_h) {
            char need[128];
            std::snprintf(need, sizeof need, "%.0fx%.0f", w + 2 * spec.margin,
                          fs + 2 * spec.margin);
            throw ArgumentError("render_wordcloud: canvas too small for \"" +
                                glossary.front().term + "\"; needs at least " + need +
                                " including margins");
        }
    }

    const double cx = spec.width / 2.0, cy = spec.height / 2.0;
    const double max_radius = std::hypot(usable_w, usable_h) / 2.0;
    std::vector<detail::Box> taken;
    WordcloudResult result;

    for (const auto& g : glossary) {
        const double fs = font_for(g.frequency);
        const double w = detail::text_width(g.term, fs);
        const double h = fs;
        bool placed = false;
        // r = k_spread * theta; 0.35 rad steps give dense, stable coverage.
        for (double theta = 0.0;; theta += 0.35) {
            const double r = 1.1 * theta;
            if (r > max_radius) break;
            const double px = cx + r * std::cos(theta);
            const double py = cy + r * std::sin(theta);
            detail::Box box{px - w / 2, py - h / 2, px + w / 2, py + h / 2};
            if (box.x0 < spec.margin || box.y0 < spec.margin ||
                box.x1 > spec.width - spec.margin || box.y1 > spec.height - spec.margin) {
                continue;
            }
            bool collision = false;
            for (const auto& t : taken) {
                if (box.overlaps(t)) {
                    collision = true;
                    break;
                }
            }
            if (collision) continue;
            taken.push_back(box);
            result.placements.push_back({g.term, px, py, fs, w, h});
            placed = true;
            break;
        }
        if (!placed) result.dropped.push_back(g.term);
    }

    std::string& svg = result.svg;
    detail::svg_open(svg, spec);
    std::size_t color = 0;
    for (const auto& p : result.placements) {
        svg += "<text x=\"" + detail::fmt2(p.x) + "\" y=\"" +
               detail::fmt2(p.y + p.font_size * 0.35) + "\" font-size=\"" +
               detail::fmt2(p.font_size) + "\" font-family=\"" + spec.font_family +
               "\" text-anchor=\"middle\" fill=\"" + spec.palette[color % spec.palette.size()] +
               "\">" + detail::xml_escape(p.term) + "</text>\n";
        ++color;
    }
    svg += "</svg>\n";
    return result;
}

struct PlanePoint {
    std::string label;
    double x = 0.0, y = 0.0;
    std::string group;  // legend entry and palette key
};

struct PlaneAxes {
    int dim_x = 1;  // 1-based dimension indices, as displayed
    int dim_y = 2;
    double inertia_pct_x = 0.0;
    double inertia_pct_y = 0.0;
};

struct MappedPoint {
    std::string label;
    double px = 0.0, py = 0.0;
};

struct PlaneResult {
    std::string svg;
    std::vector<MappedPoint> mapped;
};

inline PlaneResult render_plane(const std::vector<PlanePoint>& points, const PlaneAxes& axes,
                                const PlotSpec& spec) {
    if (points.empty()) throw ArgumentError("render_plane: no points");
    double ext_x = 0.0, ext_y = 0.0;
    for (const auto& p : points) {
        detail::check_finite(p.x, "\"" + p.label + "\"");
        detail::check_finite(p.y, "\"" + p.label + "\"");
        ext_x = std::max(ext_x, std::abs(p.x));
        ext_y = std::max(ext_y, std::abs(p.y));
    }
    // Symmetric extents keep the origin centered and mirror-consistent.
    if (ext_x <= 0) ext_x = 1.0;
    if (ext_y <= 0) ext_y = 1.0;
    ext_x *= 1.08;
    ext_y *= 1.08;

    const double cx = spec.width / 2.0, cy = spec.height / 2.0;
    const double sx = (spec.width / 2.0 - spec.margin) / ext_x;
    const double sy = (spec.height / 2.0 - spec.margin) / ext_y;
    auto map_x = [&](double x) { return cx + sx * x; };
    auto map_y = [&](double y) { return cy - sy * y; };

    std::vector<std::string> groups;
    for (const auto& p : points) {
        if (std::find(groups.begin(), groups.end(), p.group) == groups.end()) {
            groups.push_back(p.group);
        }
    }
    auto color_of = [&](const std::string& group) {
        auto it = std::find(groups.begin(), groups.end(), group);
        return spec.palette[static_cast<std::size_t>(it - groups.begin()) %
                            spec.palette.size()];
    };

    PlaneResult result;
    std::string& svg = result.svg;
    detail::svg_open(svg, spec);

    // Axes through the origin.
    svg += "<line x1=\"" + detail::fmt2(spec.margin) + "\" y1=\"" + detail::fmt2(cy) +
           "\" x2=\"" + detail::fmt2(spec.width - spec.margin) + "\" y2=\"" + detail::fmt2(cy) +
           "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + detail::fmt2(cx) + "\" y1=\"" + detail::fmt2(spec.margin) +
           "\" x2=\"" + detail::fmt2(cx) + "\" y2=\"" +
           detail::fmt2(spec.height - spec.margin) + "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    char axis_label[64];
    std::snprintf(axis_label, sizeof axis_label, "Dim %d (%.2f%%)", axes.dim_x,
                  axes.inertia_pct_x);
    svg += "<text x=\"" + detail::fmt2(spec.width - spec.margin) + "\" y=\"" +
           detail::fmt2(cy - 6) + "\" font-size=\"" + detail::fmt2(spec.label_font) +
           "\" font-family=\"" + spec.font_family + "\" text-anchor=\"end\" fill=\"#333333\">" +
           detail::xml_escape(axis_label) + "</text>\n";
    std::snprintf(axis_label, sizeof axis_label, "Dim %d (%.2f%%)", axes.dim_y,
                  axes.inertia_pct_y);
    svg += "<text x=\"" + detail::fmt2(cx + 6) + "\" y=\"" + detail::fmt2(spec.margin + 12) +
           "\" font-size=\"" + detail::fmt2(spec.label_font) + "\" font-family=\"" +
           spec.font_family + "\" text-anchor=\"start\" fill=\"#333333\">" +
           detail::xml_escape(axis_label) + "</text>\n";

    // Markers first, then labels with greedy downward displacement.
    std::vector<detail::Box> label_boxes;
    std::string labels_svg;
    std::size_t labeled = 0;
    for (const auto& p : points) {
        const double px = map_x(p.x);
        const double py = map_y(p.y);
        result.mapped.push_back({p.label, px, py});
        svg += "<circle cx=\"" + detail::fmt2(px) + "\" cy=\"" + detail::fmt2(py) +
               "\" r=\"3\" fill=\"" + color_of(p.group) + "\"/>\n";
        if (labeled >= spec.max_labels || p.label.empty()) continue;
        ++labeled;
        const double lw = detail::text_width(p.label, spec.label_font);
        const double lh = spec.label_font;
        double lx = px + 5.0;
        double ly = py - 5.0;
        for (int attempt = 0; attempt < 20; ++attempt) {
            detail::Box box{lx, ly - lh, lx + lw, ly};
            bool collision = false;
            for (const auto& b : label_boxes) {
                if (box.overlaps(b)) {
                    collision = true;
                    break;
                }
            }
            if (!collision) break;
            ly += lh + 2.0;  // push below the collider; deterministic and simple
        }
        label_boxes.push_back({lx, ly - lh, lx + lw, ly});
        labels_svg += "<text x=\"" + detail::fmt2(lx) + "\" y=\"" + detail::fmt2(ly) +
                      "\" font-size=\"" + detail::fmt2(spec.label_font) + "\" font-family=\"" +
                      spec.font_family + "\" fill=\"" + color_of(p.group) + "\">" +
                      detail::xml_escape(p.label) + "</text>\n";
    }
    svg += labels_svg;

    // Legend, groups in first-appearance order.
    double ly = spec.margin + 10.0;
    for (const auto& g : groups) {
        svg += "<rect x=\"" + detail::fmt2(spec.width - spec.margin - 110) + "\" y=\"" +
               detail::fmt2(ly - 9) + "\" width=\"10\" height=\"10\" fill=\"" + color_of(g) +
               "\"/>\n";
        svg += "<text x=\"" + detail::fmt2(spec.width - spec.margin - 95) + "\" y=\"" +
               detail::fmt2(ly) + "\" font-size=\"" + detail::fmt2(spec.label_font) +
               "\" font-family=\"" + spec.font_family + "\" fill=\"#333333\">" +
               detail::xml_escape(g) + "</text>\n";
        ly += 16.0;
    }
    svg += "</svg>\n";
    return result;
}

struct TrajectoryPoint {
    std::string year;
    double x = 0.0, y = 0.0;
};

inline std::string render_trajectory(const std::vector<TrajectoryPoint>& points,
                                     const PlaneAxes& axes, const PlotSpec& spec) {
    if (points.size() < 2) throw ArgumentError("render_trajectory: need at least 2 points");
    long long prev_year = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        detail::check_finite(points[i].x, "year " + points[i].year);
        detail::check_finite(points[i].y, "year " + points[i].year);
        long long y;
        try {
            y = std::stoll(points[i].year);
        } catch (const std::exception&) {
            throw PreconditionError("render_trajectory: non-numeric year \"" + points[i].year +
                                    "\"");
        }
        if (i > 0 && y <= prev_year) {
            throw PreconditionError(
                "render_trajectory: years must be strictly increasing; saw \"" +
                points[i].year + "\" after \"" + points[i - 1].year + "\"");
        }
        prev_year = y;
    }

    std::vector<PlanePoint> as_points;
    as_points.reserve(points.size());
    for (const auto& p : points) as_points.push_back({p.year, p.x, p.y, "trajectory"});
    // Reuse the plane mapping for consistent framing, then draw on top.
    PlotSpec base = spec;
    base.max_labels = 0;  // vertices get their own labels below
    PlaneResult plane = render_plane(as_points, axes, base);

    std::string svg = plane.svg;
    const std::string closing = "</svg>\n";
    svg.erase(svg.size() - closing.size());

    svg += "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
           "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">"
           "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#1565c0\"/></marker></defs>\n";
    for (std::size_t i = 0; i + 1 < plane.mapped.size(); ++i) {
        svg += "<line x1=\"" + detail::fmt2(plane.mapped[i].px) + "\" y1=\"" +
               detail::fmt2(plane.mapped[i].py) + "\" x2=\"" +
               detail::fmt2(plane.mapped[i + 1].px) + "\" y2=\"" +
               detail::fmt2(plane.mapped[i + 1].py) +
               "\" stroke=\"#1565c0\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
    }
    for (const auto& m : plane.mapped) {
        svg += "<text x=\"" + detail::fmt2(m.px + 6) + "\" y=\"" + detail::fmt2(m.py - 6) +
               "\" font-size=\"" + detail::fmt2(spec.label_font) + "\" font-family=\"" +
               spec.font_family + "\" fill=\"#333333\">" + detail::xml_escape(m.label) +
               "</text>\n";
    }
    svg += closing;
    return svg;
}

}  // namespace lexca

#ifndef GALRING_IO_HPP
#define GALRING_IO_HPP

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "config_count.hpp"
#include "error.hpp"
#include "ring.hpp"

namespace galring {

namespace io_detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

/// Non-blank lines with `#` comments removed, paired with 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string>> content_lines(std::istream& in) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (!t.empty()) out.emplace_back(no, std::move(t));
    }
    return out;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline unsigned parse_count(std::size_t line, const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) parse_fail(line, "expected a number, got '" + s + "'");
    try {
        return static_cast<unsigned>(std::stoul(s));
    } catch (const std::exception&) {
        parse_fail(line, "number out of range: " + s);
    }
}

/// Value of a `key=value` line, or nullopt when the key differs.
inline std::optional<std::string> keyed(const std::string& line, std::string_view key) {
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(std::string_view(line).substr(0, eq)) != key) return std::nullopt;
    return trim(std::string_view(line).substr(eq + 1));
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
    return in;
}

}  // namespace io_detail

/// Point-set file:
///   ring: p=3,e=1,k=1,f=0,1
///   d=2
///   1;2
///   0;1
/// Coordinates are separated by `;`, each a comma-separated coefficient tuple.
inline PointSet read_point_set(std::istream& in) {
    using namespace io_detail;
    const auto lines = content_lines(in);
    if (lines.size() < 2) fail(ErrorCode::ParseError, "point-set file needs a ring header and a d= line");
    const auto& [ring_line, header] = lines[0];
    if (header.rfind("ring:", 0) != 0) parse_fail(ring_line, "expected 'ring:' header");
    GaloisRing ring = [&] {
        try {
            return GaloisRing::parse(header.substr(5));
        } catch (const std::invalid_argument&) {
            parse_fail(ring_line, "malformed ring descriptor");
        }
    }();
    const auto dval = keyed(lines[1].second, "d");
    if (!dval) parse_fail(lines[1].first, "expected 'd=' line");
    const unsigned d = parse_count(lines[1].first, *dval);

    PointSet E(ring, d);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto& [no, text] = lines[i];
        Vec pt;
        std::stringstream ss(text);
        std::string coord;
        while (std::getline(ss, coord, ';')) {
            try {
                pt.push_back(ring.parse_element(coord));
            } catch (const Error& err) {
                parse_fail(no, err.what());
            }
        }
        if (pt.size() != d) parse_fail(no, "point has " + std::to_string(pt.size()) + " coordinates, expected " + std::to_string(d));
        E.insert(pt);
    }
    return E;
}

inline PointSet load_point_set(const std::string& path) {
    auto in = io_detail::open_input(path);
    return read_point_set(in);
}

inline std::string format_point(const GaloisRing& ring, const Vec& pt) {
    std::string out;
    for (std::size_t i = 0; i < pt.size(); ++i) out += (i ? ";" : "") + ring.format(pt[i]);
    return out;
}

inline std::string write_point_set(const PointSet& E) {
    std::string header = E.ring().descriptor();
    for (auto& c : header)
        if (c == ' ') c = ',';
    std::string out = "ring: " + header + "\nd=" + std::to_string(E.dim()) + "\n";
    for (const auto& pt : E.points()) out += format_point(E.ring(), pt) + "\n";
    return out;
}

/// Forest file: `m=N` then one `i j alpha` line per edge, vertices 1-based.
inline ForestSpec read_forest(std::istream& in, const GaloisRing& ring) {
    using namespace io_detail;
    const auto lines = content_lines(in);
    if (lines.empty()) fail(ErrorCode::ParseError, "forest file needs an 'm=' line");
    const auto mval = keyed(lines[0].second, "m");
    if (!mval) parse_fail(lines[0].first, "expected 'm=' line");
    const unsigned m = parse_count(lines[0].first, *mval);
    std::vector<ForestEdge> edges;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& [no, text] = lines[i];
        std::istringstream ss(text);
        std::string a, b, alpha, extra;
        if (!(ss >> a >> b >> alpha) || (ss >> extra)) parse_fail(no, "expected 'i j alpha'");
        const unsigned vi = parse_count(no, a), vj = parse_count(no, b);
        if (vi == 0 || vj == 0) parse_fail(no, "vertices are numbered from 1");
        Element al = [&] {
            try {
                return ring.parse_element(alpha);
            } catch (const Error& err) {
                parse_fail(no, err.what());
            }
        }();
        edges.push_back({vi - 1, vj - 1, std::move(al)});
    }
    return ForestSpec(m, std::move(edges));
}

inline ForestSpec load_forest(const std::string& path, const GaloisRing& ring) {
    auto in = io_detail::open_input(path);
    return read_forest(in, ring);
}

inline std::string write_forest(const GaloisRing& ring, const ForestSpec& forest) {
    std::string out = "m=" + std::to_string(forest.vertex_count()) + "\n";
    for (const auto& ed : forest.edges())
        out += std::to_string(ed.i + 1) + " " + std::to_string(ed.j + 1) + " " + ring.format(ed.alpha) + "\n";
    return out;
}

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
    return out + "\r\n";
}

}  // namespace galring

#endif  // GALRING_IO_HPP

#include "maflow/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "maflow/errors.hpp"

namespace maflow {

std::string format_double(Scalar v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

struct CsvReader {
    explicit CsvReader(const std::string& path_) : path(path_), in(path_) {
        if (!in) throw ParseError(path, 0, "-", "cannot open file");
    }

    bool next_row(std::vector<std::string>& fields, long& row_number) {
        std::string line;
        while (std::getline(in, line)) {
            ++row;
            if (line.empty()) continue;
            fields = split_csv_line(line);
            row_number = row;
            return true;
        }
        return false;
    }

    void expect_header(const std::string& expected) {
        std::vector<std::string> fields;
        long r;
        if (!next_row(fields, r)) throw ParseError(path, 1, "header", "missing header row");
        std::string got;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) got += ',';
            got += fields[i];
        }
        if (got != expected)
            throw ParseError(path, r, "header", "expected '" + expected + "', got '" + got + "'");
    }

    Scalar parse_double(const std::vector<std::string>& f, std::size_t idx, long r,
                        const char* name) {
        if (idx >= f.size()) throw ParseError(path, r, name, "missing field");
        try {
            std::size_t pos = 0;
            const Scalar v = std::stod(f[idx], &pos);
            if (pos != f[idx].size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ParseError(path, r, name, "not a number: '" + f[idx] + "'");
        }
    }

    int parse_flag(const std::vector<std::string>& f, std::size_t idx, long r, const char* name) {
        if (idx >= f.size()) throw ParseError(path, r, name, "missing field");
        if (f[idx] == "0") return 0;
        if (f[idx] == "1") return 1;
        throw ParseError(path, r, name, "expected 0 or 1, got '" + f[idx] + "'");
    }

    std::string path;
    std::ifstream in;
    long row = 0;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

NodeSet build_nodeset(const std::string& path, std::vector<Vec2> pts, std::vector<bool> bnd) {
    std::vector<Vec2> boundary_pts;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (bnd[i]) boundary_pts.push_back(pts[i]);
    ConvexPolygon domain = convex_hull(boundary_pts);
    try {
        return NodeSet(std::move(pts), std::move(bnd), std::move(domain));
    } catch (const std::exception& e) {
        throw ParseError(path, 0, "-", e.what());
    }
}

} // namespace

PLFunction read_node_csv(const std::string& path) {
    CsvReader r(path);
    r.expect_header("x,y,boundary_flag,value");
    std::vector<Vec2> pts;
    std::vector<bool> bnd;
    std::vector<Scalar> vals;
    std::vector<std::string> f;
    long row;
    while (r.next_row(f, row)) {
        if (f.size() != 4) throw ParseError(path, row, "-", "expected 4 fields");
        pts.emplace_back(r.parse_double(f, 0, row, "x"), r.parse_double(f, 1, row, "y"));
        bnd.push_back(r.parse_flag(f, 2, row, "boundary_flag") != 0);
        vals.push_back(r.parse_double(f, 3, row, "value"));
    }
    NodeSet ns = build_nodeset(path, std::move(pts), std::move(bnd));
    VecX v = Eigen::Map<VecX>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    return PLFunction(std::move(ns), std::move(v));
}

void write_node_csv(const std::string& path, const PLFunction& fn) {
    auto out = open_out(path);
    out << "x,y,boundary_flag,value\n";
    for (int i = 0; i < fn.nodes.size(); ++i) {
        const Vec2& p = fn.nodes.point(i);
        out << format_double(p.x()) << ',' << format_double(p.y()) << ','
            << (fn.nodes.is_boundary(i) ? 1 : 0) << ',' << format_double(fn.values[i]) << '\n';
    }
}

void write_measure_csv(const std::string& path, const NodeSet& nodes, const AtomicMeasure& mu) {
    auto out = open_out(path);
    out << "x,y,mass\n";
    for (int i = 0; i < nodes.size(); ++i) {
        const Vec2& p = nodes.point(i);
        out << format_double(p.x()) << ',' << format_double(p.y()) << ','
            << format_double(mu.masses[i]) << '\n';
    }
}

DirichletProblem read_problem_csv(const std::string& path) {
    CsvReader r(path);
    r.expect_header("x,y,boundary_flag,boundary_value,mass");
    std::vector<Vec2> pts;
    std::vector<bool> bnd;
    std::vector<Scalar> g, m;
    std::vector<std::string> f;
    long row;
    while (r.next_row(f, row)) {
        if (f.size() != 5) throw ParseError(path, row, "-", "expected 5 fields");
        pts.emplace_back(r.parse_double(f, 0, row, "x"), r.parse_double(f, 1, row, "y"));
        const bool b = r.parse_flag(f, 2, row, "boundary_flag") != 0;
        bnd.push_back(b);
        g.push_back(r.parse_double(f, 3, row, "boundary_value"));
        const Scalar mass = r.parse_double(f, 4, row, "mass");
        if (b && mass != 0.0) throw ParseError(path, row, "mass", "boundary rows must carry mass 0");
        if (mass < 0.0) throw ParseError(path, row, "mass", "mass must be >= 0");
        m.push_back(mass);
    }
    DirichletProblem p;
    p.nodes = build_nodeset(path, std::move(pts), std::move(bnd));
    p.boundary_values = Eigen::Map<VecX>(g.data(), static_cast<Eigen::Index>(g.size()));
    p.target = AtomicMeasure(Eigen::Map<VecX>(m.data(), static_cast<Eigen::Index>(m.size())));
    return p;
}

void write_problem_csv(const std::string& path, const DirichletProblem& p) {
    auto out = open_out(path);
    out << "x,y,boundary_flag,boundary_value,mass\n";
    for (int i = 0; i < p.nodes.size(); ++i) {
        const Vec2& pt = p.nodes.point(i);
        const bool b = p.nodes.is_boundary(i);
        out << format_double(pt.x()) << ',' << format_double(pt.y()) << ',' << (b ? 1 : 0) << ','
            << format_double(b ? p.boundary_values[i] : 0.0) << ','
            << format_double(b ? 0.0 : p.target.masses[i]) << '\n';
    }
}

GridField read_grid_csv(const std::string& path) {
    CsvReader r(path);
    r.expect_header("i,j,x,y,value,mask");
    struct Row {
        int i, j;
        Scalar x, y, value;
        bool mask;
    };
    std::vector<Row> rows;
    std::vector<std::string> f;
    long row;
    int nx = 0, ny = 0;
    while (r.next_row(f, row)) {
        if (f.size() != 6) throw ParseError(path, row, "-", "expected 6 fields");
        Row rec;
        rec.i = static_cast<int>(r.parse_double(f, 0, row, "i"));
        rec.j = static_cast<int>(r.parse_double(f, 1, row, "j"));
        rec.x = r.parse_double(f, 2, row, "x");
        rec.y = r.parse_double(f, 3, row, "y");
        rec.value = r.parse_double(f, 4, row, "value");
        rec.mask = r.parse_flag(f, 5, row, "mask") != 0;
        if (rec.i < 0 || rec.j < 0) throw ParseError(path, row, "i", "negative index");
        nx = std::max(nx, rec.i + 1);
        ny = std::max(ny, rec.j + 1);
        rows.push_back(rec);
    }
    if (rows.size() != static_cast<std::size_t>(nx) * ny)
        throw ParseError(path, 0, "-", "grid rows do not cover nx*ny cells");
    // Spacing and origin from the first two distinct coordinates.
    Scalar h = 0.0;
    for (const Row& rec : rows)
        if (rec.i == 1) {
            for (const Row& rec0 : rows)
                if (rec0.i == 0) {
                    h = rec.x - rec0.x;
                    break;
                }
            break;
        }
    if (h <= 0.0) throw ParseError(path, 0, "x", "could not infer positive spacing");
    Scalar x0 = 0.0, y0 = 0.0;
    for (const Row& rec : rows)
        if (rec.i == 0 && rec.j == 0) {
            x0 = rec.x - 0.5 * h;
            y0 = rec.y - 0.5 * h;
        }
    MaskXX mask = MaskXX::Constant(nx, ny, false);
    ArrXX values = ArrXX::Zero(nx, ny);
    std::vector<bool> seen(static_cast<std::size_t>(nx) * ny, false);
    for (const Row& rec : rows) {
        const std::size_t key = static_cast<std::size_t>(rec.i) * ny + rec.j;
        if (seen[key]) throw ParseError(path, 0, "i", "duplicate cell index");
        seen[key] = true;
        mask(rec.i, rec.j) = rec.mask;
        values(rec.i, rec.j) = rec.value;
    }
    GridField g(nx, ny, h, Vec2(x0, y0), std::move(mask));
    g.values() = values;
    // Coordinate consistency, tolerant to formatting roundoff.
    for (const Row& rec : rows) {
        if (std::abs(g.x(rec.i) - rec.x) > 1e-9 * std::max(1.0, std::abs(rec.x)) ||
            std::abs(g.y(rec.j) - rec.y) > 1e-9 * std::max(1.0, std::abs(rec.y)))
            throw ParseError(path, 0, "x", "cell coordinates are not a uniform lattice");
    }
    return g;
}

void write_grid_csv(const std::string& path, const GridField& g) {
    auto out = open_out(path);
    out << "i,j,x,y,value,mask\n";
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            const bool m = g.in_domain(i, j);
            out << i << ',' << j << ',' << format_double(g.x(i)) << ',' << format_double(g.y(j))
                << ',' << format_double(m ? g(i, j) : 0.0) << ',' << (m ? 1 : 0) << '\n';
        }
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv) {
    auto out = open_out(path);
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

std::map<std::string, std::string> read_key_value(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "-", "cannot open file");
    std::map<std::string, std::string> kv;
    std::string line;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        // Trim.
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t");
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(path, row, "-", "expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        const auto ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        const auto vb = val.find_first_not_of(" \t");
        val = vb == std::string::npos ? "" : val.substr(vb);
        kv[key] = val;
    }
    return kv;
}

void write_pgm(const std::string& path, const GridField& g) {
    Scalar lo = std::numeric_limits<Scalar>::infinity();
    Scalar hi = -lo;
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j)
            if (g.in_domain(i, j)) {
                lo = std::min(lo, g(i, j));
                hi = std::max(hi, g(i, j));
            }
    const Scalar span = hi - lo;
    auto out = open_out(path);
    out << "P5\n" << g.nx() << ' ' << g.ny() << "\n65535\n";
    for (int j = g.ny() - 1; j >= 0; --j)
        for (int i = 0; i < g.nx(); ++i) {
            uint16_t pix = 0;
            if (g.in_domain(i, j))
                pix = span > 0 ? static_cast<uint16_t>(
                                     std::lround((g(i, j) - lo) / span * 65535.0))
                               : static_cast<uint16_t>(32768);
            const unsigned char bytes[2] = {static_cast<unsigned char>(pix >> 8),
                                            static_cast<unsigned char>(pix & 0xff)};
            out.write(reinterpret_cast<const char*>(bytes), 2);
        }
}

} // namespace maflow

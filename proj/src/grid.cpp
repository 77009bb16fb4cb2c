#include "omcf/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace omcf {

double Grid::cell_diag() const { return std::sqrt(hx * hx + hy * hy); }

bool Grid::operator==(const Grid& o) const {
    return nx == o.nx && ny == o.ny && x0 == o.x0 && y0 == o.y0 && hx == o.hx && hy == o.hy;
}

Grid make_grid(int nx, int ny, double xmin, double xmax, double ymin, double ymax) {
    if (nx < 3 || ny < 3)
        throw std::invalid_argument("make_grid: node counts must be >= 3");
    if (!(xmax > xmin) || !(ymax > ymin))
        throw std::invalid_argument("make_grid: degenerate bounds");
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.x0 = xmin;
    g.y0 = ymin;
    g.hx = (xmax - xmin) / (nx - 1);
    g.hy = (ymax - ymin) / (ny - 1);
    return g;
}

int BinarySet::count_inside() const {
    int n = 0;
    for (auto b : inside) n += (b != 0);
    return n;
}

std::size_t ContourSet::vertex_count() const {
    std::size_t n = 0;
    for (const auto& l : loops) n += l.points.size();
    return n;
}

void require_finite(const ScalarField& f, const char* what) {
    for (double v : f.values)
        if (!std::isfinite(v))
            throw std::runtime_error(std::string("non-finite value in ") + what);
}

namespace {

void write_field_values(std::ofstream& out, const Grid& g, const std::vector<double>& vals) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g %.17g %.17g", g.nx, g.ny, g.x0, g.y0,
                  g.hx, g.hy);
    out << buf << '\n';
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", vals[g.idx(i, j)]);
            out << buf << (i + 1 == g.nx ? '\n' : ' ');
        }
    }
}

std::pair<Grid, std::vector<double>> read_field_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open field file: " + path);
    Grid g;
    if (!(in >> g.nx >> g.ny >> g.x0 >> g.y0 >> g.hx >> g.hy))
        throw std::runtime_error("bad field header in " + path);
    if (g.nx < 3 || g.ny < 3 || !(g.hx > 0) || !(g.hy > 0))
        throw std::runtime_error("invalid grid in " + path);
    std::vector<double> vals(static_cast<std::size_t>(g.nx) * g.ny);
    for (auto& v : vals)
        if (!(in >> v)) throw std::runtime_error("truncated field file: " + path);
    return {g, std::move(vals)};
}

}  // namespace

void write_field(const ScalarField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write field file: " + path);
    write_field_values(out, f.grid, f.values);
}

ScalarField read_field(const std::string& path) {
    auto [g, vals] = read_field_values(path);
    ScalarField f;
    f.grid = g;
    f.values = std::move(vals);
    require_finite(f, path.c_str());
    return f;
}

void write_binary_set(const BinarySet& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write set file: " + path);
    std::vector<double> vals(s.inside.size());
    for (std::size_t n = 0; n < vals.size(); ++n) vals[n] = s.inside[n] ? 1.0 : 0.0;
    write_field_values(out, s.grid, vals);
}

BinarySet read_binary_set(const std::string& path) {
    auto [g, vals] = read_field_values(path);
    BinarySet s(g);
    for (std::size_t n = 0; n < vals.size(); ++n) s.inside[n] = vals[n] > 0.5 ? 1 : 0;
    return s;
}

void write_contours(const ContourSet& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write contour file: " + path);
    char buf[64];
    bool first = true;
    for (const auto& loop : c.loops) {
        if (!first) out << '\n';
        first = false;
        out << (loop.closed ? "#closed" : "#open") << '\n';
        for (const auto& p : loop.points) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", p[0], p[1]);
            out << buf << '\n';
        }
    }
}

void write_pgm_preview(const ScalarField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write preview: " + path);
    double maxabs = 0.0;
    for (double v : f.values) maxabs = std::max(maxabs, std::fabs(v));
    const double scale = maxabs > 0 ? 127.0 / maxabs : 0.0;
    out << "P5\n" << f.grid.nx << ' ' << f.grid.ny << "\n255\n";
    std::vector<unsigned char> row(f.grid.nx);
    for (int j = f.grid.ny - 1; j >= 0; --j) {  // top row = max y
        for (int i = 0; i < f.grid.nx; ++i) {
            double g = 128.0 + scale * f.at(i, j);
            row[i] = static_cast<unsigned char>(g < 0 ? 0 : (g > 255 ? 255 : g));
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
}

}  // namespace omcf

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace omcf {

// Node-centered uniform 2D grid. Node (i,j) sits at (x0 + i*hx, y0 + j*hy),
// indexing is row-major with stride nx.
struct Grid {
    int nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0;
    double hx = 0.0, hy = 0.0;

    int count() const { return nx * ny; }
    int idx(int i, int j) const { return j * nx + i; }
    double x(int i) const { return x0 + i * hx; }
    double y(int j) const { return y0 + j * hy; }
    double min_spacing() const { return hx < hy ? hx : hy; }
    double cell_diag() const;

    bool operator==(const Grid& o) const;
};

// nx, ny >= 3; bounds [xmin,xmax]x[ymin,ymax] nondegenerate.
Grid make_grid(int nx, int ny, double xmin, double xmax, double ymin, double ymax);

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.count(), fill) {}

    double& at(int i, int j) { return values[grid.idx(i, j)]; }
    double at(int i, int j) const { return values[grid.idx(i, j)]; }
};

struct BinarySet {
    Grid grid;
    std::vector<std::uint8_t> inside;

    BinarySet() = default;
    explicit BinarySet(const Grid& g, bool fill = false)
        : grid(g), inside(g.count(), fill ? 1 : 0) {}

    bool at(int i, int j) const { return inside[grid.idx(i, j)] != 0; }
    int count_inside() const;
};

struct Polyline {
    std::vector<std::array<double, 2>> points;
    bool closed = false;
};

struct ContourSet {
    std::vector<Polyline> loops;

    bool empty() const { return loops.empty(); }
    std::size_t vertex_count() const;
};

// Field file format: first line "nx ny x0 y0 hx hy", then ny lines of nx
// space-separated values, row j at constant y, x increasing.
void write_field(const ScalarField& f, const std::string& path);
ScalarField read_field(const std::string& path);

void write_binary_set(const BinarySet& s, const std::string& path);
BinarySet read_binary_set(const std::string& path);

// Contour file: "#closed" or "#open" line before each loop, one "x y" pair
// per line, blank line between loops.
void write_contours(const ContourSet& c, const std::string& path);

// 8-bit grayscale PGM, linear value-to-gray with the zero level at mid-gray.
void write_pgm_preview(const ScalarField& f, const std::string& path);

void require_finite(const ScalarField& f, const char* what);

}  // namespace omcf

// Oriented triangulated surfaces (closed or with boundary): validation,
// Euler characteristic, boundary circles, doubling, and barycentric
// subdivision. Faces are oriented by vertex order; a consistent
// orientation traverses every interior edge once in each direction.

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace traverse {

struct SurfaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TriangulatedSurface {
    int n_vertices = 0;
    std::vector<std::array<int, 3>> triangles;        // oriented by vertex order
    std::vector<std::array<double, 3>> coords;        // optional geometry

    struct Edge {
        int a, b;                // a < b
        std::vector<int> tris;   // incident triangle indices
    };
    // derived on validate()
    std::vector<Edge> edges;
};

// Builds derived data and checks: valid indices, no duplicate triangles,
// every edge in at most two triangles, orientation consistency on interior
// edges, vertex links single arc/circle, every vertex used.
TriangulatedSurface make_surface(int n_vertices, std::vector<std::array<int, 3>> triangles,
                                 std::vector<std::array<double, 3>> coords = {});

int euler_characteristic(const TriangulatedSurface& T);
bool is_closed(const TriangulatedSurface& T);
bool is_connected(const TriangulatedSurface& T);
std::vector<std::vector<int>> boundary_circles(const TriangulatedSurface& T);
// closed connected: (2 - chi) / 2; with b boundary circles: (2 - chi - b) / 2
int genus(const TriangulatedSurface& T);

// true iff the signed sum of all oriented triangles has zero boundary
bool fundamental_cycle_closes(const TriangulatedSurface& T);

// glue a mirror copy along the boundary circles, mirror triangles with
// reversed orientation; result is closed
TriangulatedSurface double_surface(const TriangulatedSurface& T);

TriangulatedSurface barycentric_subdivide(const TriangulatedSurface& T);

// OFF-style text: "OFF\n<nv> <nf> <ne>\n" then vertex coordinate lines,
// then "3 a b c" face lines
TriangulatedSurface surface_from_off_text(const std::string& text);
TriangulatedSurface load_surface(const std::string& path);
std::string surface_to_off(const TriangulatedSurface& T);

}  // namespace traverse

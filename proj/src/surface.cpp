#include "traverse/surface.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace traverse {

namespace {

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// +1 if triangle t traverses edge (a,b) in that direction, -1 for (b,a)
int edge_direction(const std::array<int, 3>& t, int a, int b) {
    for (int i = 0; i < 3; ++i) {
        if (t[i] == a && t[(i + 1) % 3] == b) return 1;
        if (t[i] == b && t[(i + 1) % 3] == a) return -1;
    }
    return 0;
}

}  // namespace

TriangulatedSurface make_surface(int n_vertices, std::vector<std::array<int, 3>> triangles,
                                 std::vector<std::array<double, 3>> coords) {
    TriangulatedSurface T;
    T.n_vertices = n_vertices;
    T.triangles = std::move(triangles);
    T.coords = std::move(coords);
    if (n_vertices < 3 || T.triangles.empty())
        throw SurfaceError("surface needs at least 3 vertices and 1 triangle");
    if (!T.coords.empty() && static_cast<int>(T.coords.size()) != n_vertices)
        throw SurfaceError("coordinate count does not match vertex count");

    std::set<std::array<int, 3>> seen;
    std::vector<bool> used(n_vertices, false);
    for (const auto& t : T.triangles) {
        for (int v : t) {
            if (v < 0 || v >= n_vertices) throw SurfaceError("triangle vertex out of range");
            used[v] = true;
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw SurfaceError("degenerate triangle with repeated vertex");
        // canonical cyclic rotation: two faces may share a vertex set only
        // with opposite orientations (e.g. the double of one triangle)
        std::array<int, 3> key = t;
        for (int r = 0; r < 2; ++r) {
            std::array<int, 3> rot = {key[1], key[2], key[0]};
            if (rot < key) key = rot;
            rot = {key[1], key[2], key[0]};
            if (rot < key) key = rot;
        }
        if (!seen.insert(key).second) throw SurfaceError("duplicate triangle");
    }
    for (int v = 0; v < n_vertices; ++v)
        if (!used[v]) throw SurfaceError("isolated vertex " + std::to_string(v));

    std::map<std::pair<int, int>, int> edge_index;
    for (size_t ti = 0; ti < T.triangles.size(); ++ti) {
        const auto& t = T.triangles[ti];
        for (int i = 0; i < 3; ++i) {
            auto key = ordered(t[i], t[(i + 1) % 3]);
            auto it = edge_index.find(key);
            if (it == edge_index.end()) {
                it = edge_index.emplace(key, static_cast<int>(T.edges.size())).first;
                T.edges.push_back({key.first, key.second, {}});
            }
            T.edges[it->second].tris.push_back(static_cast<int>(ti));
        }
    }
    for (const auto& e : T.edges) {
        if (e.tris.size() > 2)
            throw SurfaceError("edge shared by more than two triangles: non-manifold");
        if (e.tris.size() == 2) {
            int d0 = edge_direction(T.triangles[e.tris[0]], e.a, e.b);
            int d1 = edge_direction(T.triangles[e.tris[1]], e.a, e.b);
            if (d0 == d1) throw SurfaceError("inconsistent orientation across an edge");
        }
    }

    // link condition: the triangles around each vertex form one fan
    for (int v = 0; v < n_vertices; ++v) {
        std::vector<int> inc;
        for (size_t ti = 0; ti < T.triangles.size(); ++ti)
            for (int c : T.triangles[ti])
                if (c == v) inc.push_back(static_cast<int>(ti));
        if (inc.empty()) continue;
        // union-find over incident triangles joined by shared edges at v
        std::map<int, int> parent;
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int t : inc) parent[t] = t;
        for (const auto& e : T.edges) {
            if (e.a != v && e.b != v) continue;
            if (e.tris.size() == 2) parent[find(e.tris[0])] = find(e.tris[1]);
        }
        std::set<int> roots;
        for (int t : inc) roots.insert(find(t));
        if (roots.size() != 1)
            throw SurfaceError("vertex link is not a single arc/circle at vertex " +
                               std::to_string(v));
    }
    return T;
}

int euler_characteristic(const TriangulatedSurface& T) {
    return T.n_vertices - static_cast<int>(T.edges.size()) +
           static_cast<int>(T.triangles.size());
}

bool is_closed(const TriangulatedSurface& T) {
    for (const auto& e : T.edges)
        if (e.tris.size() != 2) return false;
    return true;
}

bool is_connected(const TriangulatedSurface& T) {
    std::vector<int> parent(T.n_vertices);
    for (int i = 0; i < T.n_vertices; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : T.edges) parent[find(e.a)] = find(e.b);
    int root = find(0);
    for (int v = 1; v < T.n_vertices; ++v)
        if (find(v) != root) return false;
    return true;
}

std::vector<std::vector<int>> boundary_circles(const TriangulatedSurface& T) {
    // boundary edges, oriented opposite to their unique triangle
    std::map<int, int> next;  // directed boundary edge a -> b
    for (const auto& e : T.edges) {
        if (e.tris.size() != 1) continue;
        int d = edge_direction(T.triangles[e.tris[0]], e.a, e.b);
        // triangle traverses (a,b) with sign d; boundary keeps that direction
        int from = d > 0 ? e.a : e.b;
        int to = d > 0 ? e.b : e.a;
        if (next.count(from)) throw SurfaceError("boundary is not a disjoint union of circles");
        next[from] = to;
    }
    std::vector<std::vector<int>> circles;
    std::set<int> visited;
    for (const auto& [from, to] : next) {
        if (visited.count(from)) continue;
        std::vector<int> circle;
        int v = from;
        do {
            circle.push_back(v);
            visited.insert(v);
            auto it = next.find(v);
            if (it == next.end()) throw SurfaceError("open boundary chain");
            v = it->second;
        } while (v != from);
        circles.push_back(std::move(circle));
    }
    return circles;
}

int genus(const TriangulatedSurface& T) {
    if (!is_connected(T)) throw SurfaceError("genus: surface must be connected");
    int b = static_cast<int>(boundary_circles(T).size());
    int g2 = 2 - euler_characteristic(T) - b;
    if (g2 < 0 || g2 % 2 != 0) throw SurfaceError("genus: inconsistent characteristic");
    return g2 / 2;
}

bool fundamental_cycle_closes(const TriangulatedSurface& T) {
    for (const auto& e : T.edges) {
        int sum = 0;
        for (int ti : e.tris) sum += edge_direction(T.triangles[ti], e.a, e.b);
        if (sum != 0) return false;
    }
    return true;
}

TriangulatedSurface double_surface(const TriangulatedSurface& T) {
    auto circles = boundary_circles(T);
    if (circles.empty()) throw SurfaceError("double_surface: surface is already closed");
    std::vector<bool> on_boundary(T.n_vertices, false);
    for (const auto& c : circles)
        for (int v : c) on_boundary[v] = true;
    std::vector<int> mirror(T.n_vertices);
    int next_id = T.n_vertices;
    for (int v = 0; v < T.n_vertices; ++v) mirror[v] = on_boundary[v] ? v : next_id++;

    std::vector<std::array<int, 3>> tris = T.triangles;
    for (const auto& t : T.triangles)
        tris.push_back({mirror[t[0]], mirror[t[2]], mirror[t[1]]});

    std::vector<std::array<double, 3>> coords;
    if (!T.coords.empty()) {
        coords.assign(next_id, {0, 0, 0});
        for (int v = 0; v < T.n_vertices; ++v) {
            coords[v] = T.coords[v];
            if (!on_boundary[v]) {
                coords[mirror[v]] = T.coords[v];
                coords[mirror[v]][2] = -T.coords[v][2] - 0.1;  // keep copies apart
            }
        }
    }
    return make_surface(next_id, std::move(tris), std::move(coords));
}

TriangulatedSurface barycentric_subdivide(const TriangulatedSurface& T) {
    int next_id = T.n_vertices;
    std::map<std::pair<int, int>, int> edge_mid;
    for (const auto& e : T.edges) edge_mid[{e.a, e.b}] = next_id++;
    int center0 = next_id;
    next_id += static_cast<int>(T.triangles.size());

    std::vector<std::array<int, 3>> tris;
    for (size_t ti = 0; ti < T.triangles.size(); ++ti) {
        const auto& t = T.triangles[ti];
        int c = center0 + static_cast<int>(ti);
        for (int i = 0; i < 3; ++i) {
            int a = t[i], b = t[(i + 1) % 3];
            int m = edge_mid.at(ordered(a, b));
            tris.push_back({a, m, c});
            tris.push_back({m, b, c});
        }
    }
    std::vector<std::array<double, 3>> coords;
    if (!T.coords.empty()) {
        coords.assign(next_id, {0, 0, 0});
        for (int v = 0; v < T.n_vertices; ++v) coords[v] = T.coords[v];
        for (const auto& e : T.edges) {
            int m = edge_mid.at({e.a, e.b});
            for (int k = 0; k < 3; ++k)
                coords[m][k] = 0.5 * (T.coords[e.a][k] + T.coords[e.b][k]);
        }
        for (size_t ti = 0; ti < T.triangles.size(); ++ti) {
            const auto& t = T.triangles[ti];
            for (int k = 0; k < 3; ++k)
                coords[center0 + ti][k] =
                    (T.coords[t[0]][k] + T.coords[t[1]][k] + T.coords[t[2]][k]) / 3.0;
        }
    }
    return make_surface(next_id, std::move(tris), std::move(coords));
}

TriangulatedSurface surface_from_off_text(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    if (!(in >> tok) || tok != "OFF") throw SurfaceError("complex file must start with OFF");
    int nv = 0, nf = 0, ne = 0;
    if (!(in >> nv >> nf >> ne)) throw SurfaceError("malformed OFF header");
    std::vector<std::array<double, 3>> coords(nv);
    for (int i = 0; i < nv; ++i)
        if (!(in >> coords[i][0] >> coords[i][1] >> coords[i][2]))
            throw SurfaceError("malformed OFF vertex line");
    std::vector<std::array<int, 3>> tris(nf);
    for (int i = 0; i < nf; ++i) {
        int k;
        if (!(in >> k) || k != 3) throw SurfaceError("only triangle faces are supported");
        if (!(in >> tris[i][0] >> tris[i][1] >> tris[i][2]))
            throw SurfaceError("malformed OFF face line");
    }
    return make_surface(nv, std::move(tris), std::move(coords));
}

TriangulatedSurface load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SurfaceError("cannot open complex file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return surface_from_off_text(ss.str());
}

std::string surface_to_off(const TriangulatedSurface& T) {
    std::ostringstream out;
    out << "OFF\n" << T.n_vertices << " " << T.triangles.size() << " " << T.edges.size()
        << "\n";
    for (int v = 0; v < T.n_vertices; ++v) {
        if (!T.coords.empty())
            out << T.coords[v][0] << " " << T.coords[v][1] << " " << T.coords[v][2] << "\n";
        else
            out << "0 0 0\n";
    }
    for (const auto& t : T.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    return out.str();
}

}  // namespace traverse

#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tv {

// facet i of a simplex is the face opposite vertex slot i; perm[k] is the
// slot of simplex b that slot k of simplex a is glued to (perm[fa] == fb).
struct Gluing {
    int a = 0, fa = 0, b = 0, fb = 0;
    std::vector<int> perm;
};

struct GluingSpec {
    int dim = 3;
    int simplex_count = 0;
    std::vector<Gluing> gluings;
};

GluingSpec parse_gluing_spec(const std::string &text);
GluingSpec parse_gluing_spec_json(const std::string &text);
std::string serialize_gluing_spec(const GluingSpec &spec);
std::string serialize_gluing_spec_json(const GluingSpec &spec);
void validate_gluing_spec(const GluingSpec &spec);

struct EdgeRef {
    int cls = -1;
    int sign = 1;  // +1 when the class direction agrees with the queried direction
};

struct Adjacent {
    int simplex = -1;
    int facet = -1;
    std::array<int, 4> perm{};
    bool glued() const { return simplex >= 0; }
};

// A triangle class with its corners in one representative simplex and the
// oriented edges k->l, l->m, m->k.
struct TriangleClass {
    int simplex = 0;
    int facet = -1;  // -1 in dimension 2 (the simplex itself)
    std::array<int, 3> corners{};
    std::array<EdgeRef, 3> edges{};
    int incidences = 0;
    bool boundary = false;
};

// Quotient of tetrahedra (dim 3) or triangles (dim 2) by facet gluings.
// Classes are numbered by first occurrence in (simplex, slot) order.
class Triangulation {
public:
    static Triangulation build(const GluingSpec &spec, int orientation_seed = 1);

    int dim() const { return spec_.dim; }
    int simplex_count() const { return spec_.simplex_count; }
    int vertex_count() const { return n_vertices_; }
    int edge_count() const { return static_cast<int>(edge_tail_.size()); }
    int triangle_count() const { return static_cast<int>(triangles_.size()); }
    int euler_characteristic() const;
    bool closed() const;

    int vertex_of(int s, int slot) const { return vertex_[s][slot]; }
    EdgeRef edge_of(int s, int i, int j) const;
    int triangle_of(int s, int facet) const { return face_[s][facet]; }
    int orientation(int s) const { return orient_[s]; }
    const Adjacent &adjacent(int s, int facet) const { return adj_[s][facet]; }
    int edge_tail(int e) const { return edge_tail_[e]; }
    int edge_head(int e) const { return edge_head_[e]; }
    const TriangleClass &triangle(int t) const { return triangles_[t]; }
    const std::vector<TriangleClass> &triangles() const { return triangles_; }
    bool vertex_on_boundary(int v) const { return boundary_vertex_[v]; }
    bool edge_on_boundary(int e) const { return boundary_edge_[e]; }
    const GluingSpec &spec() const { return spec_; }

private:
    GluingSpec spec_;
    int n_vertices_ = 0;
    std::vector<std::array<int, 4>> vertex_;
    std::vector<std::array<EdgeRef, 6>> edge_;
    std::vector<std::array<int, 4>> face_;
    std::vector<int> orient_;
    std::vector<std::array<Adjacent, 4>> adj_;
    std::vector<int> edge_tail_, edge_head_;
    std::vector<TriangleClass> triangles_;
    std::vector<char> boundary_vertex_, boundary_edge_;
};

using Triangulation3 = Triangulation;
using Surface2 = Triangulation;

// index of the slot pair {i,j} in a simplex of the given dimension
int pair_index(int dim, int i, int j);
int perm_sign(const std::vector<int> &perm);

struct BoundarySurface {
    Surface2 surface;
    std::vector<std::pair<int, int>> faces;  // (tet, facet) for each surface triangle
    std::vector<EdgeRef> edge_map;           // surface edge class -> 3d edge class
    std::vector<int> vertex_map;
};

BoundarySurface boundary_surface(const Triangulation3 &t);

// Orientation of every edge class (true: keep class direction) such that every
// simplex gets a total order on its corners.
struct Branching {
    std::vector<char> forward;
    // corners of simplex s listed in increasing branch order
    std::vector<std::array<int, 4>> order;
};

Branching find_branching(const Triangulation &t);
bool branching_valid(const Triangulation &t, const Branching &b);

// BFS spanning forest. Returns edge classes; parent links are used by gauge fixing.
struct SpanningTree {
    std::vector<int> edges;
    std::vector<int> parent_edge;  // per vertex, -1 at roots
    std::vector<int> parent_vertex;
    std::vector<int> order;        // vertices in BFS order
};

SpanningTree spanning_tree(const Triangulation &t, int root);
SpanningTree spanning_forest(const Triangulation &t, const std::vector<char> &roots);

// Pachner moves. The edge map lists, for every edge class of the triangulation
// with fewer edges, the corresponding class in the one with more edges.
struct MoveResult {
    Triangulation3 result;
    bool result_is_larger = true;
    std::vector<EdgeRef> edge_map;
};

MoveResult pachner_14(const Triangulation3 &t, int tet);
MoveResult pachner_41(const Triangulation3 &t, int vertex);
MoveResult pachner_23(const Triangulation3 &t, int triangle);
MoveResult pachner_32(const Triangulation3 &t, int edge);

struct Prism {
    Triangulation3 tri;
    std::vector<EdgeRef> bottom_edges;  // surface edge class -> 3d edge class
    std::vector<EdgeRef> top_edges;
    std::vector<int> bottom_triangles;  // surface triangle -> 3d triangle class
    std::vector<int> top_triangles;
    std::vector<int> bottom_vertices;
    std::vector<int> top_vertices;
};

Prism prism(const Surface2 &s, const Branching &b);
// Sigma x I cut into the given number of layers
Prism prism_layers(const Surface2 &s, const Branching &b, int layers);
// For the mapping torus the "top" maps coincide with the bottom ones.
Prism mapping_torus_identity(const Surface2 &s, const Branching &b);
GluingSpec prism_spec(const Surface2 &s, const Branching &b, int layers, bool close_up);

GluingSpec sphere_s3();
GluingSpec three_torus();
GluingSpec lens(int p, int q);
GluingSpec surface_torus();
GluingSpec surface_genus(int g);
GluingSpec disjoint_union(const GluingSpec &a, const GluingSpec &b);

} // namespace tv

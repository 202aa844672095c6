#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "tv/category.hpp"
#include "tv/scalar.hpp"
#include "tv/triangulation.hpp"

namespace tv {

// Labels per edge class, read along the class direction (edge_tail -> edge_head).
using Coloring = std::vector<int>;
// Graduator elements per edge class, read along the class direction.
using GammaColoring = std::vector<int>;

struct HomotopyClass {
    GammaColoring rep;     // canonical representative
    std::vector<int> tag;  // rep restricted to the generator edges

    friend bool operator<(const HomotopyClass &a, const HomotopyClass &b) { return a.rep < b.rep; }
    friend bool operator==(const HomotopyClass &a, const HomotopyClass &b) { return a.rep == b.rep; }
};

// Every coloring exactly once; `pinned` holds a label or -1 per edge class.
// Admissibility is checked on every triangle class.
std::vector<Coloring> enumerate_colorings(const Triangulation &t, const FusionData &f,
                                          const std::vector<int> &pinned = {});
// Same over the graduator: colorings whose triangle products are the identity.
std::vector<GammaColoring> enumerate_gamma_colorings(const Triangulation &t, const Group &g,
                                                     const std::vector<int> &pinned = {});

GammaColoring project(const Coloring &c, const Graduator &g);
// True when every triangle of t has product identity.
bool is_gamma_coloring(const Triangulation &t, const Group &g, const GammaColoring &c);

// Gauge fixing on a spanning forest plus, in the closed case, minimisation
// over simultaneous conjugation per component.
class Canonicalizer {
public:
    // boundary_fixed: gauges are trivial on boundary vertices (relative classes).
    // tag_edges: preferred generator edges for display tags; the remaining
    // generators are chosen by class index.
    Canonicalizer(const Triangulation &t, const Group &g, bool boundary_fixed,
                  const std::vector<int> &tag_edges = {});

    HomotopyClass canonical(const GammaColoring &c) const;
    // c'(e) = delta(tail) c(e) delta(head)^-1
    GammaColoring apply_gauge(const GammaColoring &c, const std::vector<int> &delta) const;
    const std::vector<int> &generators() const { return generators_; }
    const SpanningTree &tree() const { return tree_; }

private:
    const Triangulation *t_;
    Group g_;
    bool boundary_fixed_;
    SpanningTree tree_;
    std::vector<int> component_;                  // per vertex
    std::vector<std::vector<int>> component_edges_;
    std::vector<int> generators_;
};

HomotopyClass canonical_class(const GammaColoring &c, const Triangulation &t, const Group &g, bool boundary_fixed);
std::vector<HomotopyClass> homotopy_classes(const Triangulation &t, const Group &g,
                                            const std::vector<int> &boundary_pins = {},
                                            const std::vector<int> &tag_edges = {});

// Options shared by the state sums.
struct SumOptions {
    int orientation = 1;        // -1 evaluates the manifold with reversed orientation
    int workers = 0;            // 0: STATESUM_WORKERS or hardware concurrency
    std::vector<int> tag_edges; // display generators for class tags
};

// Generic weighted sum. Each coloring contributes
//   prod_{e: edge_dim[e]} dim(c_e) * prod_{f: face_theta[f]} theta(f)^-1 * prod_T tet(T)^{o_T},
// grouped by the labels on key_edges and, when with_gamma, the full graduator projection.
struct WeightedSum {
    std::vector<int> pinned;
    std::vector<char> edge_dim;
    std::vector<char> face_theta;
    int delta_power = 0;  // the result is multiplied by Delta^delta_power
    std::vector<int> key_edges;
    bool with_gamma = false;
};

struct KeyedValue {
    std::vector<int> key_labels;
    GammaColoring gamma;  // empty unless with_gamma
    Cyclotomic value;
};

std::vector<KeyedValue> weighted_sum(const Triangulation &t, const FusionData &f, const Graduator *grad,
                                     const WeightedSum &w, const SumOptions &opt = {});

Cyclotomic turaev_viro(const Triangulation &t, const FusionData &f, const SumOptions &opt = {});

struct ClassValue {
    HomotopyClass cls;
    Cyclotomic value;
};

// All classes of t, each with its partial sum (zero when no coloring lies above it).
std::vector<ClassValue> htv(const Triangulation &t, const FusionData &f, const SumOptions &opt = {});

// Relative sums with the boundary coloured by c0 (labels per boundary-surface
// edge class). Boundary edges and faces carry no weight; normalisation
// Delta^{-n0(T) + n0(boundary)}.
Cyclotomic tv_rel(const Triangulation &t, const FusionData &f, const Coloring &c0, const SumOptions &opt = {});
std::vector<ClassValue> htv_rel(const Triangulation &t, const FusionData &f, const Coloring &c0,
                                const SumOptions &opt = {});

// Characters of the graduator per edge class (index into characters(group)).
using EdgeCharacterChain = std::vector<int>;

bool is_cycle(const Triangulation &t, const Group &g, const EdgeCharacterChain &alpha);
// alpha multiplied by the boundary of a 2-chain (one character index per triangle class).
EdgeCharacterChain add_boundary(const Triangulation &t, const Group &g, const EdgeCharacterChain &alpha,
                                const std::vector<int> &beta);
// prod_e alpha^e(c_e) for a graduator colouring
Cyclotomic pairing(const Group &g, const EdgeCharacterChain &alpha, const GammaColoring &c);

struct YetterResult {
    Cyclotomic direct;
    Cyclotomic factored;
};

YetterResult yetter(const Triangulation &t, const FusionData &f, const EdgeCharacterChain &alpha,
                    const SumOptions &opt = {});

// Closed Dijkgraaf-Witten sums for Z_N with the cocycle alpha_N^t.
Cyclotomic oracle_dw_three_torus(int N, long t);
Cyclotomic oracle_dw_lens(int N, long t, int p, int q);
// Per class g with g^p = e (ascending g), the lens summand.
std::vector<Cyclotomic> oracle_dw_lens_blocks(int N, long t, int p, int q);

int resolve_workers(int requested);

} // namespace tv

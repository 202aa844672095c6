#pragma once

#include <complex>
#include <map>
#include <vector>

#include "tv/statesum.hpp"

namespace tv {

enum class Gauge { Exact, Symmetric };

// Row-major square matrices.
struct ExactMatrix {
    int n = 0;
    std::vector<Cyclotomic> a;
    const Cyclotomic &at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
    Cyclotomic &at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
};

struct ComplexMatrix {
    int n = 0;
    std::vector<std::complex<double>> a;
    std::complex<double> at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

ExactMatrix multiply(const ExactMatrix &x, const ExactMatrix &y);
ExactMatrix kronecker(const ExactMatrix &x, const ExactMatrix &y);
ExactMatrix submatrix(const ExactMatrix &m, const std::vector<int> &idx);
Cyclotomic trace(const ExactMatrix &m);
int exact_rank(const ExactMatrix &m);
// pivots below rel_tol * (largest pivot) count as zero
int approx_rank(const ComplexMatrix &m, double rel_tol = 1e-6);

struct BlockSpace {
    HomotopyClass cls;            // class on the surface
    std::vector<Coloring> basis;  // lexicographic order
};

struct CylinderOperator {
    BlockSpace space;
    Gauge gauge = Gauge::Exact;
    ExactMatrix exact;      // unnormalised gauge, always filled
    ComplexMatrix approx;   // symmetric gauge, filled when gauge == Symmetric
    int size() const { return static_cast<int>(space.basis.size()); }
};

// A cobordism between two copies of a surface, given by where the surface
// edges sit in the 3-manifold. Prism satisfies this shape.
//
// The operator entry for boundary colourings (c, c') is the relative sum with
// no weight on boundary simplices, multiplied by the outgoing contraction
// prod dim(c') prod theta(c')^-1 Delta^{-n0(surface)}.
ExactMatrix cobordism_matrix(const Prism &m, const Surface2 &s, const FusionData &f,
                             const std::vector<Coloring> &basis, const SumOptions &opt = {});

// All colourings of s with their closed classes, in basis order.
struct SurfaceColorings {
    std::vector<Coloring> basis;
    std::vector<HomotopyClass> cls;     // per basis element
    std::vector<HomotopyClass> classes; // distinct, sorted by tag
    std::vector<int> indices_of(const HomotopyClass &x) const;
};

SurfaceColorings surface_colorings(const Surface2 &s, const FusionData &f, const std::vector<int> &tag_edges = {});

// Class-blind cylinder p on every colouring of s.
ExactMatrix full_cylinder(const Surface2 &s, const FusionData &f, const SurfaceColorings &sc,
                          const SumOptions &opt = {}, int layers = 1);

CylinderOperator cylinder_operator(const Surface2 &s, const FusionData &f, const HomotopyClass &x,
                                   Gauge gauge = Gauge::Exact, const SumOptions &opt = {});
// One operator per class, sharing a single prism enumeration.
std::vector<CylinderOperator> cylinder_operators(const Surface2 &s, const FusionData &f,
                                                 Gauge gauge = Gauge::Exact, const SumOptions &opt = {});

// Diagonal change of basis to the symmetric gauge:
// D(c) = prod_e dim(c_e)^{1/2} prod_f theta(f)^{-1/2}, principal roots.
std::vector<std::complex<double>> symmetric_scaling(const Surface2 &s, const FusionData &f,
                                                    const std::vector<Coloring> &basis);

// Rank of the idempotent, cross-checked against its trace (RankTraceMismatch).
int block_rank(const CylinderOperator &p);

struct BlockDims {
    std::vector<std::pair<HomotopyClass, int>> blocks;
    int total = 0;       // sum of the block ranks
    int full_rank = 0;   // rank of the class-blind cylinder
};

BlockDims block_dims(const Surface2 &s, const FusionData &f, const SumOptions &opt = {});

// HTV of the identity mapping torus, summed over the classes restricting to x.
std::vector<std::pair<HomotopyClass, Cyclotomic>> dims_via_trace(const Surface2 &s, const FusionData &f,
                                                                  const SumOptions &opt = {});

} // namespace tv

#pragma once

#include <map>

#include "qpack/hilbert.hpp"
#include "qpack/rng.hpp"

namespace qpack {

// Exponent-vector (Pauli-frame) representation of a Weyl monomial
// prod_e X^{a_e} Z^{b_e} over the edges of one lattice layer, modulo q.
struct SymplecticOp {
    std::string name;
    std::vector<int> a;  // X exponents per edge
    std::vector<int> b;  // Z exponents per edge
};

// sum_e (a1_e b2_e - b1_e a2_e) mod q; zero iff the operators commute.
int symplectic_form(const SymplecticOp& p, const SymplecticOp& q_op, int q);

// Open-boundary planar patch of distance L: L^2 horizontal plus (L-1)^2
// vertical edges, L(L-1) stars and L(L-1) faces per layer, one logical qudit
// per layer. Orientation signs on the star/face exponents keep all checks
// commuting for every local dimension.
struct SurfaceLayout {
    int L = 0;
    int n_edges = 0;
    // star/face checks as (edge, sign) lists
    std::vector<std::vector<std::pair<int, int>>> stars;
    std::vector<std::vector<std::pair<int, int>>> faces;
    std::vector<std::pair<int, int>> logical_x_path;  // north-south, X-type
    std::vector<std::pair<int, int>> logical_z_path;  // east-west, Z-type

    static SurfaceLayout make(int L);
    int horizontal_edge(int row, int col) const;  // row 0..L-1, col 0..L-1
    int vertical_edge(int row, int col) const;    // row 0..L-2, col 1..L-1
};

// One layer (internal q = d or external q = D) of the hybrid surface code.
struct SurfaceLayer {
    int q = 0;  // local modulus of this layer
    SurfaceLayout layout;
    std::vector<SymplecticOp> stabilizers;  // stars then faces
    SymplecticOp logical_x, logical_z;

    static SurfaceLayer make(int L, int q);
};

struct SurfaceCode {
    HybridDims dims;
    int L = 0;
    SurfaceLayer internal_layer;
    SurfaceLayer external_layer;

    static SurfaceCode make(int L, const HybridDims& dims);
};

// Syndrome of an error given as exponent vectors: one label in Z_q per check.
std::vector<int> surface_syndrome(const SurfaceLayer& layer, const SymplecticOp& error);

// Exact minimum-weight decoder: precomputes, for every reachable syndrome of
// one error type, the lowest-weight correction (weight = touched edges,
// lexicographic tie-break).
class SurfaceDecoder {
  public:
    explicit SurfaceDecoder(const SurfaceLayer& layer);

    // Recovery exponents for an X-type (shift) error pattern from the face
    // syndrome, and for a Z-type pattern from the star syndrome.
    std::vector<int> decode_x(const std::vector<int>& face_syndrome) const;
    std::vector<int> decode_z(const std::vector<int>& star_syndrome) const;

  private:
    const SurfaceLayer& layer_;
    std::map<std::vector<int>, std::vector<int>> x_table_;
    std::map<std::vector<int>, std::vector<int>> z_table_;
};

// Pauli-frame Monte Carlo: iid X- and Z-type errors of rate p per edge on one
// layer; returns the logical failure count over the trials.
struct SurfaceMcResult {
    long trials = 0;
    long failures = 0;
};
SurfaceMcResult surface_monte_carlo(const SurfaceLayer& layer, const SurfaceDecoder& decoder,
                                    double p, long trials, Rng& rng);

}  // namespace qpack

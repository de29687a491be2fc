#pragma once

#include <vector>

#include "qpack/state.hpp"

namespace qpack {

struct BellIndex {
    int m = 0;  // phase label
    int n = 0;  // shift label
};

// |Phi_{m,n}> = N^(-1/2) sum_J omega^(mJ) |J>_A (x) |J+n mod N>_B
RegisterState bell_state(const BellIndex& idx, const ChargeAssignment& charge);

// Two-index family: phases (mu, nu), shifts (n_int, n_ext).
RegisterState bell_two_index(int mu, int nu, int n_int, int n_ext,
                             const ChargeAssignment& charge);

// Inverse expansion N^(-1/2) sum_m omega^(-mJ) |Phi_{m,n}>; reproduces
// |J>_A (x) |J+n>_B.
RegisterState bell_resynthesize(int J, int n, const ChargeAssignment& charge);
RegisterState bell_two_index_resynthesize(int j, int k, int n_int, int n_ext,
                                          const ChargeAssignment& charge);

enum class MUBKind { CanonicalTriplet, ProductExtension };

// Bases stored column-wise: bases[i].col(n) is the n-th vector of basis i.
struct MUBFamily {
    int N = 0;
    MUBKind kind = MUBKind::CanonicalTriplet;
    std::vector<Matrix> bases;
};

// Canonical triplet (B_Z, B_X, B_XZ). B_X is the Fourier transform of B_Z;
// B_XZ diagonalizes X_N Z_N, columns ordered so that for odd N the column n
// carries eigenvalue omega^(-n). Even N uses the m(m+N)/2 quadratic phase.
MUBFamily mub_triplet(int N);

// Complete MUB set of p+1 bases for prime p.
MUBFamily mub_complete_prime(int p);

// Tensor products B_int^(i) (x) B_ext^(j) on N = d*D.
MUBFamily product_mubs(const MUBFamily& internal_family, const MUBFamily& external_family);

// Largest deviation of any cross-basis overlap from 1/N, and the overlap
// table itself for reporting.
double mub_unbiasedness_error(const MUBFamily& family);
std::vector<std::vector<double>> mub_overlap_table(const Matrix& a, const Matrix& b);

// Unbiasedness of every basis in `family` against every basis in `reference`.
double mub_cross_unbiasedness_error(const MUBFamily& family, const MUBFamily& reference);

// (1/sqrt(N)) sum_J |J>^(x)n_parties
RegisterState ghz_state(int n_parties, const ChargeAssignment& charge);

}  // namespace qpack

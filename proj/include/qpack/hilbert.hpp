#pragma once

#include <vector>

#include "qpack/types.hpp"

namespace qpack {

// Dimension bookkeeping for a hybrid space: an internal factor of dimension d
// tensored with an external factor of dimension D, logical local dimension
// N = d*D, single-index labels J = j*D + k.
struct HybridDims {
    int d = 1;
    int D = 1;
    int N = 1;
    cx omega;  // primitive N-th root of unity e^{2*pi*i/N}

    cx omega_pow(long long e) const;  // omega^e with exact modular reduction
    cx omega_d_pow(long long e) const;
    cx omega_D_pow(long long e) const;
};

HybridDims make_dims(int d, int D);

// (j,k) <-> J = j*D + k
int merge_index(int j, int k, const HybridDims& dims);
std::pair<int, int> split_index(int J, const HybridDims& dims);

// Per-site charge/label structure. The physical local space is extended
// beyond the N computational labels with leakage levels (charge 0, one extra
// external level per internal label) and explicitly charged labels, so that
// gauge-invariance checks and gauge-violating channels are nontrivial.
//
// Label layout with n_leak leakage levels per internal label:
//   [0, N)                       computational, (j,k) with k < D, charge 0
//   [N, N + d*n_leak)            leaked, (j, D + l), charge 0
//   [N + d*n_leak, local_dim)    charged labels, one per entry of `charges`
struct ChargeAssignment {
    HybridDims dims;
    int local_dim_ext = 1;
    int n_leak = 0;                // leakage levels per internal label
    std::vector<int> charges;      // charge q(l) for every local label l

    // Standard extension: one leakage level and two charged labels (+1, -1).
    static ChargeAssignment standard(const HybridDims& dims);
    // Configurable extension; `charged` lists the nonzero charges appended
    // after the leakage block. n_leak = 0 and charged = {} gives the bare
    // N-level space.
    static ChargeAssignment extended(const HybridDims& dims, int n_leak,
                                     const std::vector<int>& charged);
    static ChargeAssignment bare(const HybridDims& dims);

    bool is_computational(int label) const { return label < dims.N; }
    bool is_leaked(int label) const {
        return label >= dims.N && label < dims.N + dims.d * n_leak;
    }
    bool is_charged(int label) const { return charges[label] != 0; }
    // Internal label of a computational or leaked level.
    int internal_of(int label) const;
    // Leak level (j, D+l) as a flat label.
    int leak_label(int j, int l = 0) const;
    // First charged label with the given charge; -1 if none.
    int charged_label(int q) const;
};

// Diagonal of the total charge operator on n_sites copies of the local space,
// entry per flattened product label (site 0 = most significant digit).
std::vector<long long> total_charge_diagonal(int n_sites, const ChargeAssignment& charge);

// Diagonal of Q-hat on a single site.
std::vector<int> site_charge_diagonal(const ChargeAssignment& charge);

// Max-norm of [V, Q_tot] over the operator's support. `op` must act on
// `arity` sites of the extended local dimension, or of the bare computational
// dimension N (in which case it is embedded as identity on the extra labels).
double charge_commutator_norm(const Matrix& op, int arity, const ChargeAssignment& charge);

bool commutes_with_charge(const Matrix& op, int arity, const ChargeAssignment& charge,
                          double tol = kAlgebraTol);

// Orthogonal projector onto the total-charge sector Q on n_sites; returned as
// the 0/1 diagonal over flattened product labels.
struct SectorProjector {
    HybridDims dims;
    ChargeAssignment charge;
    int n_sites = 1;
    long long target_Q = 0;
    std::vector<char> mask;  // 1 where the product label lies in the sector

    static SectorProjector make(const ChargeAssignment& charge, int n_sites, long long Q);
};

}  // namespace qpack

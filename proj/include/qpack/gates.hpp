#pragma once

#include <string>

#include "qpack/hilbert.hpp"

namespace qpack {

enum class GaugeStatus { VerifiedInvariant, Violating, Unchecked };

// A named unitary on one or two sites. Matrices are stored on the
// computational N-span (or its two-site square) and act as identity on any
// extra leakage/charged labels, which keeps every library gate
// leakage-preserving.
struct GateOp {
    std::string name;
    Matrix matrix;
    int arity = 1;
    GaugeStatus gauge_status = GaugeStatus::Unchecked;
};

// Hybrid Weyl block on the N-dimensional single-index space.
GateOp weyl_x(int N);                   // X_N |J> = |J+1 mod N>
GateOp weyl_z(int N);                   // Z_N |J> = omega^J |J>
GateOp fourier_h(int N);                // H_N = N^(-1/2) sum omega^(JK) |J><K|
GateOp parity_p(int N);                 // P = H_N^2, |J> -> |-J mod N>
GateOp weyl_xz(int N, int s, int t);    // X^s Z^t (GC Pauli error operators)

// Internal / external Weyl blocks acting on one tensor factor of a site.
struct WeylBlock {
    GateOp x, z, h;
};
WeylBlock internal_block(const HybridDims& dims);  // X_d, Z_d, H_d (x) I_D
WeylBlock external_block(const HybridDims& dims);  // I_d (x) X_D, Z_D, H_D

// Two-site entanglers.
GateOp csum(int N);                          // sum |J><J| (x) X_N^J
GateOp csum_internal(const HybridDims& dims);  // sum |j><j| (x) X_d^j
GateOp cphi(const HybridDims& dims);           // sum |k_E><k_E| (x) Z_d^k

// Non-Clifford diagonal phase Theta_r = sum exp(2 pi i r J^2 / N^2)|J><J|.
struct ThetaGateParam {
    int r = 0;
    int N = 0;
};
GateOp theta_r(const ThetaGateParam& param);
bool theta_param_valid(int r, int N);

// pi/8-type gate diag(1, e^{i pi/4}) for N = 2, where every Theta_r is
// Clifford and a genuine non-Clifford generator is still needed.
GateOp t8();

GateOp hybrid_swap(const HybridDims& dims);  // S |a>|b> = |b>|a>, two sites
GateOp mixed_flag(const HybridDims& dims);   // F = X_d Z_D on one site

// Controlled power sum_x |x><x| (x) u^x with a control of dimension
// control_dim (dense; for large registers use apply_controlled_power).
GateOp controlled_power(const GateOp& u, int control_dim);

// Fractional Weyl shift X_N^(num/den) defined spectrally through the Fourier
// diagonalization X = H^dag Z H with the principal branch of each eigenphase.
GateOp weyl_x_frac(int N, int num, int den);
GateOp weyl_z_frac(int N, int num, int den);

// A deliberately gauge-violating unitary on the extended local space: swaps
// the neutral label 0 with the first charge-(+1) label.
GateOp charge_raising_op(const ChargeAssignment& charge);

// Gate-name serialization used by circuit files and the C API:
// "XN","ZN","HN","CSUM","THETA(r)","SWAP","F","T8","P","Xd","Zd","Hd","XD",
// "ZD","HD","CSUMd","CPHI"; a trailing unicode dagger inverts.
GateOp gate_by_name(const std::string& token, const HybridDims& dims);

// True when conjugating `u` by each generalized Pauli stays in the Pauli
// group up to phase (used as the Clifford/non-Clifford witness).
bool conjugates_paulis_to_paulis(const Matrix& u, int N, double tol = 1e-9);
bool is_pauli_up_to_phase(const Matrix& m, int N, double tol = 1e-9);

}  // namespace qpack

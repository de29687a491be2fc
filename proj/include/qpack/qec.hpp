#pragma once

#include <map>

#include "qpack/gates.hpp"
#include "qpack/state.hpp"

namespace qpack {

// Eigenphase labels of the measured stabilizers, one element of Z_N each.
using SyndromeWord = std::vector<int>;

struct Recovery {
    int site = 0;
    int x_power = 0;  // apply X^{x_power}
    int z_power = 0;  // and Z^{z_power}
};

// A stabilizer as a product of single-site Weyl factors X^{xe} Z^{ze}.
struct WeylStabilizer {
    std::string name;
    std::vector<int> sites;
    std::vector<int> x_exp;  // per listed site
    std::vector<int> z_exp;

    Matrix site_matrix(int N, size_t i) const;  // the factor on sites[i]
};

// Measures the eigenphase label of a generalized stabilizer on a state that
// is an exact eigenstate (|<S>| must be ~1); returns the label s with
// eigenvalue omega_N^s.
int measure_stabilizer_phase(const RegisterState& state, const WeylStabilizer& stab);

struct CodeInstance {
    enum class Kind { Shor9, Steane7 };
    Kind kind;
    int N = 0;
    int n_phys = 0;
    std::vector<WeylStabilizer> stabilizers;
    std::map<SyndromeWord, Recovery> syndrome_table;
    WeylStabilizer logical_x;
    WeylStabilizer logical_z;
};

// ---- Shor-like 9-qudit code ----

CodeInstance shor_build(int N);

// Codeword from the closed-form sum over (K,L,M).
RegisterState shor_codeword_formula(const Vector& logical, const ChargeAssignment& charge);
// Codeword built by the encoder circuit (H_N + CSUM_N network).
RegisterState shor_encode(const Vector& logical, const ChargeAssignment& charge);

struct CorrectionResult {
    RegisterState state;
    SyndromeWord syndrome;
    bool table_hit = true;  // false when the syndrome had no table entry
};

CorrectionResult shor_correct(const RegisterState& corrupted, const CodeInstance& code);

// ---- Steane-like 7-qudit code ----

CodeInstance steane_build(int N);
RegisterState steane_codeword(const Vector& logical, const ChargeAssignment& charge);
CorrectionResult steane_correct(const RegisterState& corrupted, const CodeInstance& code);

// ---- magic-state injection ----

// Gate-teleportation of Theta_r onto a single-qudit state: ancilla prepared
// in Theta_r H|0>, inverse CSUM from data to ancilla, ancilla measured, and a
// diagonal correction Theta X^{-M} Theta^dag X^{M} applied for outcome M.
struct InjectionBranch {
    int outcome = 0;
    double probability = 0.0;
    RegisterState state;
};
std::vector<InjectionBranch> inject_theta_branches(const RegisterState& psi, int r);
RegisterState inject_theta(const RegisterState& psi, int r, Rng& rng);

}  // namespace qpack

#pragma once

#include "qpack/report.hpp"
#include "qpack/state.hpp"

namespace qpack {

// ---- QFT ----

// Dense N^n-point transform applied to a register of n qudits.
void qft_apply(RegisterState& state, const std::vector<int>& register_sites, bool inverse = false);

// Circuit decomposition: per-qudit Fourier gates, two-qudit controlled
// phases, and the final order-reversal swap network.
struct QftGate {
    enum class Kind { Fourier, ControlledPhase, Swap } kind;
    std::vector<int> sites;   // one or two register positions
    Matrix matrix;
};
std::vector<QftGate> qft_circuit(int n_qudits, int N, bool inverse = false);
void apply_qft_circuit(RegisterState& state, const std::vector<int>& register_sites,
                       bool inverse = false);

// ---- QPE ----

struct QpeResult {
    std::vector<double> distribution;  // over control values y
    std::vector<double> kernel_reference;
    int peak = 0;
};
// Exact outcome distribution of phase estimation of `u` (single-site unitary
// with eigenvector `eigenstate`), n_c control qudits of dimension N.
QpeResult qpe_estimate(const Matrix& u, const Vector& eigenstate, int n_c,
                       const HybridDims& dims);

// ---- Grover ----

struct GroverPlan {
    int N = 0;        // search-space size
    int marked = 0;
    double theta = 0;
    int iterations = 0;

    static GroverPlan make(const HybridDims& dims, int marked);
};

struct GroverResult {
    double success_probability = 0.0;
    double closed_form = 0.0;  // sin^2((2k+1) theta)
    std::vector<double> per_iteration_success;
    Vector final_state;
};
GroverResult grover_search(const GroverPlan& plan);

// ---- quantum walks ----

// One-step DTQW operator V = S (C (x) I_ext) on a single hybrid site whose
// internal factor is the coin (d = degree) and external factor the position.
Matrix dtqw_step(const Matrix& coin, const std::vector<std::vector<int>>& sigma,
                 const HybridDims& dims);
Matrix grover_coin(int d);
// Position distribution after `steps` applications from |j0, k0>.
std::vector<std::vector<double>> dtqw_run(const Matrix& step, int steps, int j0, int k0,
                                          const HybridDims& dims);

// First-passage statistics under per-step projective monitoring of one
// vertex (reported without asserting any hitting-time bound).
struct FirstPassageStats {
    long trials = 0;
    long hits = 0;
    double mean_steps = 0.0;
};
FirstPassageStats dtqw_first_passage(const Matrix& step, int marked_vertex, int max_steps,
                                     long trials, const HybridDims& dims, Rng& rng);

// CTQW under H = I_int (x) L for time t; returns the position distribution.
std::vector<double> ctqw_run(const Eigen::MatrixXd& laplacian, double t, const Vector& initial,
                             const HybridDims& dims);

// ---- Shor order finding ----

struct FactoringInstance {
    long M = 0;   // odd composite modulus
    long a = 0;   // base, coprime to M
    int n_c = 0;  // control qudits
    int n_w = 0;  // work qudits

    static FactoringInstance make(long M, long a, const HybridDims& dims);
};

struct ShorTrial {
    long measured = 0;
    long order_candidate = 0;
    bool order_found = false;
    std::pair<long, long> factors{0, 0};
    bool success = false;
};
ShorTrial shor_order_find(const FactoringInstance& instance, const HybridDims& dims, Rng& rng);
ExperimentReport shor_factor(long M, const HybridDims& dims, long trials, std::uint64_t seed);

// multiplicative order of a mod M by brute force (test oracle as well)
long multiplicative_order(long a, long M);

// ---- HHL ----

struct HHLInstance {
    Matrix A;      // hermitian, eigenvalues exactly representable after rescale
    Vector b;
    double C = 0;  // rotation constant <= min eigenvalue
    int m = 0;     // phase-register width (qudits of dimension N)
};

struct HHLResult {
    Vector output;          // post-selected, normalized
    double fidelity = 0.0;  // against the normalized direct solve
    double success_probability = 0.0;
    double residual = 0.0;  // || A x - b || after rescaling x
};
HHLResult hhl_solve(const HHLInstance& instance, const HybridDims& dims);

}  // namespace qpack

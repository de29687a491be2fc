#pragma once

#include "qpack/bases.hpp"
#include "qpack/report.hpp"

namespace qpack {

struct ProtocolConfig {
    HybridDims dims;
    long trials = 10000;
    std::uint64_t seed = 1;
    bool eve_intercept = false;
    double p_dec = 0.2;     // decoy probability (QSDC)
    int m_bases = 2;        // MUB count used by secret sharing / QSDC decoys
    double q_test = 0.5;    // test-round probability (CGLMP sampling mode)
    double source_bias = 0.0;  // randomness expansion: extra weight on |0>
    bool record_trials = false;  // attach per-trial records to the report

};

// Teleportation of `input` through |Phi_00>; every Bell branch is corrected
// with X^{-n} Z^{m} and compared against the input.
ExperimentReport teleport(const Vector& input, const ProtocolConfig& cfg);

// Superdense coding round-trip of all N^2 messages.
ExperimentReport superdense(const ProtocolConfig& cfg);

// Six-state (three-MUB) prepare-and-measure QKD with an optional
// intercept-resend eavesdropper.
ExperimentReport qkd_six_state(const ProtocolConfig& cfg);

enum class QkdVariant { BB84, B92 };
ExperimentReport qkd_reduce(QkdVariant variant, const ProtocolConfig& cfg);

// CGLMP Bell experiment evaluated exactly from the joint probability table.
struct CglmpResult {
    double I_N = 0.0;
    double lhv_bound = 2.0;
    double nominal_quantum_value = 0.0;  // 2 (1 - 1/N)^{-1}, reported only
    ExperimentReport report;
};
CglmpResult cglmp_bell(const ProtocolConfig& cfg);

// Exhaustive deterministic-strategy LHV maximum of I_N (N^4 strategies).
double cglmp_lhv_maximum(int N);

// Key-rate function f(I) = log2 N - h_N((I-2)/(Iqm-2)).
double cglmp_key_rate(double I, double I_qm, int N);

// GHZ secret sharing between 3+ parties; the dealer's secret is a (basis,
// shift) pair from M mutually unbiased bases.
ExperimentReport secret_share(int n_parties, const ProtocolConfig& cfg);

// Randomness expansion: uniform source measured computationally.
ExperimentReport randomness_expand(const ProtocolConfig& cfg);

// Quantum secure direct communication with decoy rounds.
ExperimentReport qsdc_run(const ProtocolConfig& cfg);

}  // namespace qpack

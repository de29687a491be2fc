#pragma once

#include <optional>
#include <vector>

#include "qpack/hilbert.hpp"
#include "qpack/rng.hpp"

namespace qpack {

// Dense state vector over n_sites hybrid sites. Site 0 is the most
// significant digit of the flattened index (big-endian: site 0 is the
// leftmost tensor factor).
class RegisterState {
  public:
    RegisterState(const ChargeAssignment& charge, int n_sites);

    static RegisterState basis_state(const std::vector<int>& labels,
                                     const ChargeAssignment& charge);
    static RegisterState from_amplitudes(const ChargeAssignment& charge, int n_sites,
                                         Vector amplitudes);

    const ChargeAssignment& charge() const { return charge_; }
    const HybridDims& dims() const { return charge_.dims; }
    int n_sites() const { return n_sites_; }
    int local_dim() const { return charge_.local_dim_ext; }
    long long dim() const { return amp_.size(); }
    const Vector& amplitudes() const { return amp_; }
    Vector& amplitudes() { return amp_; }

    double norm() const { return amp_.norm(); }
    void renormalize();

    long long flatten(const std::vector<int>& labels) const;
    std::vector<int> unflatten(long long index) const;

    cx inner(const RegisterState& other) const;  // <this|other>

    // Per-sector weight of the state; the keys are total-charge eigenvalues.
    std::vector<std::pair<long long, double>> sector_weights() const;
    // True when all amplitude (up to tol) lies in the total-charge sector Q.
    bool in_sector(long long Q, double tol = kNormTol) const;

    // Reduced density matrix of the given sites (in the given order).
    Matrix reduced_density(const std::vector<int>& sites) const;

  private:
    ChargeAssignment charge_;
    int n_sites_;
    Vector amp_;
};

// Applies a unitary on the designated sites. The matrix dimension must be
// local_dim^k or N^k for k = sites.size(); an N^k matrix acts as identity on
// any product label touching a non-computational level.
void apply_local(RegisterState& state, const Matrix& op, const std::vector<int>& sites,
                 bool check_unitary = false);

RegisterState applied_local(const RegisterState& state, const Matrix& op,
                            const std::vector<int>& sites, bool check_unitary = false);

// Applies sum_x |x><x|_{control} (x) u^x with the control value read from the
// control sites (big-endian digits of local dimension N); u acts on the
// target sites. Labels outside the computational range on any involved site
// are left untouched.
void apply_controlled_power(RegisterState& state, const Matrix& u,
                            const std::vector<int>& control_sites,
                            const std::vector<int>& target_sites);

struct MeasurementOutcome {
    int outcome_label = 0;
    double probability = 0.0;
    RegisterState post_state;
};

// Projective measurement over a complete orthogonal projector set on the
// measured sites (each projector is over the sites' joint local space).
MeasurementOutcome measure_projective(const RegisterState& state,
                                      const std::vector<Matrix>& projectors,
                                      const std::vector<int>& sites, Rng& rng);

// Computational-basis measurement of the given sites.
struct LabelOutcome {
    std::vector<int> labels;
    double probability = 0.0;
    RegisterState post_state;
};
LabelOutcome measure_labels(const RegisterState& state, const std::vector<int>& sites, Rng& rng);

// Outcome probabilities of a computational measurement on the given sites.
std::vector<double> label_distribution(const RegisterState& state, const std::vector<int>& sites);

double fidelity(const RegisterState& a, const RegisterState& b);

// Real expectation value of a Hermitian observable on the given sites.
double expectation(const RegisterState& state, const Matrix& observable,
                   const std::vector<int>& sites);

// Expectation of an arbitrary (e.g. unitary stabilizer) operator.
cx expectation_complex(const RegisterState& state, const Matrix& op,
                       const std::vector<int>& sites);

// Text dump of amplitudes above the cutoff as (flattened index, re, im).
std::string dump_amplitudes(const RegisterState& state, double cutoff = 1e-14);

}  // namespace qpack

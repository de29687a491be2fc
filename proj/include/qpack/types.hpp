#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpack {

using cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Default numeric tolerances: exact-algebra checks vs composed circuits.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kCircuitTol = 1e-9;
inline constexpr double kNormTol = 1e-10;

inline constexpr double kPi = 3.14159265358979323846;

// A unit phase e^{2*pi*i*num/den}.
inline cx unit_phase(double num, double den) {
    const double a = 2.0 * kPi * num / den;
    return {std::cos(a), std::sin(a)};
}

// Contract violations: a caller handed us an object that breaks a documented
// precondition that is stronger than a mere argument-range error.
class contract_error : public std::logic_error {
  public:
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_unitary(const Matrix& m, double tol = kAlgebraTol) {
    if (m.rows() != m.cols()) return false;
    Matrix g = m.adjoint() * m;
    g -= Matrix::Identity(m.rows(), m.cols());
    return max_abs(g) <= tol;
}

inline bool is_hermitian(const Matrix& m, double tol = kNormTol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(Matrix(m - m.adjoint())) <= tol;
}

}  // namespace qpack

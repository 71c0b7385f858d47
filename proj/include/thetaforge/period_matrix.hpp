#ifndef THETAFORGE_PERIOD_MATRIX_HPP
#define THETAFORGE_PERIOD_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace thetaforge {

/// Symmetric g x g complex matrix with positive-definite imaginary part.
///
/// Symmetry is required exactly as stored.  The smallest eigenvalue of the
/// imaginary part is computed at construction and cached; it drives the
/// series truncation bounds.  Matrices with lambda_min < 1e-3 are rejected
/// by default (the summation radius explodes near the boundary); pass
/// allow_near_degenerate to override.
class PeriodMatrix {
public:
    explicit PeriodMatrix(Eigen::MatrixXcd entries, bool allow_near_degenerate = false);

    int genus() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    std::complex<double> operator()(int j, int k) const { return entries_(j, k); }
    double min_imag_eigenvalue() const { return lambda_min_; }

    /// m * tau for a positive integer m (symmetry and positivity preserved).
    PeriodMatrix scale(long long m) const;

    /// Short hex fingerprint of the stored entries, for report bookkeeping.
    std::string digest() const;

private:
    Eigen::MatrixXcd entries_;
    double lambda_min_ = 0.0;
};

} // namespace thetaforge

#endif

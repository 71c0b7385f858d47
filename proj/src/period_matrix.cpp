#include "thetaforge/period_matrix.hpp"

#include <cstdint>
#include <cstring>
#include <sstream>

#include "thetaforge/error.hpp"

namespace thetaforge {

namespace {
constexpr double kNearDegenerate = 1e-3;
}

PeriodMatrix::PeriodMatrix(Eigen::MatrixXcd entries, bool allow_near_degenerate)
    : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
        throw DomainError("period matrix must be square and nonempty");
    for (int j = 0; j < entries_.rows(); ++j)
        for (int k = j + 1; k < entries_.cols(); ++k)
            if (entries_(j, k) != entries_(k, j))
                throw DomainError("period matrix must be symmetric as stored");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_.imag());
    lambda_min_ = es.eigenvalues().minCoeff();
    if (lambda_min_ <= 0.0)
        throw DomainError("imaginary part of the period matrix is not positive definite");
    if (lambda_min_ < kNearDegenerate && !allow_near_degenerate)
        throw DomainError("period matrix is near the boundary (lambda_min(Im tau) = " +
                          std::to_string(lambda_min_) + " < 1e-3); pass the override to accept");
}

PeriodMatrix PeriodMatrix::scale(long long m) const {
    if (m < 1) throw DomainError("period matrix scale factor must be positive");
    PeriodMatrix r(*this);
    r.entries_ *= static_cast<double>(m);
    r.lambda_min_ *= static_cast<double>(m);
    return r;
}

std::string PeriodMatrix::digest() const {
    // FNV-1a over the raw bytes of the entries.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double x) {
        unsigned char b[sizeof(double)];
        std::memcpy(b, &x, sizeof(double));
        for (unsigned char c : b) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (int j = 0; j < entries_.rows(); ++j)
        for (int k = 0; k < entries_.cols(); ++k) {
            mix(entries_(j, k).real());
            mix(entries_(j, k).imag());
        }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace thetaforge

#ifndef THETAFORGE_RATIONAL_HPP
#define THETAFORGE_RATIONAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace thetaforge {

/// Exact rational scalar used for all characteristic bookkeeping.
using Rat = boost::rational<long long>;

long long rat_floor(const Rat& r);
Rat rat_mod1(const Rat& r);
double rat_to_double(const Rat& r);
std::string rat_str(const Rat& r);

/// Parses "p/q" or "p" (optionally signed).
Rat rat_parse(const std::string& s);

/// Exact rational vector WITHOUT mod-1 reduction.
///
/// Identity formulas manipulate characteristics literally: expressions such
/// as a+b, (a-b)/2 or sigma+eps must keep their integer parts, because a
/// lower characteristic shifted by an integer vector d picks up the phase
/// e(eps^t d).  RatVec is the type for that literal arithmetic; the mod-1
/// class of a characteristic is RationalVector below.
class RatVec {
public:
    RatVec() = default;
    explicit RatVec(std::vector<Rat> entries) : v_(std::move(entries)) {}
    static RatVec zero(int g) { return RatVec(std::vector<Rat>(static_cast<size_t>(g), Rat(0))); }

    int size() const { return static_cast<int>(v_.size()); }
    const Rat& operator[](int i) const { return v_[static_cast<size_t>(i)]; }
    Rat& operator[](int i) { return v_[static_cast<size_t>(i)]; }
    const std::vector<Rat>& entries() const { return v_; }

    RatVec operator+(const RatVec& o) const;
    RatVec operator-(const RatVec& o) const;
    RatVec operator-() const;
    RatVec scaled(const Rat& s) const;
    /// Entrywise multiplication by 1/2 (frequent in the addition theorems).
    RatVec half() const { return scaled(Rat(1, 2)); }

    Rat dot(const RatVec& o) const;
    bool is_integral() const;
    bool is_zero() const;
    std::vector<double> to_doubles() const;
    std::string str() const;

private:
    std::vector<Rat> v_;
};

/// Exact length-g vector of rationals mod 1.
///
/// Entries are kept reduced with 0 <= numerator < denominator.  Addition,
/// negation and scalar multiplication reduce mod 1; use raw() / RatVec when
/// the integer parts matter.
class RationalVector {
public:
    RationalVector() = default;
    explicit RationalVector(std::vector<Rat> entries);
    explicit RationalVector(const RatVec& raw);
    static RationalVector zero(int g);

    int size() const { return v_.size(); }
    const Rat& operator[](int i) const { return v_[i]; }

    RationalVector operator+(const RationalVector& o) const;
    RationalVector operator-() const;
    RationalVector scaled(const Rat& s) const;

    /// Least common multiple of the entry denominators.
    long long order() const;
    bool is_zero() const;
    /// True when every entry lies in {0, 1/2}.
    bool is_half_integral() const;
    Rat dot(const RationalVector& o) const { return v_.dot(o.v_); }

    /// The normalized entries viewed as a raw vector (all entries in [0,1)).
    const RatVec& raw() const { return v_; }
    std::vector<double> to_doubles() const { return v_.to_doubles(); }

    bool operator==(const RationalVector& o) const { return v_.entries() == o.v_.entries(); }
    bool operator!=(const RationalVector& o) const { return !(*this == o); }
    /// Lexicographic order, usable as a map key.
    bool operator<(const RationalVector& o) const;

    std::string str() const { return v_.str(); }
    /// Parses a comma-separated list of rationals, e.g. "1/4,0".
    static RationalVector parse(const std::string& s, int expect_g = -1);

private:
    RatVec v_;
};

/// All points of ((1/denom) Z/Z)^genus in lexicographic order, the first
/// coordinate most significant.
std::vector<RationalVector> char_grid(int genus, long long denom);

/// Index of `a` in char_grid(genus, denom); throws DomainError when `a` is
/// not on the grid.
long long char_grid_index(const RationalVector& a, long long denom);

} // namespace thetaforge

#endif

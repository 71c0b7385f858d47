#include "thetaforge/rational.hpp"

#include <numeric>
#include <sstream>

#include "thetaforge/error.hpp"

namespace thetaforge {

long long rat_floor(const Rat& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}

Rat rat_mod1(const Rat& r) { return r - Rat(rat_floor(r)); }

double rat_to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(s));
        long long num = std::stoll(s.substr(0, slash));
        long long den = std::stoll(s.substr(slash + 1));
        if (den == 0) throw DomainError("rational with zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::invalid_argument&) {
        throw DomainError("cannot parse rational: " + s);
    } catch (const std::out_of_range&) {
        throw DomainError("rational out of range: " + s);
    }
}

RatVec RatVec::operator+(const RatVec& o) const {
    if (size() != o.size()) throw DomainError("RatVec size mismatch");
    std::vector<Rat> r(v_);
    for (size_t i = 0; i < r.size(); ++i) r[i] += o.v_[i];
    return RatVec(std::move(r));
}

RatVec RatVec::operator-(const RatVec& o) const { return *this + (-o); }

RatVec RatVec::operator-() const {
    std::vector<Rat> r(v_);
    for (auto& x : r) x = -x;
    return RatVec(std::move(r));
}

RatVec RatVec::scaled(const Rat& s) const {
    std::vector<Rat> r(v_);
    for (auto& x : r) x *= s;
    return RatVec(std::move(r));
}

Rat RatVec::dot(const RatVec& o) const {
    if (size() != o.size()) throw DomainError("RatVec size mismatch");
    Rat acc(0);
    for (size_t i = 0; i < v_.size(); ++i) acc += v_[i] * o.v_[i];
    return acc;
}

bool RatVec::is_integral() const {
    for (const auto& x : v_)
        if (x.denominator() != 1) return false;
    return true;
}

bool RatVec::is_zero() const {
    for (const auto& x : v_)
        if (x != Rat(0)) return false;
    return true;
}

std::vector<double> RatVec::to_doubles() const {
    std::vector<double> r;
    r.reserve(v_.size());
    for (const auto& x : v_) r.push_back(rat_to_double(x));
    return r;
}

std::string RatVec::str() const {
    std::string s;
    for (size_t i = 0; i < v_.size(); ++i) {
        if (i) s += ',';
        s += rat_str(v_[i]);
    }
    return s;
}

RationalVector::RationalVector(std::vector<Rat> entries) {
    for (auto& x : entries) x = rat_mod1(x);
    v_ = RatVec(std::move(entries));
}

RationalVector::RationalVector(const RatVec& raw) : RationalVector(raw.entries()) {}

RationalVector RationalVector::zero(int g) { return RationalVector(RatVec::zero(g)); }

RationalVector RationalVector::operator+(const RationalVector& o) const {
    return RationalVector(v_ + o.v_);
}

RationalVector RationalVector::operator-() const { return RationalVector(-v_); }

RationalVector RationalVector::scaled(const Rat& s) const { return RationalVector(v_.scaled(s)); }

long long RationalVector::order() const {
    long long l = 1;
    for (const auto& x : v_.entries()) l = std::lcm(l, x.denominator());
    return l;
}

bool RationalVector::is_zero() const { return v_.is_zero(); }

bool RationalVector::is_half_integral() const {
    for (const auto& x : v_.entries())
        if (x != Rat(0) && x != Rat(1, 2)) return false;
    return true;
}

bool RationalVector::operator<(const RationalVector& o) const {
    return std::lexicographical_compare(v_.entries().begin(), v_.entries().end(),
                                        o.v_.entries().begin(), o.v_.entries().end());
}

RationalVector RationalVector::parse(const std::string& s, int expect_g) {
    std::vector<Rat> entries;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) entries.push_back(rat_parse(tok));
    if (expect_g >= 0 && static_cast<int>(entries.size()) != expect_g)
        throw DomainError("expected " + std::to_string(expect_g) + " entries in '" + s + "'");
    return RationalVector(std::move(entries));
}

std::vector<RationalVector> char_grid(int genus, long long denom) {
    if (genus < 1 || denom < 1) throw DomainError("char_grid: genus and denom must be positive");
    long long total = 1;
    for (int i = 0; i < genus; ++i) total *= denom;
    std::vector<RationalVector> grid;
    grid.reserve(static_cast<size_t>(total));
    for (long long idx = 0; idx < total; ++idx) {
        std::vector<Rat> e(static_cast<size_t>(genus));
        long long rem = idx;
        for (int i = genus - 1; i >= 0; --i) {
            e[static_cast<size_t>(i)] = Rat(rem % denom, denom);
            rem /= denom;
        }
        grid.emplace_back(std::move(e));
    }
    return grid;
}

long long char_grid_index(const RationalVector& a, long long denom) {
    long long idx = 0;
    for (int i = 0; i < a.size(); ++i) {
        Rat scaled = a[i] * Rat(denom);
        if (scaled.denominator() != 1)
            throw DomainError("characteristic " + a.str() + " not on the 1/" +
                              std::to_string(denom) + " grid");
        idx = idx * denom + scaled.numerator();
    }
    return idx;
}

} // namespace thetaforge

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_map>

namespace flowec::numerics {

inline constexpr double kDefaultTolerance = 1e-13;

/// A complex number whose components are canonical entries of a ComplexTable.
/// Two interned values are equal exactly when their bit patterns are equal.
struct Complex {
    double re = 0.0;
    double im = 0.0;

    [[nodiscard]] bool operator==(const Complex& other) const noexcept {
        return re == other.re && im == other.im;
    }
    [[nodiscard]] bool operator!=(const Complex& other) const noexcept { return !(*this == other); }

    [[nodiscard]] double mag2() const noexcept { return re * re + im * im; }
    [[nodiscard]] double mag() const noexcept { return std::sqrt(mag2()); }
    [[nodiscard]] bool exactly_zero() const noexcept { return re == 0.0 && im == 0.0; }
    [[nodiscard]] bool exactly_one() const noexcept { return re == 1.0 && im == 0.0; }
};

inline constexpr Complex kZero{0.0, 0.0};
inline constexpr Complex kOne{1.0, 0.0};

[[nodiscard]] inline bool approx_equal(Complex a, Complex b, double tol) noexcept {
    return std::abs(a.re - b.re) <= tol && std::abs(a.im - b.im) <= tol;
}

struct ComplexHash {
    std::size_t operator()(const Complex& c) const noexcept {
        const auto h1 = std::hash<double>{}(c.re);
        const auto h2 = std::hash<double>{}(c.im);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
};

/// Interning table for real components. Values closer than the tolerance to an
/// existing entry snap onto it, so numerically equal edge weights share one
/// canonical bit pattern. 0, 1 and -1 are always present and exact.
class ComplexTable {
public:
    explicit ComplexTable(double tolerance = kDefaultTolerance);

    /// Canonical entry within `tolerance()` of (re, im), inserting if needed.
    /// Throws InvalidNumberError on NaN/inf input.
    Complex intern(double re, double im);

    Complex mul(Complex a, Complex b);
    Complex add(Complex a, Complex b);
    Complex sub(Complex a, Complex b);
    /// Throws SingularValueError if `b` is zero within tolerance.
    Complex div(Complex a, Complex b);
    Complex conj(Complex a);
    Complex neg(Complex a);

    [[nodiscard]] double tolerance() const noexcept { return tolerance_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

    /// Drops every entry, then re-registers the constants. Callers re-insert
    /// the values still referenced through `keep`.
    void clear();
    void keep(Complex c);

private:
    double snap(double x);
    void insert_exact(double x);

    double tolerance_;
    // cell index (floor(x / tolerance)) -> the single entry in that cell
    std::unordered_map<std::int64_t, double> entries_;
};

} // namespace flowec::numerics

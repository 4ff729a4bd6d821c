#include "flowec/numerics.hpp"

#include "flowec/errors.hpp"

#include <cmath>
#include <limits>

namespace flowec::numerics {

namespace {
// Beyond this magnitude the grid index no longer fits; such values pass through unsnapped.
constexpr double kMaxSnapMagnitude = 1e5;
} // namespace

ComplexTable::ComplexTable(double tolerance) : tolerance_(tolerance) {
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
        throw InvalidNumberError("complex table tolerance must be positive and finite");
    }
    entries_.reserve(1U << 12U);
    clear();
}

void ComplexTable::clear() {
    entries_.clear();
    insert_exact(0.0);
    insert_exact(1.0);
    insert_exact(-1.0);
}

void ComplexTable::insert_exact(double x) {
    if (std::abs(x) > kMaxSnapMagnitude) {
        return;
    }
    const auto cell = static_cast<std::int64_t>(std::floor(x / tolerance_));
    entries_.try_emplace(cell, x);
}

void ComplexTable::keep(Complex c) {
    insert_exact(c.re);
    insert_exact(c.im);
}

double ComplexTable::snap(double x) {
    if (!std::isfinite(x)) {
        throw InvalidNumberError("non-finite value cannot be interned");
    }
    if (std::abs(x) > kMaxSnapMagnitude) {
        return x;
    }
    const auto cell = static_cast<std::int64_t>(std::floor(x / tolerance_));
    if (const auto it = entries_.find(cell); it != entries_.end() && std::abs(it->second - x) <= tolerance_) {
        return it->second;
    }
    double best = 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const std::int64_t neighbour : {cell - 1, cell + 1}) {
        if (const auto it = entries_.find(neighbour); it != entries_.end()) {
            const double dist = std::abs(it->second - x);
            if (dist <= tolerance_ && dist < best_dist) {
                best = it->second;
                best_dist = dist;
            }
        }
    }
    if (best_dist <= tolerance_) {
        return best;
    }
    if (x == 0.0) {
        x = 0.0; // folds -0.0
    }
    entries_.try_emplace(cell, x);
    return x;
}

Complex ComplexTable::intern(double re, double im) {
    return Complex{snap(re), snap(im)};
}

Complex ComplexTable::mul(Complex a, Complex b) {
    if (a.exactly_zero() || b.exactly_zero()) {
        return kZero;
    }
    if (a.exactly_one()) {
        return b;
    }
    if (b.exactly_one()) {
        return a;
    }
    return intern(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

Complex ComplexTable::add(Complex a, Complex b) {
    if (a.exactly_zero()) {
        return b;
    }
    if (b.exactly_zero()) {
        return a;
    }
    return intern(a.re + b.re, a.im + b.im);
}

Complex ComplexTable::sub(Complex a, Complex b) {
    return add(a, neg(b));
}

Complex ComplexTable::div(Complex a, Complex b) {
    if (std::abs(b.re) <= tolerance_ && std::abs(b.im) <= tolerance_) {
        throw SingularValueError("division by a value that is zero within tolerance");
    }
    if (a == b) {
        return kOne;
    }
    if (a.exactly_zero()) {
        return kZero;
    }
    if (b.exactly_one()) {
        return a;
    }
    const double denom = b.mag2();
    return intern((a.re * b.re + a.im * b.im) / denom, (a.im * b.re - a.re * b.im) / denom);
}

Complex ComplexTable::conj(Complex a) {
    return intern(a.re, -a.im);
}

Complex ComplexTable::neg(Complex a) {
    return intern(-a.re, -a.im);
}

} // namespace flowec::numerics

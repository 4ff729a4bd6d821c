#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <cstddef>
#include <vector>

namespace flowec {

/// Dense square complex matrix, row-major. Basis index bit q is qubit q.
struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<std::complex<double>> data;

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t d) : dim(d), data(d * d) {}

    static DenseMatrix identity(std::size_t d) {
        DenseMatrix m(d);
        for (std::size_t i = 0; i < d; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::complex<double>& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
    const std::complex<double>& operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
};

[[nodiscard]] inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.dim != b.dim) {
        return std::numeric_limits<double>::infinity();
    }
    double d = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        d = std::max(d, std::abs(a.data[i] - b.data[i]));
    }
    return d;
}

[[nodiscard]] inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.dim);
    for (std::size_t i = 0; i < a.dim; ++i) {
        for (std::size_t k = 0; k < a.dim; ++k) {
            const auto aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < a.dim; ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

[[nodiscard]] inline DenseMatrix dagger(const DenseMatrix& a) {
    DenseMatrix c(a.dim);
    for (std::size_t i = 0; i < a.dim; ++i) {
        for (std::size_t j = 0; j < a.dim; ++j) {
            c(j, i) = std::conj(a(i, j));
        }
    }
    return c;
}

} // namespace flowec

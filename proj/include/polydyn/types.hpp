#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace polydyn {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// Thrown when input shapes/indices are invalid.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an operation requires pairwise-distinct zeros but two of
// them (nearly) coincide.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Generic numerical failure (non-convergence, tolerance breach).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A trajectory ran into a zero collision; carries the time of failure.
struct CollisionError : NumericalError {
    CollisionError(const std::string& what, double when)
        : NumericalError(what), time(when) {}
    double time;
};

// Characteristic roots too close together for the exponential-mode
// solution form to apply.
struct DegenerateModesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario-level input rejection.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense row-major complex matrix, only as big as these problems need.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    ComplexMatrix operator*(const ComplexMatrix& rhs) const {
        if (cols_ != rhs.rows_) throw ArgumentError("matrix product: shape mismatch");
        ComplexMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Complex aik = (*this)(i, k);
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
            }
        return out;
    }

    // max |A - I| entrywise
    double deviation_from_identity() const {
        double dev = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                dev = std::max(dev, std::abs((*this)(i, j) - (i == j ? 1.0 : 0.0)));
        return dev;
    }

    CVec apply(const CVec& x) const {
        if (x.size() != cols_) throw ArgumentError("matrix apply: length mismatch");
        CVec y(rows_, Complex(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    CVec a_;
};

inline double max_abs(const CVec& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double min_pairwise_distance(const CVec& z) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j)
            m = std::min(m, std::abs(z[i] - z[j]));
    return m;
}

// Zeros count as coincident below a relative threshold; the identities
// evaluated on them divide by pairwise differences.
inline constexpr double kCoincidenceRel = 1e-12;

inline void require_distinct_zeros(const CVec& z, const char* where) {
    if (z.size() < 2) return;
    const double scale = 1.0 + max_abs(z);
    if (min_pairwise_distance(z) < kCoincidenceRel * scale)
        throw SingularityError(std::string(where) + ": coincident zeros");
}

inline bool lex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace polydyn

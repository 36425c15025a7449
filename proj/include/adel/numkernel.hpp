#pragma once

// Dense complex linear-algebra kernels: products, Kronecker products,
// adjoints, SVD-based pseudoinverse, nullspace, matrix exponential.
//
// The multiply/kron/expm kernels are OpenMP-parallel above a size threshold;
// adel::serial keeps the plain reference loops used by the tests and the
// kernel benchmark. SVD, eigenvalues and LU solves are backed by Eigen.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adel {

using cplx = std::complex<double>;

/// Raised when an algorithm fails numerically (SVD non-convergence,
/// overflow in expm, singular resolvent, ...). Distinct from
/// std::invalid_argument so callers can map the two to different exit codes.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Dense complex matrix, row-major storage. Entries are validated finite on
/// checked construction.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const cplx> d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }
    const std::vector<cplx>& entries() const { return data_; }

    void check_finite() const;  // throws std::invalid_argument on NaN/Inf

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);
inline ComplexMatrix operator*(double s, const ComplexMatrix& a) { return cplx(s, 0.0) * a; }
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v);

ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
ComplexMatrix adjoint(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);

double norm_fro(const ComplexMatrix& a);
double norm_one(const ComplexMatrix& a);           // max column sum
double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& a, double tol);

/// Kronecker product; entry ((i*b.rows+k),(j*b.cols+l)) = a(i,j)*b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct SvdFactors {
    ComplexMatrix u;                      // orthonormal columns
    std::vector<double> singular_values;  // descending, >= 0
    ComplexMatrix v;                      // orthonormal columns
};

SvdFactors svd(const ComplexMatrix& a);

/// Default rank cutoff: max(rows,cols) * eps * sigma_max (when rank_tol == 0).
double default_rank_cutoff(const SvdFactors& f, std::size_t rows, std::size_t cols);

/// Moore-Penrose pseudoinverse; singular values below the cutoff are treated
/// as exactly zero.
ComplexMatrix pinv(const ComplexMatrix& a, double rank_tol = 0.0);

/// Orthonormal basis of the numerical right nullspace; empty when full rank.
std::vector<std::vector<cplx>> nullspace(const ComplexMatrix& a, double rank_tol = 0.0);

/// Matrix exponential by scaling-and-squaring with a truncated-series core;
/// the scaling count is chosen from the 1-norm so the scaled norm <= 0.5.
ComplexMatrix expm(const ComplexMatrix& a);

/// Solve a x = b (LU with partial pivoting); throws NumericalError when a is
/// singular to working precision.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

std::vector<cplx> eigenvalues(const ComplexMatrix& a);

/// 1-norm condition estimate ||a||_1 * ||a^-1||_1.
double condition_one(const ComplexMatrix& a, const ComplexMatrix& a_inv);

namespace serial {
// Reference kernels (plain loops, no threading) kept for testing and for the
// serial-vs-parallel benchmark.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix expm(const ComplexMatrix& a);
}  // namespace serial

}  // namespace adel

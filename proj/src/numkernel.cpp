#include "adel/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adel {

namespace {

using EigenRowMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMat> as_eigen(const ComplexMatrix& m) {
    return {m.data(), static_cast<Eigen::Index>(m.rows()),
            static_cast<Eigen::Index>(m.cols())};
}

ComplexMatrix from_eigen(const EigenRowMat& e) {
    ComplexMatrix out(static_cast<std::size_t>(e.rows()),
                      static_cast<std::size_t>(e.cols()));
    std::copy(e.data(), e.data() + e.size(), out.data());
    return out;
}

// Row blocks below this element count are not worth a parallel region.
constexpr std::size_t kParallelThreshold = 64 * 64;

void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                      const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw std::invalid_argument("ComplexMatrix: entries count != rows*cols");
    check_finite();
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

void ComplexMatrix::check_finite() const {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "add");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "sub");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = s * a.data()[i];
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimension mismatch");
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    ComplexMatrix c(m, n);
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    cplx* pc = c.data();
    // i-k-j loop order: unit-stride accumulation into the output row; each
    // output row is owned by one thread, so the result is deterministic.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (m * n >= kParallelThreshold)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        cplx* row = pc + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const cplx aik = pa[i * k + kk];
            if (aik == cplx{0.0, 0.0}) continue;
            const cplx* brow = pb + kk * n;
            for (std::size_t j = 0; j < n; ++j) row[j] += aik * brow[j];
        }
    }
    return c;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v) {
    if (a.cols() != v.size())
        throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<cplx> out(a.rows(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx acc{0.0, 0.0};
        const cplx* row = a.data() + i * a.cols();
        for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = std::conj(a.data()[i]);
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

cplx trace(const ComplexMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("trace: non-square");
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double norm_fro(const ComplexMatrix& a) {
    double s = 0.0;
    for (const cplx& z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
}

double norm_one(const ComplexMatrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double max_abs(const ComplexMatrix& a) {
    double best = 0.0;
    for (const cplx& z : a.entries()) best = std::max(best, std::abs(z));
    return best;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "max_abs_diff");
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
    return best;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (!a.is_square()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
    return true;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    ComplexMatrix out(ar * br, ac * bc);
    const std::size_t on = ac * bc;
    cplx* po = out.data();
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) \
    if (out.size() >= kParallelThreshold)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ar); ++i)
        for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(br); ++kk) {
            cplx* row = po + (i * br + kk) * on;
            for (std::size_t j = 0; j < ac; ++j) {
                const cplx aij = a(i, j);
                const cplx* brow = b.data() + kk * bc;
                for (std::size_t l = 0; l < bc; ++l) row[j * bc + l] = aij * brow[l];
            }
        }
    return out;
}

SvdFactors svd(const ComplexMatrix& a) {
    if (a.empty()) throw std::invalid_argument("svd: empty matrix");
    const auto e = as_eigen(a);
    const Eigen::Index mn = std::min(e.rows(), e.cols());
    EigenRowMat u, v;
    Eigen::VectorXd sv;
    // BDCSVD for larger problems, Jacobi for small ones.
    if (std::max(e.rows(), e.cols()) > 32) {
        Eigen::BDCSVD<Eigen::MatrixXcd> dec(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (dec.info() != Eigen::Success)
            throw NumericalError("svd: BDCSVD did not converge");
        u = dec.matrixU();
        v = dec.matrixV();
        sv = dec.singularValues();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> dec(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (dec.info() != Eigen::Success)
            throw NumericalError("svd: JacobiSVD did not converge");
        u = dec.matrixU();
        v = dec.matrixV();
        sv = dec.singularValues();
    }
    SvdFactors f;
    f.u = from_eigen(u);
    f.v = from_eigen(v);
    f.singular_values.assign(sv.data(), sv.data() + mn);
    return f;
}

double default_rank_cutoff(const SvdFactors& f, std::size_t rows, std::size_t cols) {
    const double smax = f.singular_values.empty() ? 0.0 : f.singular_values.front();
    return static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon() * smax;
}

ComplexMatrix pinv(const ComplexMatrix& a, double rank_tol) {
    if (rank_tol < 0.0) throw std::invalid_argument("pinv: negative rank_tol");
    const SvdFactors f = svd(a);
    const double cutoff =
        rank_tol > 0.0 ? rank_tol : default_rank_cutoff(f, a.rows(), a.cols());
    // A+ = V diag(1/s) U^dagger over singular values above the cutoff
    const std::size_t k = f.singular_values.size();
    ComplexMatrix vs(f.v.rows(), k);
    for (std::size_t i = 0; i < f.v.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j)
            vs(i, j) = f.singular_values[j] > cutoff
                           ? f.v(i, j) / f.singular_values[j]
                           : cplx{0.0, 0.0};
    return vs * adjoint(f.u);
}

std::vector<std::vector<cplx>> nullspace(const ComplexMatrix& a, double rank_tol) {
    const SvdFactors f = svd(a);
    const double cutoff =
        rank_tol > 0.0 ? rank_tol : default_rank_cutoff(f, a.rows(), a.cols());
    std::vector<std::vector<cplx>> basis;
    // right singular vectors whose singular value is below the cutoff; for a
    // wide matrix the trailing cols-min(r,c) directions never appear in the
    // thin V, so append those from a full decomposition only when needed.
    if (a.cols() > a.rows())
        throw std::invalid_argument("nullspace: cols > rows unsupported (square use only)");
    for (std::size_t j = 0; j < f.singular_values.size(); ++j) {
        if (f.singular_values[j] <= cutoff) {
            std::vector<cplx> v(a.cols());
            for (std::size_t i = 0; i < a.cols(); ++i) v[i] = f.v(i, j);
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

namespace {

// Truncated-series exponential core for ||t||_1 <= 0.5; terms added until
// they stop changing the partial sum at machine precision.
ComplexMatrix expm_core(const ComplexMatrix& t) {
    const std::size_t n = t.rows();
    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    constexpr int kMaxOrder = 40;
    for (int k = 1; k <= kMaxOrder; ++k) {
        term = (cplx{1.0 / k, 0.0} * (term * t));
        result = result + term;
        if (max_abs(term) < 1e-18 * (1.0 + max_abs(result))) break;
    }
    return result;
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("expm: non-square");
    if (a.empty()) return a;
    const double nrm = norm_one(a);
    if (!std::isfinite(nrm)) throw NumericalError("expm: non-finite input norm");
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    const cplx scale{std::ldexp(1.0, -s), 0.0};
    ComplexMatrix r = expm_core(scale * a);
    for (int i = 0; i < s; ++i) r = r * r;
    for (const cplx& z : r.entries())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError("expm: overflow");
    return r;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square() || a.rows() != b.rows())
        throw std::invalid_argument("solve: dimension mismatch");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(as_eigen(a));
    // PartialPivLU has no rank query; check the residual instead.
    EigenRowMat x = lu.solve(Eigen::MatrixXcd(as_eigen(b)));
    const double resid = (Eigen::MatrixXcd(as_eigen(a)) * x - Eigen::MatrixXcd(as_eigen(b))).norm();
    const double scale = as_eigen(b).norm();
    if (!std::isfinite(resid) || resid > 1e-8 * (1.0 + scale))
        throw NumericalError("solve: matrix singular to working precision");
    return from_eigen(x);
}

ComplexMatrix inverse(const ComplexMatrix& a) {
    return solve(a, ComplexMatrix::identity(a.rows()));
}

std::vector<cplx> eigenvalues(const ComplexMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("eigenvalues: non-square");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(as_eigen(a), false);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigenvalues: solver did not converge");
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double condition_one(const ComplexMatrix& a, const ComplexMatrix& a_inv) {
    return norm_one(a) * norm_one(a_inv);
}

namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimension mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

ComplexMatrix expm(const ComplexMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("expm: non-square");
    const double nrm = norm_one(a);
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    const cplx scale{std::ldexp(1.0, -s), 0.0};
    const std::size_t n = a.rows();
    ComplexMatrix t = scale * a;
    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 40; ++k) {
        term = cplx{1.0 / k, 0.0} * matmul(term, t);
        result = result + term;
        if (max_abs(term) < 1e-18 * (1.0 + max_abs(result))) break;
    }
    for (int i = 0; i < s; ++i) result = matmul(result, result);
    return result;
}

}  // namespace serial

}  // namespace adel

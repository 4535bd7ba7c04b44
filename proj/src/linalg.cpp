#include "ssc/linalg.hpp"
#include "ssc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssc {

Mat Mat::identity(std::size_t n) {
    Mat I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

void Mat::set_col(std::size_t j, const Vec& v) {
    std::copy(v.begin(), v.end(), col(j));
}

bool Mat::all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
}

double dot(const Vec& x, const Vec& y) {
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

double norm1(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v);
    return s;
}

double norm_inf(const Vec& x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::fabs(v));
    return s;
}

double max_abs(const Vec& x) { return norm_inf(x); }

bool all_finite(const Vec& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

Vec matvec(const Mat& A, const Vec& x) {
    Vec y(A.rows(), 0.0);
    for (std::size_t j = 0; j < A.cols(); ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        const double* c = A.col(j);
        for (std::size_t i = 0; i < A.rows(); ++i) y[i] += c[i] * xj;
    }
    return y;
}

Vec matvec_t(const Mat& A, const Vec& x) {
    Vec y(A.cols(), 0.0);
    for (std::size_t j = 0; j < A.cols(); ++j) {
        const double* c = A.col(j);
        double s = 0.0;
        for (std::size_t i = 0; i < A.rows(); ++i) s += c[i] * x[i];
        y[j] = s;
    }
    return y;
}

Mat matmul(const Mat& A, const Mat& B) {
    Mat C(A.rows(), B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j) {
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double b = B(k, j);
            if (b == 0.0) continue;
            const double* a = A.col(k);
            double* c = C.col(j);
            for (std::size_t i = 0; i < A.rows(); ++i) c[i] += a[i] * b;
        }
    }
    return C;
}

Mat matmul_tn(const Mat& A, const Mat& B) {
    Mat C(A.cols(), B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j) {
        const double* b = B.col(j);
        for (std::size_t i = 0; i < A.cols(); ++i) {
            const double* a = A.col(i);
            double s = 0.0;
            for (std::size_t k = 0; k < A.rows(); ++k) s += a[k] * b[k];
            C(i, j) = s;
        }
    }
    return C;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols(), A.rows());
    for (std::size_t j = 0; j < A.cols(); ++j)
        for (std::size_t i = 0; i < A.rows(); ++i) T(j, i) = A(i, j);
    return T;
}

Vec residual(const Mat& A, const Vec& x, const Vec& y) {
    Vec r = matvec(A, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - r[i];
    return r;
}

double frobenius_norm(const Mat& A) {
    double s = 0.0;
    for (double v : A.data()) s += v * v;
    return std::sqrt(s);
}

namespace {

struct LuFactors {
    Mat lu;
    std::vector<std::size_t> perm;
};

LuFactors lu_factor(const Mat& A) {
    if (A.rows() != A.cols()) throw InvalidInputError("lu_solve: matrix must be square");
    const std::size_t n = A.rows();
    LuFactors f{A, std::vector<std::size_t>(n)};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});

    double scale = frobenius_norm(A);
    const double pivot_floor = 1e-13 * std::max(1.0, scale);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(f.lu(i, k)) > std::fabs(f.lu(p, k))) p = i;
        if (std::fabs(f.lu(p, k)) < pivot_floor)
            throw SingularError("lu_solve: singular or nearly singular matrix");
        if (p != k) {
            std::swap(f.perm[p], f.perm[k]);
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(p, j), f.lu(k, j));
        }
        const double inv_piv = 1.0 / f.lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = f.lu(i, k) * inv_piv;
            f.lu(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
        }
    }
    return f;
}

Vec lu_apply(const LuFactors& f, const Vec& b) {
    const std::size_t n = f.perm.size();
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x[j];
        x[ii] = s / f.lu(ii, ii);
    }
    return x;
}

} // namespace

Vec lu_solve(const Mat& A, const Vec& b) {
    if (b.size() != A.rows()) throw InvalidInputError("lu_solve: dimension mismatch");
    return lu_apply(lu_factor(A), b);
}

Mat lu_solve_multi(const Mat& A, const Mat& B) {
    if (B.rows() != A.rows()) throw InvalidInputError("lu_solve_multi: dimension mismatch");
    LuFactors f = lu_factor(A);
    Mat X(A.cols(), B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j) X.set_col(j, lu_apply(f, B.col_vec(j)));
    return X;
}

Mat householder_q(const Mat& A) {
    const std::size_t n = A.rows(), m = A.cols();
    if (m > n) throw InvalidInputError("householder_q: expected a tall matrix");

    Mat R = A;
    Mat Q = Mat::identity(n);
    Vec v(n);

    for (std::size_t k = 0; k < m; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k; i < n; ++i) alpha += R(i, k) * R(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (R(k, k) > 0.0) alpha = -alpha;

        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            v[i] = R(i, k) - (i == k ? alpha : 0.0);
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;

        for (std::size_t j = k; j < m; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += v[i] * R(i, j);
            s *= beta;
            for (std::size_t i = k; i < n; ++i) R(i, j) -= s * v[i];
        }
        // Accumulate Q <- Q (I - beta v v^T)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += Q(j, i) * v[i];
            s *= beta;
            for (std::size_t i = k; i < n; ++i) Q(j, i) -= s * v[i];
        }
    }
    return Q;
}

} // namespace ssc

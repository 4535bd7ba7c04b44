#pragma once

#include <cstddef>
#include <vector>

namespace ssc {

using Vec = std::vector<double>;

// Dense column-major matrix. Column-major so that dictionary columns are
// contiguous, which is what the coordinate-descent inner loops touch.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Mat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[j * rows_ + i]; }

    double* col(std::size_t j) { return a_.data() + j * rows_; }
    const double* col(std::size_t j) const { return a_.data() + j * rows_; }

    Vec col_vec(std::size_t j) const { return Vec(col(j), col(j) + rows_); }
    void set_col(std::size_t j, const Vec& v);

    const std::vector<double>& data() const { return a_; }

    bool all_finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
double norm1(const Vec& x);
double norm_inf(const Vec& x);
bool all_finite(const Vec& x);

Vec matvec(const Mat& A, const Vec& x);        // A x
Vec matvec_t(const Mat& A, const Vec& x);      // A^T x
Mat matmul(const Mat& A, const Mat& B);
Mat matmul_tn(const Mat& A, const Mat& B);     // A^T B
Mat transpose(const Mat& A);

// y - A x
Vec residual(const Mat& A, const Vec& x, const Vec& y);

double frobenius_norm(const Mat& A);
double max_abs(const Vec& x);

// Solves the square system A x = b by LU with partial pivoting.
// Throws SingularError when a pivot falls below a scale-relative floor.
Vec lu_solve(const Mat& A, const Vec& b);

// Same factorization applied to several right-hand sides (columns of B).
Mat lu_solve_multi(const Mat& A, const Mat& B);

// Full Householder QR of an n x m matrix (m <= n). Returns the complete
// orthogonal factor Q (n x n); columns m..n-1 span the null space of A^T.
Mat householder_q(const Mat& A);

} // namespace ssc

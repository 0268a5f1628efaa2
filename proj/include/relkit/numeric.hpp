#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace relkit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace detail {

// Jacobi is the most accurate option at small sizes; divide & conquer
// takes over once matrices get big enough for it to matter.
inline constexpr int kSmallSvd = 32;

}  // namespace detail

/// Singular values of `a`, descending.
inline Vec singular_values(const Mat& a) {
    if (a.rows() == 0 || a.cols() == 0) return Vec(0);
    if (std::min(a.rows(), a.cols()) <= detail::kSmallSvd)
        return Eigen::JacobiSVD<Mat>(a).singularValues();
    return Eigen::BDCSVD<Mat>(a).singularValues();
}

inline double spectral_norm(const Mat& a) {
    Vec sv = singular_values(a);
    return sv.size() == 0 ? 0.0 : sv(0);
}

/// Thin SVD factors (u, s, v) with a = u * s.asDiagonal() * v^T.
struct thin_svd {
    Mat u;
    Vec s;
    Mat v;
};

inline thin_svd svd_thin(const Mat& a) {
    if (std::min(a.rows(), a.cols()) <= detail::kSmallSvd) {
        Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
    }
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// Numerical rank under a relative singular-value cutoff.
inline int numerical_rank(const Vec& sv, double rank_rtol) {
    if (sv.size() == 0) return 0;
    const double cut = rank_rtol * sv(0);
    if (!(sv(0) > 0.0)) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) >= cut) ++r;
    return r;
}

/// Moore-Penrose pseudo-inverse with relative cutoff `rcond`.
inline Mat pinv(const Mat& a, double rcond) {
    if (a.rows() == 0 || a.cols() == 0) return Mat::Zero(a.cols(), a.rows());
    thin_svd f = svd_thin(a);
    const int r = numerical_rank(f.s, rcond);
    Mat out = Mat::Zero(a.cols(), a.rows());
    for (int i = 0; i < r; ++i)
        out.noalias() += (1.0 / f.s(i)) * f.v.col(i) * f.u.col(i).transpose();
    return out;
}

/// Eigenvalues of a symmetric matrix, ascending.
inline Vec sym_eigenvalues(const Mat& a) {
    if (a.rows() == 0) return Vec(0);
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double min_eigenvalue(const Mat& a) {
    Vec ev = sym_eigenvalues(a);
    return ev.size() == 0 ? 0.0 : ev(0);
}

inline double max_abs(const Mat& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline Mat symmetrized(const Mat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace relkit

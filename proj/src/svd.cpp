#include "spinecurve/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spinecurve {

namespace {

// Column pairs are rotated while their normalized inner product exceeds
// this; comfortably tighter than the 1e-12 * ||A||_F convergence target.
constexpr double kOrthoTol = 1e-14;
constexpr int kMaxSweeps = 60;

double column_dot(const Matrix& m, int p, int q) {
    double s = 0.0;
    for (int r = 0; r < m.rows(); ++r) s += m.at(r, p) * m.at(r, q);
    return s;
}

void rotate_columns(Matrix& m, int p, int q, double c, double s) {
    for (int r = 0; r < m.rows(); ++r) {
        const double vp = m.at(r, p);
        const double vq = m.at(r, q);
        m.at(r, p) = c * vp - s * vq;
        m.at(r, q) = s * vp + c * vq;
    }
}

// Fill columns [filled, total) of u with an orthonormal completion.
// Each new column is the identity vector with the largest residual after
// two Gram-Schmidt passes against the accepted columns; deterministic.
void complete_basis(Matrix& u, int filled, int total) {
    const int m = u.rows();
    for (int next = filled; next < total; ++next) {
        std::vector<double> best;
        double best_norm2 = -1.0;
        for (int cand = 0; cand < m; ++cand) {
            std::vector<double> w(static_cast<size_t>(m), 0.0);
            w[static_cast<size_t>(cand)] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (int j = 0; j < next; ++j) {
                    double d = 0.0;
                    for (int r = 0; r < m; ++r) d += w[static_cast<size_t>(r)] * u.at(r, j);
                    for (int r = 0; r < m; ++r) w[static_cast<size_t>(r)] -= d * u.at(r, j);
                }
            }
            double norm2 = 0.0;
            for (double x : w) norm2 += x * x;
            if (norm2 > best_norm2) {
                best_norm2 = norm2;
                best = std::move(w);
            }
        }
        const double inv = 1.0 / std::sqrt(best_norm2);
        for (int r = 0; r < m; ++r) u.at(r, next) = best[static_cast<size_t>(r)] * inv;
    }
}

void fix_column_sign(Matrix& u, int col, Matrix* v, int vcol) {
    int arg = 0;
    double best = std::abs(u.at(0, col));
    for (int r = 1; r < u.rows(); ++r) {
        const double a = std::abs(u.at(r, col));
        if (a > best) {
            best = a;
            arg = r;
        }
    }
    if (u.at(arg, col) >= 0.0) return;
    for (int r = 0; r < u.rows(); ++r) u.at(r, col) = -u.at(r, col);
    if (v != nullptr)
        for (int r = 0; r < v->rows(); ++r) v->at(r, vcol) = -v->at(r, vcol);
}

} // namespace

SvdResult svd(const Matrix& a) {
    if (!a.all_finite()) throw NonFiniteInput("svd: matrix contains NaN or inf");

    const bool transposed = a.rows() < a.cols();
    Matrix w = transposed ? a.transposed() : a; // m x n with m >= n
    const int m = w.rows();
    const int n = w.cols();

    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double app = column_dot(w, p, p);
                const double aqq = column_dot(w, q, q);
                const double apq = column_dot(w, p, q);
                if (app == 0.0 || aqq == 0.0) continue;
                if (std::abs(apq) <= kOrthoTol * std::sqrt(app * aqq)) continue;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_columns(w, p, q, c, s);
                rotate_columns(v, p, q, c, s);
                rotated = true;
            }
        }
        if (!rotated) break;
    }

    std::vector<double> norms(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) norms[static_cast<size_t>(j)] = std::sqrt(column_dot(w, j, j));

    // Descending sigma; stable on ties so the original column order wins.
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return norms[static_cast<size_t>(i)] > norms[static_cast<size_t>(j)]; });

    Matrix u_full(m, m);
    Matrix v_sorted(n, n);
    std::vector<double> sigma(static_cast<size_t>(n));
    int filled = 0;
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<size_t>(j)];
        const double s = norms[static_cast<size_t>(src)];
        sigma[static_cast<size_t>(j)] = s;
        for (int r = 0; r < n; ++r) v_sorted.at(r, j) = v.at(r, src);
        if (s > 0.0) {
            for (int r = 0; r < m; ++r) u_full.at(r, j) = w.at(r, src) / s;
            filled = j + 1;
        }
    }
    complete_basis(u_full, filled, m);

    SvdResult out;
    if (transposed) {
        out.u = std::move(v_sorted);
        out.v = std::move(u_full);
    } else {
        out.u = std::move(u_full);
        out.v = std::move(v_sorted);
    }
    out.sigma = std::move(sigma);

    const int paired = static_cast<int>(out.sigma.size());
    for (int j = 0; j < out.u.cols(); ++j)
        fix_column_sign(out.u, j, j < paired ? &out.v : nullptr, j);
    for (int j = paired; j < out.v.cols(); ++j)
        fix_column_sign(out.v, j, nullptr, 0);
    return out;
}

int numerical_rank(const SvdResult& s, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw Error("numerical_rank: rel_tol must lie in (0, 1)");
    if (s.sigma.empty() || s.sigma.front() == 0.0) return 0;
    const double cutoff = rel_tol * s.sigma.front();
    int rank = 0;
    for (double v : s.sigma)
        if (v > cutoff) ++rank;
    return rank;
}

} // namespace spinecurve

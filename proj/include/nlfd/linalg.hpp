#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlfd {

class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

/// Thomas algorithm. lower/upper have length n-1, diag and rhs length n.
/// Pivots below 1e-14 * (largest input magnitude) are treated as singular.
inline std::vector<double> tridiagonal_solve(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper,
                                             const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n) {
        throw std::invalid_argument("tridiagonal_solve: inconsistent band lengths");
    }
    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::abs(d));
    for (double d : lower) scale = std::max(scale, std::abs(d));
    for (double d : upper) scale = std::max(scale, std::abs(d));
    const double pivot_floor = 1e-14 * std::max(scale, 1e-300);

    std::vector<double> c(n - 1), x(rhs);
    double piv = diag[0];
    if (std::abs(piv) <= pivot_floor) throw SingularSystemError("tridiagonal_solve: zero pivot at row 0");
    if (n > 1) c[0] = upper[0] / piv;
    x[0] /= piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i - 1] * c[i - 1];
        if (std::abs(piv) <= pivot_floor) {
            throw SingularSystemError("tridiagonal_solve: zero pivot at row " + std::to_string(i));
        }
        if (i < n - 1) c[i] = upper[i] / piv;
        x[i] = (x[i] - lower[i - 1] * x[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

/// Square band matrix. Entries with j outside [i-lower, i+upper] are
/// structurally zero; at() refuses to address them.
class BandedMatrix {
public:
    BandedMatrix(int n, int lower, int upper)
        : n_(n), kl_(lower), ku_(upper),
          data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(lower + upper + 1), 0.0) {
        if (n < 1 || lower < 0 || upper < 0) {
            throw std::invalid_argument("BandedMatrix: bad dimensions");
        }
    }

    int size() const { return n_; }
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }

    bool in_band(int i, int j) const {
        return i >= 0 && i < n_ && j >= 0 && j < n_ && j - i <= ku_ && i - j <= kl_;
    }

    double& at(int i, int j) {
        check(i, j);
        return data_[index(i, j)];
    }
    double at(int i, int j) const {
        check(i, j);
        return data_[index(i, j)];
    }
    /// Value of entry (i, j), zero outside the band.
    double get(int i, int j) const { return in_band(i, j) ? data_[index(i, j)] : 0.0; }

    std::vector<double> multiply(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("BandedMatrix::multiply: size mismatch");
        std::vector<double> y(x.size(), 0.0);
        for (int i = 0; i < n_; ++i) {
            const int jlo = std::max(0, i - kl_), jhi = std::min(n_ - 1, i + ku_);
            double s = 0.0;
            for (int j = jlo; j <= jhi; ++j) s += data_[index(i, j)] * x[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] = s;
        }
        return y;
    }

    double max_abs() const {
        double m = 0.0;
        for (double d : data_) m = std::max(m, std::abs(d));
        return m;
    }

private:
    void check(int i, int j) const {
        if (!in_band(i, j)) {
            throw std::out_of_range("BandedMatrix: (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") outside band of width (" + std::to_string(kl_) + ", " +
                                    std::to_string(ku_) + ")");
        }
    }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(kl_ + ku_ + 1) +
               static_cast<std::size_t>(j - i + kl_);
    }

    int n_, kl_, ku_;
    std::vector<double> data_;
};

/// Gaussian elimination with partial pivoting restricted to the band
/// envelope. Row swaps widen the upper bandwidth by at most `lower`, which is
/// what the working storage allows for.
inline std::vector<double> banded_lu_solve(const BandedMatrix& a, std::vector<double> rhs) {
    const int n = a.size(), kl = a.lower_bandwidth(), ku = a.upper_bandwidth();
    if (static_cast<int>(rhs.size()) != n) throw std::invalid_argument("banded_lu_solve: rhs size mismatch");
    const int kw = ku + kl;              // upper bandwidth after pivot fill
    const int width = kl + kw + 1;
    const double pivot_floor = 1e-14 * std::max(a.max_abs(), 1e-300);

    std::vector<double> w(static_cast<std::size_t>(n) * static_cast<std::size_t>(width), 0.0);
    auto entry = [&](int i, int j) -> double& {
        return w[static_cast<std::size_t>(i) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(j - i + kl)];
    };
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) entry(i, j) = a.get(i, j);
    }

    for (int k = 0; k < n; ++k) {
        const int last_row = std::min(n - 1, k + kl);
        int piv_row = k;
        double piv_mag = std::abs(entry(k, k));
        for (int i = k + 1; i <= last_row; ++i) {
            const double m = std::abs(entry(i, k));
            if (m > piv_mag) { piv_mag = m; piv_row = i; }
        }
        if (piv_mag <= pivot_floor) {
            throw SingularSystemError("banded_lu_solve: pivot below threshold at column " + std::to_string(k));
        }
        if (piv_row != k) {
            for (int j = k; j <= std::min(n - 1, k + kw); ++j) std::swap(entry(k, j), entry(piv_row, j));
            std::swap(rhs[static_cast<std::size_t>(k)], rhs[static_cast<std::size_t>(piv_row)]);
        }
        const double piv = entry(k, k);
        for (int i = k + 1; i <= last_row; ++i) {
            const double m = entry(i, k) / piv;
            if (m == 0.0) continue;
            for (int j = k + 1; j <= std::min(n - 1, k + kw); ++j) entry(i, j) -= m * entry(k, j);
            rhs[static_cast<std::size_t>(i)] -= m * rhs[static_cast<std::size_t>(k)];
        }
    }

    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[static_cast<std::size_t>(i)];
        for (int j = i + 1; j <= std::min(n - 1, i + kw); ++j) s -= entry(i, j) * rhs[static_cast<std::size_t>(j)];
        rhs[static_cast<std::size_t>(i)] = s / entry(i, i);
    }
    return rhs;
}

} // namespace nlfd

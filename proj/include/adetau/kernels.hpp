#pragma once

#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "adetau/scalar.hpp"
#include "adetau/series.hpp"

namespace adetau {

namespace detail {

inline bool is_nonneg_integer(const Rat& r) { return r.is_integer() && r.sign() >= 0; }

template <class V>
class KernelCache {
public:
    template <class F>
    V get(const std::string& key, F&& make) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        V v = make();
        std::lock_guard<std::mutex> lk(mu_);
        if (map_.size() > 4096) map_.clear();
        map_.emplace(key, v);
        return v;
    }

private:
    std::mutex mu_;
    std::map<std::string, V> map_;
};

}  // namespace detail

// ((1+x)^{r+1} - 1 - (r+1)x) / ((r+1)x), known below n.
inline Series c_generator(const Rat& r, int n) {
    std::vector<Rat> c(static_cast<size_t>(std::max(n, 0)), Rat(0));
    for (int k = 1; k < n; ++k) c[k] = poch_desc(r, k) / Rat(factorial(k + 1));
    return Series(0, std::move(c), n);
}

inline Rat c_poly(long p, long j, const Rat& r) {
    if (p > j || p < 0 || j < 0) return Rat(0);
    if (p == 0) return j == 0 ? Rat(1) : Rat(0);
    int n = static_cast<int>(j) + 1;
    auto h = c_generator(r, n);
    return series_pow_int(h, p, n).coeff(static_cast<int>(j)) / Rat(factorial(p));
}

// Rows c_{., j}(r) for j = 0, 1, 2, ... generated by
// (p+j) c_{p,j} = (rp - j + 1) c_{p,j-1} + r c_{p-1,j-1}.
class CRowGenerator {
public:
    explicit CRowGenerator(const Rat& r) : r_(r), j_(0), row_{Rat(1)} {}
    long j() const { return j_; }
    const std::vector<Rat>& row() const { return row_; }
    void advance() {
        long j = j_ + 1;
        std::vector<Rat> next(static_cast<size_t>(j) + 1, Rat(0));
        for (long p = 1; p <= j; ++p) {
            Rat acc(0);
            if (p <= j_) acc += (r_ * Rat(p) - Rat(j) + Rat(1)) * row_[p];
            acc += r_ * row_[p - 1];
            next[p] = acc / Rat(p + j);
        }
        row_ = std::move(next);
        j_ = j;
    }

private:
    Rat r_;
    long j_;
    std::vector<Rat> row_;
};

inline Rat d_coeff(const Rat& lambda, const Rat& r, long j, long s) {
    Rat acc(0);
    for (long p = 0; p <= j; ++p) {
        Rat c = c_poly(p, j, r);
        if (c.is_zero()) continue;
        acc += c * poch_desc(lambda, s + p + j);
    }
    return acc / Rat(factorial(s));
}

// w(u) = 1 + u v(u) with sum_{k>=2} binom(r+1,k)/(r(r+1)) u^{k-2} v^k = 1/2.
inline Series w_series(const Rat& r, int n) {
    if (r.is_zero() || r == Rat(-1)) throw std::domain_error("w_series: r in {0, -1} is degenerate");
    static detail::KernelCache<Series> cache;
    return cache.get("w|" + r.str() + "|" + std::to_string(n), [&] {
        int m = std::max(n - 1, 1);
        int K = detail::is_nonneg_integer(r + Rat(1)) ? static_cast<int>((r + Rat(1)).num().get_si()) : m + 1;
        BivariatePoly<Rat> P(static_cast<size_t>(K) + 1);
        P[0] = Series::constant(Rat(-1, 2));
        for (int k = 2; k <= K; ++k) {
            Rat b = gen_binom(r + Rat(1), k) / (r * (r + Rat(1)));
            if (k - 2 < m) P[k] = Series::monomial(b, k - 2);
        }
        auto v = solve_algebraic(P, Rat(1), Parity::all, m);
        auto w = Series::constant(Rat(1)) + v.shifted(1);
        return w.truncated(n);
    });
}

// (w^{j+1} - 1)/(j+1), or log w for j = -1; coefficient of u^{n+1} is C_n.
inline Series C_generating(const Rat& r, const Rat& j, int n) {
    static detail::KernelCache<Series> cache;
    return cache.get("C|" + r.str() + "|" + j.str() + "|" + std::to_string(n), [&] {
        auto w = w_series(r, n);
        if (j == Rat(-1)) return series_log(w, n);
        auto p = series_pow_frac(w, j + Rat(1), n);
        return (Rat(1) / (j + Rat(1))) * (p - Series::constant(Rat(1)));
    });
}

inline Rat C_coeff(const Rat& r, const Rat& j, int n) {
    if (n < 0) return Rat(0);
    return C_generating(r, j, n + 2).coeff(n + 1);
}

// sum_k (2k+1)!! C_{2k}(r,j) (-T)^k, known below n.
inline Series f_series(const Rat& r, const Rat& j, int n) {
    auto Cg = C_generating(r, j, 2 * n + 1);
    std::vector<Rat> c(static_cast<size_t>(std::max(n, 0)));
    for (int k = 0; k < n; ++k) {
        Rat v = Rat(odd_double_factorial(k)) * Cg.coeff(2 * k + 1);
        c[k] = (k % 2 == 0) ? v : -v;
    }
    return Series(0, std::move(c), n);
}

// Z = 1/X = u B(Z)^{1/r}, B(Z) = sum_i binom(r+1,2i+1)/(r+1) Z^{2i}; known below n.
inline Series Z_series(const Rat& r, int n) {
    static detail::KernelCache<Series> cache;
    return cache.get("Z|" + r.str() + "|" + std::to_string(n), [&] {
        std::vector<Rat> b(static_cast<size_t>(n + 1), Rat(0));
        for (int i = 0; 2 * i < n + 1; ++i) b[2 * i] = gen_binom(r + Rat(1), 2 * i + 1) / (r + Rat(1));
        Series B(0, std::move(b), n + 1);
        auto phi = series_pow_frac(B, Rat(1) / r, n);
        return solve_lagrange(phi, n);
    });
}

// X(u) = 1/u + ..., odd Laurent series, known below n.
inline Series X_series(const Rat& r, int n) {
    auto Z = Z_series(r, n + 2);
    return Z.shifted(-1).inverse(n + 1).shifted(-1).truncated(n);
}

// S(u) = u^{i+j+2} * (-(X+1)^i (X-1)^j dX/du), a power series with S(0) = 1.
inline Series Ctilde_generating(const Rat& r, const Rat& i, const Rat& j, int n) {
    static detail::KernelCache<Series> cache;
    return cache.get("Ct|" + r.str() + "|" + i.str() + "|" + j.str() + "|" + std::to_string(n), [&] {
        auto Z = Z_series(r, n + 2);
        auto one = Series::constant(Rat(1));
        auto zu = Z.shifted(-1).truncated(n + 1);  // Z/u
        auto uz = zu.inverse(n);                    // u/Z
        auto p1 = series_pow_frac((one + Z).truncated(n), i, n);
        auto p2 = series_pow_frac((one - Z).truncated(n), j, n);
        auto p3 = series_pow_frac(uz, i + j + Rat(2), n);
        auto dz = Z.derivative().truncated(n);
        return Series::mul(Series::mul(Series::mul(p1, p2, n), p3, n), dz, n);
    });
}

inline Rat Ctilde(const Rat& r, const Rat& i, const Rat& j, int n) {
    if (n < 0) return Rat(0);
    return Ctilde_generating(r, i, j, n + 1).coeff(n);
}

}  // namespace adetau

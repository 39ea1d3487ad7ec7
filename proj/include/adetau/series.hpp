#pragma once

#include <algorithm>
#include <climits>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adetau/scalar.hpp"

namespace adetau {

// Sum_{n >= val} c_n t^n, known below trunc. Coefficients past the stored
// ones but below trunc are zero; trunc == kExact marks a finite polynomial.
template <class S>
class LaurentSeries {
public:
    static constexpr int kExact = INT_MAX / 4;

    LaurentSeries() : val_(0), trunc_(kExact) {}
    LaurentSeries(int val, std::vector<S> coeffs, int trunc)
        : val_(val), c_(std::move(coeffs)), trunc_(trunc) {
        if (trunc_ < kExact && val_ + static_cast<int>(c_.size()) > trunc_)
            c_.resize(static_cast<size_t>(std::max(0, trunc_ - val_)));
        trim_tail();
    }

    static LaurentSeries constant(const S& c, int trunc = kExact) { return LaurentSeries(0, {c}, trunc); }
    static LaurentSeries monomial(const S& c, int e, int trunc = kExact) { return LaurentSeries(e, {c}, trunc); }
    static LaurentSeries zero(int trunc = kExact) { return LaurentSeries(0, {}, trunc); }

    int valuation() const { return val_; }
    int trunc_order() const { return trunc_; }
    bool is_exact() const { return trunc_ >= kExact; }
    const std::vector<S>& coeffs() const { return c_; }
    int top() const { return val_ + static_cast<int>(c_.size()); }

    S coeff(int k) const {
        if (k >= trunc_) throw std::out_of_range("series coefficient beyond truncation order " + std::to_string(trunc_));
        if (k < val_ || k >= top()) return S(0);
        return c_[static_cast<size_t>(k - val_)];
    }
    S operator[](int k) const { return coeff(k); }

    void set(int k, const S& v) {
        if (k >= trunc_) throw std::out_of_range("series set beyond truncation order");
        if (is_zero(v) && (k < val_ || k >= top())) return;
        if (c_.empty()) {
            val_ = k;
            c_.push_back(v);
            return;
        }
        if (k < val_) {
            c_.insert(c_.begin(), static_cast<size_t>(val_ - k), S(0));
            val_ = k;
        }
        if (k >= top()) c_.resize(static_cast<size_t>(k - val_ + 1), S(0));
        c_[static_cast<size_t>(k - val_)] = v;
    }

    // First nonzero exponent, or trunc when everything known is zero.
    int order() const {
        for (size_t i = 0; i < c_.size(); ++i)
            if (!is_zero(c_[i])) return val_ + static_cast<int>(i);
        return trunc_;
    }
    bool is_zero_series() const { return order() >= trunc_ || (is_exact() && order() == trunc_); }
    bool all_zero() const {
        for (auto& x : c_)
            if (!is_zero(x)) return false;
        return true;
    }

    LaurentSeries normalized() const {
        int o = order();
        if (o >= top()) return LaurentSeries(std::min(o, trunc_ < kExact ? trunc_ : 0), {}, trunc_);
        std::vector<S> c(c_.begin() + (o - val_), c_.end());
        return LaurentSeries(o, std::move(c), trunc_);
    }

    LaurentSeries truncated(int n) const {
        if (n >= trunc_) return *this;
        std::vector<S> c;
        for (int k = val_; k < std::min(top(), n); ++k) c.push_back(c_[static_cast<size_t>(k - val_)]);
        return LaurentSeries(std::min(val_, n), std::move(c), n);
    }

    LaurentSeries shifted(int k) const {
        return LaurentSeries(val_ + k, c_, is_exact() ? kExact : trunc_ + k);
    }

    LaurentSeries operator-() const {
        LaurentSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    LaurentSeries& operator+=(const LaurentSeries& o) { return *this = add(*this, o, false); }
    LaurentSeries& operator-=(const LaurentSeries& o) { return *this = add(*this, o, true); }
    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add(a, b, false); }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return add(a, b, true); }

    friend LaurentSeries operator*(const S& s, const LaurentSeries& a) {
        if (is_zero(s)) return zero(a.trunc_);
        LaurentSeries r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend LaurentSeries operator*(const LaurentSeries& a, const S& s) { return s * a; }

    friend LaurentSeries operator*(const LaurentSeries& x, const LaurentSeries& y) { return mul(x, y, kExact); }

    // Product keeping only exponents below n.
    static LaurentSeries mul(const LaurentSeries& x0, const LaurentSeries& y0, int n) {
        LaurentSeries x = x0.normalized(), y = y0.normalized();
        int t = std::min(sat_add(x.trunc_, y.val_), sat_add(y.trunc_, x.val_));
        t = std::min(t, n);
        if (x.c_.empty() || y.c_.empty()) return zero(t).with_val(std::min(sat_add(x.val_, y.val_), t));
        int v = x.val_ + y.val_;
        int hi = std::min(t, x.top() + y.top() - 1);
        if (hi <= v) return zero(t).with_val(std::min(v, t));
        std::vector<S> c(static_cast<size_t>(hi - v), S(0));
        const int nx = static_cast<int>(x.c_.size()), ny = static_cast<int>(y.c_.size());
        for (int i = 0; i < nx; ++i) {
            if (is_zero(x.c_[i])) continue;
            int jmax = std::min(ny, hi - v - i);
            for (int j = 0; j < jmax; ++j) {
                if (is_zero(y.c_[j])) continue;
                c[i + j] += x.c_[i] * y.c_[j];
            }
        }
        return LaurentSeries(v, std::move(c), t);
    }

    // 1/f with result known below n (absolute exponent).
    LaurentSeries inverse(int n) const {
        LaurentSeries f = normalized();
        if (f.c_.empty() || is_zero(f.c_[0])) throw std::domain_error("series inverse: zero leading coefficient");
        int v = f.val_;
        int rel = std::min(sat_sub(f.trunc_, v), sat_add(n, v));
        if (rel >= kExact) throw std::invalid_argument("series inverse: need explicit order");
        int len = std::max(0, rel);
        std::vector<S> g(static_cast<size_t>(len), S(0));
        S inv0 = S(1) / f.c_[0];
        const int nf = static_cast<int>(f.c_.size());
        for (int k = 0; k < len; ++k) {
            S acc = k == 0 ? S(1) : S(0);
            for (int i = 1; i <= std::min(k, nf - 1); ++i)
                if (!is_zero(f.c_[i])) acc -= f.c_[i] * g[k - i];
            g[k] = acc * inv0;
        }
        return LaurentSeries(-v, std::move(g), -v + len);
    }

    LaurentSeries derivative() const {
        std::vector<S> c;
        for (int k = val_; k < top(); ++k) c.push_back(S(k) * c_[static_cast<size_t>(k - val_)]);
        return LaurentSeries(val_ - 1, std::move(c), is_exact() ? kExact : trunc_ - 1);
    }

    // t -> t^k for k >= 1.
    LaurentSeries substitute_power(int k) const {
        std::vector<S> c;
        for (int e = val_; e < top(); ++e) {
            if (e > val_) for (int z = 1; z < k; ++z) c.push_back(S(0));
            c.push_back(c_[static_cast<size_t>(e - val_)]);
        }
        return LaurentSeries(val_ * k, std::move(c), is_exact() ? kExact : (trunc_ - 1) * k + 1);
    }

    bool is_even() const {
        for (int e = val_; e < top(); ++e)
            if ((e % 2 != 0) && !is_zero(c_[static_cast<size_t>(e - val_)])) return false;
        return true;
    }

    // For an even series: sum c_{2n} t^n.
    LaurentSeries halve_exponents() const {
        if (!is_even()) throw std::domain_error("halve_exponents: odd coefficient present");
        int t = is_exact() ? kExact : ceil_div(trunc_, 2);
        LaurentSeries r = zero(t);
        for (int e = val_; e < top(); ++e)
            if (!is_zero(c_[static_cast<size_t>(e - val_)])) r.set(floor_div(e, 2), c_[static_cast<size_t>(e - val_)]);
        return r;
    }

    static int sat_add(int a, int b) {
        long s = static_cast<long>(a) + b;
        if (a >= kExact || b >= kExact || s >= kExact) return kExact;
        return static_cast<int>(s);
    }
    static int sat_sub(int a, int b) { return a >= kExact ? kExact : a - b; }
    static int floor_div(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }
    static int ceil_div(int a, int b) { return -floor_div(-a, b); }

private:
    LaurentSeries with_val(int v) const {
        LaurentSeries r = *this;
        if (r.c_.empty()) r.val_ = v;
        return r;
    }
    void trim_tail() {
        if (!is_exact()) return;
        while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
    }
    static LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b, bool sub) {
        int t = std::min(a.trunc_, b.trunc_);
        int v = std::min(a.c_.empty() ? b.val_ : a.val_, b.c_.empty() ? a.val_ : b.val_);
        if (v > t) v = t;
        int hi = std::min(t, std::max(a.top(), b.top()));
        std::vector<S> c;
        if (hi > v) c.assign(static_cast<size_t>(hi - v), S(0));
        for (int k = std::max(a.val_, v); k < std::min(a.top(), hi); ++k) c[k - v] += a.c_[k - a.val_];
        for (int k = std::max(b.val_, v); k < std::min(b.top(), hi); ++k) {
            if (sub) c[k - v] -= b.c_[k - b.val_];
            else c[k - v] += b.c_[k - b.val_];
        }
        return LaurentSeries(v, std::move(c), t);
    }

    int val_;
    std::vector<S> c_;
    int trunc_;
};

using Series = LaurentSeries<Rat>;

template <class S>
struct PuiseuxSeries {
    int q = 1;  // exponents are body exponents divided by q
    LaurentSeries<S> body;

    S coeff(const Rat& e) const {
        Rat k = e * Rat(q);
        if (!k.is_integer()) return S(0);
        return body.coeff(static_cast<int>(k.num().get_si()));
    }
};

// f^alpha for f(0) = 1, valuation 0, known below n.
template <class S>
LaurentSeries<S> series_pow_frac(const LaurentSeries<S>& f0, const Rat& alpha, int n) {
    const LaurentSeries<S>& f = f0;
    if (f.order() < 0) throw std::domain_error("series_pow_frac: negative valuation");
    if (f.coeff(0) != S(1)) throw std::domain_error("series_pow_frac: constant term must be 1");
    n = std::min(n, f.trunc_order());
    if (n >= LaurentSeries<S>::kExact) throw std::invalid_argument("series_pow_frac: need explicit order");
    std::vector<std::pair<int, S>> nz;
    for (int k = 1; k < std::min(n, f.top()); ++k)
        if (!is_zero(f.coeff(k))) nz.emplace_back(k, f.coeff(k));
    std::vector<S> g(static_cast<size_t>(std::max(n, 0)), S(0));
    if (n > 0) g[0] = S(1);
    S a(alpha);
    for (int m = 1; m < n; ++m) {
        S acc(0);
        for (auto& [k, fk] : nz) {
            if (k > m) break;
            acc += (a * S(k) - S(m - k)) * fk * g[m - k];
        }
        g[m] = acc / S(m);
    }
    return LaurentSeries<S>(0, std::move(g), n);
}

// Non-negative integer power by repeated squaring, result known below n.
template <class S>
LaurentSeries<S> series_pow_int(const LaurentSeries<S>& f, long e, int n) {
    LaurentSeries<S> result = LaurentSeries<S>::constant(S(1));
    LaurentSeries<S> base = f;
    while (e > 0) {
        if (e & 1) result = LaurentSeries<S>::mul(result, base, n);
        e >>= 1;
        if (e) base = LaurentSeries<S>::mul(base, base, n);
    }
    return result.truncated(n);
}

// log f for f(0) = 1, known below n.
template <class S>
LaurentSeries<S> series_log(const LaurentSeries<S>& f, int n) {
    if (f.coeff(0) != S(1) || f.normalized().valuation() < 0) throw std::domain_error("series_log: constant term must be 1");
    n = std::min(n, f.trunc_order());
    auto q = LaurentSeries<S>::mul(f.derivative(), f.inverse(n), n - 1);
    std::vector<S> c(static_cast<size_t>(n), S(0));
    for (int k = 1; k < n; ++k) c[k] = q.coeff(k - 1) / S(k);
    return LaurentSeries<S>(0, std::move(c), n);
}

template <class S>
LaurentSeries<S> series_sqrt(const LaurentSeries<S>& f0, int n) {
    LaurentSeries<S> f = f0.normalized();
    if (f.coeffs().empty()) throw std::domain_error("series_sqrt: zero series");
    int v = f.valuation();
    if (v % 2 != 0) throw std::domain_error("series_sqrt: odd valuation");
    auto r = exact_sqrt(f.coeff(v));
    if (!r) throw std::domain_error("series_sqrt: leading coefficient is not a square");
    auto unit = (S(1) / f.coeff(v)) * f.shifted(-v);
    auto g = series_pow_frac(unit, Rat(1, 2), n - v / 2);
    return (*r * g).shifted(v / 2);
}

// f(g(t)) for f a power series (valuation >= 0) and g(0) = 0, known below n.
template <class S>
LaurentSeries<S> series_compose(const LaurentSeries<S>& f, const LaurentSeries<S>& g, int n) {
    if (g.normalized().valuation() < 1 && !g.all_zero()) throw std::domain_error("series_compose: inner series must vanish at 0");
    if (f.normalized().valuation() < 0 && !f.all_zero()) throw std::domain_error("series_compose: outer series has a pole");
    int deg = std::min(f.top(), f.trunc_order() < LaurentSeries<S>::kExact ? f.trunc_order() : f.top());
    int gv = std::max(1, g.normalized().valuation());
    deg = std::min(deg, n / gv + 1);
    int tr = f.is_exact() ? LaurentSeries<S>::kExact : f.trunc_order() * gv;
    LaurentSeries<S> acc = LaurentSeries<S>::zero();
    for (int k = deg - 1; k >= 0; --k) {
        acc = LaurentSeries<S>::mul(acc, g, n);
        acc = acc + LaurentSeries<S>::constant(f.coeff(k));
    }
    return acc.truncated(std::min(n, tr));
}

enum class Parity { all, even };

// P(y, t) = sum_k P[k](t) y^k.
template <class S>
using BivariatePoly = std::vector<LaurentSeries<S>>;

template <class S>
LaurentSeries<S> eval_poly_in_y(const BivariatePoly<S>& P, const LaurentSeries<S>& y, int n) {
    LaurentSeries<S> acc = LaurentSeries<S>::zero(n);
    for (int k = static_cast<int>(P.size()) - 1; k >= 0; --k) {
        acc = LaurentSeries<S>::mul(acc, y, n);
        acc = (acc + P[k].truncated(n)).truncated(n);
    }
    return acc.truncated(n);
}

template <class S>
BivariatePoly<S> diff_poly_in_y(const BivariatePoly<S>& P) {
    BivariatePoly<S> d;
    for (size_t k = 1; k < P.size(); ++k) d.push_back(S(static_cast<long>(k)) * P[k]);
    return d;
}

// Unique power series root y(t) of P with y(0) = y0, by order-doubling Newton.
template <class S>
LaurentSeries<S> solve_algebraic(const BivariatePoly<S>& P, const S& y0, Parity parity, int n) {
    if (parity == Parity::even) {
        bool even = std::all_of(P.begin(), P.end(), [](const LaurentSeries<S>& a) { return a.is_even(); });
        if (even) {
            BivariatePoly<S> H;
            for (auto& a : P) H.push_back(a.halve_exponents());
            auto yh = solve_algebraic(H, y0, Parity::all, LaurentSeries<S>::ceil_div(n + 1, 2));
            return yh.substitute_power(2).truncated(n);
        }
        auto y = solve_algebraic(P, y0, Parity::all, n);
        if (!y.is_even()) throw std::domain_error("solve_algebraic: parity violation (odd coefficient)");
        return y;
    }
    auto P0 = [&](const BivariatePoly<S>& Q, const S& y) {
        S acc(0);
        for (int k = static_cast<int>(Q.size()) - 1; k >= 0; --k) acc = acc * y + Q[k].coeff(0);
        return acc;
    };
    for (auto& a : P)
        if (a.normalized().valuation() < 0 && !a.all_zero()) throw std::domain_error("solve_algebraic: coefficient with a pole");
    if (!is_zero(P0(P, y0))) throw std::domain_error("solve_algebraic: y0 is not a root at t = 0");
    auto dP = diff_poly_in_y(P);
    if (is_zero(P0(dP, y0))) throw std::domain_error("solve_algebraic: degenerate root (dP/dy vanishes)");
    LaurentSeries<S> y = LaurentSeries<S>::constant(y0, 1);
    int prec = 1;
    while (prec < n) {
        prec = std::min(2 * prec, n);
        LaurentSeries<S> yp(0, y.coeffs(), prec);
        auto F = eval_poly_in_y(P, yp, prec);
        auto Fy = eval_poly_in_y(dP, yp, prec);
        auto corr = LaurentSeries<S>::mul(F, Fy.inverse(prec), prec);
        y = (yp - corr).truncated(prec);
    }
    y = y.truncated(n);
    auto check = eval_poly_in_y(P, y, n);
    if (!check.all_zero()) throw std::logic_error("solve_algebraic: re-substitution is not zero");
    return y;
}

// Solve Z = t * phi(Z), Z(0) = 0, by Newton iteration.
template <class S>
LaurentSeries<S> solve_lagrange(const LaurentSeries<S>& phi, int n) {
    auto t = LaurentSeries<S>::monomial(S(1), 1);
    LaurentSeries<S> Z = LaurentSeries<S>::monomial(phi.coeff(0), 1, std::min(n, 2));
    auto dphi = phi.derivative();
    int prec = 2;
    while (prec < n) {
        prec = std::min(2 * prec, n);
        LaurentSeries<S> Zp(Z.valuation(), Z.coeffs(), prec);
        auto G = (Zp - LaurentSeries<S>::mul(t, series_compose(phi, Zp, prec - 1), prec)).truncated(prec);
        auto Gd = (LaurentSeries<S>::constant(S(1)) - LaurentSeries<S>::mul(t, series_compose(dphi, Zp, prec - 1), prec)).truncated(prec);
        Z = (Zp - LaurentSeries<S>::mul(G, Gd.inverse(prec), prec)).truncated(prec);
    }
    return Z.truncated(n);
}

// lam is given in q = 1/p with leading term q^{-r}. Returns p(xi) as a series
// in t = 1/xi: p = t^{-1} + sum_k u_k t^k, known for k <= n.
template <class S>
LaurentSeries<S> invert_superpotential(const LaurentSeries<S>& lam_q, int r, int n) {
    auto lam = lam_q.normalized();
    if (lam.valuation() != -r) throw std::domain_error("invert_superpotential: leading term must be p^r");
    if (lam.coeff(-r) != S(1)) throw std::domain_error("invert_superpotential: superpotential is not monic");
    int N = n + 2;
    auto h = lam.shifted(r).truncated(N);
    auto phi = series_pow_frac(h, Rat(1, r), N);
    auto Z = solve_lagrange(phi, N + 1);
    auto unit = Z.shifted(-1);  // Z/t
    return unit.inverse(N).shifted(-1).truncated(n + 1);
}

// lam in p: s_l^2 p^{-2} + even powers up to p^r (coefficient 1). Returns p^-(xi)
// as a series in t = 1/xi with valuation r/2, known below n.
template <class S>
LaurentSeries<S> invert_superpotential_neg(const LaurentSeries<S>& lam, int r, int n) {
    if (r % 2 != 0) throw std::domain_error("invert_superpotential_neg: r must be even");
    if (!lam.is_exact() || !lam.is_even() || lam.valuation() < -2 || lam.top() != r + 1 || lam.coeff(r) != S(1))
        throw std::domain_error("invert_superpotential_neg: wrong superpotential shape");
    S sl2 = lam.coeff(-2);
    if (is_zero(sl2)) return LaurentSeries<S>::zero(n);
    auto sl = exact_sqrt(sl2);
    if (!sl) throw std::domain_error("invert_superpotential_neg: s_l^2 is not a square");
    // E(P) = sum_{j>=0} lam_{2j} P^j
    LaurentSeries<S> E = LaurentSeries<S>::zero();
    for (int j = 0; 2 * j <= r; ++j) E.set(j, lam.coeff(2 * j));
    int r2 = r / 2;
    int M = std::max(1, LaurentSeries<S>::ceil_div(n - r2, r) + 1);  // orders in eps
    auto eps = LaurentSeries<S>::monomial(S(1), 1);
    LaurentSeries<S> W = LaurentSeries<S>::constant(sl2, M);
    for (int it = 0; it < M + 1; ++it) {
        auto EW = series_compose(E, LaurentSeries<S>::mul(eps, W, M + 1), M);
        auto den = (LaurentSeries<S>::constant(S(1)) - LaurentSeries<S>::mul(eps, EW, M)).truncated(M);
        W = (sl2 * den.inverse(M)).truncated(M);
    }
    auto root = series_pow_frac((S(1) / sl2) * W, Rat(1, 2), M);
    auto p = (*sl * root).substitute_power(r).shifted(r2);
    return p.truncated(n);
}

}  // namespace adetau

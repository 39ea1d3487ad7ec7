#pragma once

#include <climits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "adetau/kernels.hpp"
#include "adetau/scalar.hpp"
#include "adetau/series.hpp"

namespace adetau {

// Polynomial in x, index = power.
using XPoly = std::vector<Rat>;

namespace xpoly {

inline void trim(XPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline XPoly derivative(const XPoly& p) {
    XPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(Rat(static_cast<long>(i)) * p[i]);
    return d;
}

inline void add_scaled_product(XPoly& acc, const XPoly& a, const XPoly& b, const Rat& s) {
    if (a.empty() || b.empty() || s.is_zero()) return;
    if (acc.size() < a.size() + b.size() - 1) acc.resize(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        Rat ai = a[i] * s;
        for (size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) acc[i + j] += ai * b[j];
    }
}

inline Rat eval(const XPoly& p, const Rat& x) {
    Rat acc(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

}  // namespace xpoly

// sum_k p_k(x) d^k; orders below floor() are unknown.
class PsiDOp {
public:
    static constexpr int kNoFloor = INT_MIN / 4;

    PsiDOp() = default;

    static PsiDOp identity() { return monomial(0, {Rat(1)}); }
    static PsiDOp monomial(int order, XPoly p, int floor = kNoFloor) {
        PsiDOp A;
        A.floor_ = floor;
        A.set(order, std::move(p));
        return A;
    }

    int max_order() const {
        if (terms_.empty()) return floor_ == kNoFloor ? kNoFloor : floor_;
        return terms_.rbegin()->first;
    }
    int floor() const { return floor_; }
    int depth() const { return floor_ == kNoFloor ? INT_MAX : max_order() - floor_; }
    bool is_exact() const { return floor_ == kNoFloor; }
    const std::map<int, XPoly>& terms() const { return terms_; }

    XPoly coeff(int k) const {
        if (k < floor_) throw std::out_of_range("PsiDOp: order " + std::to_string(k) + " is below the tracked depth");
        auto it = terms_.find(k);
        return it == terms_.end() ? XPoly{} : it->second;
    }

    void set(int k, XPoly p) {
        xpoly::trim(p);
        if (k < floor_) return;
        if (p.empty()) terms_.erase(k);
        else terms_[k] = std::move(p);
    }

    PsiDOp with_floor(int f) const {
        PsiDOp A;
        A.floor_ = std::max(f, floor_);
        for (auto& [k, p] : terms_)
            if (k >= A.floor_) A.terms_[k] = p;
        return A;
    }

    friend PsiDOp operator+(const PsiDOp& A, const PsiDOp& B) {
        PsiDOp C;
        C.floor_ = std::max(A.floor_, B.floor_);
        for (auto& [k, p] : A.terms_) C.accumulate(k, p, Rat(1));
        for (auto& [k, p] : B.terms_) C.accumulate(k, p, Rat(1));
        return C;
    }
    friend PsiDOp operator-(const PsiDOp& A, const PsiDOp& B) {
        PsiDOp C;
        C.floor_ = std::max(A.floor_, B.floor_);
        for (auto& [k, p] : A.terms_) C.accumulate(k, p, Rat(1));
        for (auto& [k, p] : B.terms_) C.accumulate(k, p, Rat(-1));
        return C;
    }
    friend bool operator==(const PsiDOp& A, const PsiDOp& B) { return A.floor_ == B.floor_ && A.terms_ == B.terms_; }

    bool is_zero() const { return terms_.empty(); }

    void accumulate(int k, const XPoly& p, const Rat& s) {
        if (k < floor_ || p.empty()) return;
        XPoly& q = terms_[k];
        if (q.size() < p.size()) q.resize(p.size(), Rat(0));
        for (size_t i = 0; i < p.size(); ++i) q[i] += s * p[i];
        xpoly::trim(q);
        if (q.empty()) terms_.erase(k);
    }

private:
    std::map<int, XPoly> terms_;
    int floor_ = kNoFloor;
};

namespace detail {
inline int sat_floor_add(int f, int top) {
    if (f == PsiDOp::kNoFloor || top == PsiDOp::kNoFloor) return PsiDOp::kNoFloor;
    return f + top;
}
}  // namespace detail

// A o B with the Leibniz rule d^m o f = sum_l binom(m,l) f^(l) d^(m-l); orders
// below out_floor are discarded.
inline PsiDOp compose(const PsiDOp& A, const PsiDOp& B, int out_floor = PsiDOp::kNoFloor) {
    int f = std::max(detail::sat_floor_add(A.floor(), B.max_order()), detail::sat_floor_add(B.floor(), A.max_order()));
    f = std::max(f, out_floor);
    PsiDOp C = PsiDOp::monomial(0, {}, f);
    std::map<int, std::vector<XPoly>> derivs;
    for (auto& [j, b] : B.terms()) {
        std::vector<XPoly> ds{b};
        while (!ds.back().empty()) ds.push_back(xpoly::derivative(ds.back()));
        ds.pop_back();
        derivs[j] = std::move(ds);
    }
    std::map<int, XPoly> acc;
    for (auto& [i, a] : A.terms()) {
        for (auto& [j, ds] : derivs) {
            for (size_t l = 0; l < ds.size(); ++l) {
                int o = i + j - static_cast<int>(l);
                if (o < f) break;
                Rat bin = gen_binom(Rat(i), static_cast<long>(l));
                if (bin.is_zero()) continue;
                xpoly::add_scaled_product(acc[o], a, ds[l], bin);
            }
        }
    }
    for (auto& [o, p] : acc) C.set(o, p);
    return C;
}

inline PsiDOp adjoint(const PsiDOp& A) {
    PsiDOp C = PsiDOp::monomial(0, {}, A.floor());
    for (auto& [k, p] : A.terms()) {
        Rat sgn = (k % 2 == 0) ? Rat(1) : Rat(-1);
        XPoly d = p;
        for (long l = 0; !d.empty(); ++l) {
            int o = k - static_cast<int>(l);
            if (o < A.floor()) break;
            C.accumulate(o, d, sgn * gen_binom(Rat(k), l));
            d = xpoly::derivative(d);
        }
    }
    return C;
}

inline PsiDOp power(const PsiDOp& R, long k, int out_floor = PsiDOp::kNoFloor) {
    PsiDOp result = PsiDOp::identity();
    PsiDOp base = R;
    bool first = true;
    while (k > 0) {
        if (k & 1) {
            result = first ? base : compose(result, base);
            first = false;
        }
        k >>= 1;
        if (k) base = compose(base, base);
    }
    return out_floor == PsiDOp::kNoFloor ? result : result.with_floor(out_floor);
}

// R = d + sum_{j>=1} a_j d^{1-j} with R^r = L, orders 1 .. 1-depth tracked.
inline PsiDOp rth_root(const PsiDOp& L, int r, int depth) {
    if (r < 1) throw std::domain_error("rth_root: r must be positive");
    if (L.max_order() != r || L.coeff(r) != XPoly{Rat(1)})
        throw std::domain_error("rth_root: operator must be monic of order r");
    if (!L.is_exact() && L.floor() > r - depth) throw std::domain_error("rth_root: input depth too small");
    PsiDOp R = PsiDOp::monomial(1, {Rat(1)});
    for (int d = 0; d < depth; ++d) {
        int o = r - d - 1;
        PsiDOp P = R;
        for (int i = 1; i < r; ++i) P = compose(P, R, o - (r - 1 - i));
        XPoly target = L.coeff(o);
        XPoly cur = P.terms().count(o) ? P.terms().at(o) : XPoly{};
        XPoly a(std::max(target.size(), cur.size()), Rat(0));
        for (size_t i = 0; i < target.size(); ++i) a[i] += target[i];
        for (size_t i = 0; i < cur.size(); ++i) a[i] -= cur[i];
        for (auto& c : a) c /= Rat(r);
        R.set(-d, a);
    }
    return R.with_floor(1 - depth);
}

inline XPoly residue(const PsiDOp& A) {
    if (A.floor() > -1) throw std::out_of_range("residue: tracked depth does not reach order -1");
    return A.coeff(-1);
}

enum class Family { A, D, E6 };

inline PsiDOp lax_operator(Family fam, int r, const Rat& C) {
    PsiDOp L = PsiDOp::monomial(r, {Rat(1)});
    L.accumulate(0, {Rat(0), C}, Rat(1));
    if (fam == Family::D) L.accumulate(-1, {C / Rat(2)}, Rat(-1));
    return L;
}

// z_k(0) = res L^{k/r} at x = 0 for k = 0..kmax.
inline std::vector<Rat> psido_residues_at_zero(Family fam, int r, const Rat& C, int kmax) {
    PsiDOp L = lax_operator(fam, r, C);
    PsiDOp R = rth_root(L, r, kmax + 1);
    std::vector<Rat> out;
    PsiDOp P = PsiDOp::identity();
    for (int k = 0; k <= kmax; ++k) {
        if (k > 0) P = compose(P, R);
        XPoly z = residue(P.with_floor(-1));
        out.push_back(z.empty() ? Rat(0) : z[0]);
    }
    return out;
}

constexpr int kMaxPsidoDepth = 200;

inline Rat tau_from_psido(Family fam, int r, int g) {
    if (g < 1) throw std::domain_error("tau_from_psido: g must be positive");
    if (fam == Family::D && r % 2 != 0) throw std::domain_error("tau_from_psido: D family needs even r");
    if (fam == Family::E6) throw std::domain_error("tau_from_psido: only A and D families");
    long k = 2L * g * (r + 1) - 1;
    if (k + 1 > kMaxPsidoDepth)
        throw std::length_error("tau_from_psido: depth " + std::to_string(k + 1) + " exceeds limit " +
                                std::to_string(kMaxPsidoDepth) + " (about " + std::to_string((k + 1) * (k + 1) / r) +
                                " coefficient polynomials)");
    long alpha = (2L * g - 1) % r;
    if (fam == Family::A && alpha == 0) return Rat(0);
    long q = (k - alpha) / r - 1;
    PsiDOp L = lax_operator(fam, r, Rat(r));
    PsiDOp R = rth_root(L, r, static_cast<int>(k + 1));
    XPoly z = residue(power(R, k, -1));
    Rat z0 = z.empty() ? Rat(0) : z[0];
    Rat sign = ((q + g) % 2 == 0) ? Rat(1) : Rat(-1);
    return sign * z0 / (pow(Rat(r), 3L * g) * poch_asc(Rat(alpha, r), q + 2));
}

// x-expansion of res_z d^i(psi) psi* dz from the f-series wave functions.
inline Series pairing_defect(int r, const Rat& C, int i, int n) {
    Series out = Series::zero(n);
    Rat T0 = C / Rat(r);
    for (int M = 0; M < n; ++M) {
        if ((M + i + 1) % (r + 1) != 0) continue;
        int q = (M + i + 1) / (r + 1);
        Rat acc(0);
        for (int m = 0; m <= M; ++m) {
            int l = M - m;
            auto fa = f_series(Rat(r), Rat(m + i), q + 1);
            auto fb = f_series(Rat(r), Rat(l), q + 1);
            Rat coeff(0);
            for (int a = 0; a <= q; ++a) {
                Rat b = fb.coeff(q - a);
                if ((q - a) % 2 != 0) b = -b;
                coeff += fa.coeff(a) * b;
            }
            Rat term = coeff / Rat(Int(factorial(m) * factorial(l)));
            acc += (l % 2 == 0) ? term : -term;
        }
        out.set(M, acc * pow(T0, q));
    }
    return out;
}

// Coefficients of z^{-k}, k = 0..kmax, of f_0(C/(r z^{r+1})) f_0(-C/(r z^{r+1})).
inline std::vector<Rat> h_series_from_f(int r, const Rat& C, int kmax) {
    int nT = kmax / (r + 1) + 1;
    auto f = f_series(Rat(r), Rat(0), nT);
    std::vector<Rat> h(static_cast<size_t>(kmax) + 1, Rat(0));
    Rat T0 = C / Rat(r);
    for (int n = 0; n < nT; ++n) {
        Rat c(0);
        for (int a = 0; a <= n; ++a) {
            Rat b = f.coeff(n - a);
            if ((n - a) % 2 != 0) b = -b;
            c += f.coeff(a) * b;
        }
        h[static_cast<size_t>(n * (r + 1))] = c * pow(T0, n);
    }
    return h;
}

}  // namespace adetau

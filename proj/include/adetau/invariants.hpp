#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "adetau/kernels.hpp"
#include "adetau/oderec.hpp"
#include "adetau/psido.hpp"
#include "adetau/scalar.hpp"
#include "adetau/series.hpp"

#ifndef ADETAU_VERSION
#define ADETAU_VERSION "1.0.0"
#endif

namespace adetau {

enum class Method { Closed, Genfunc, Hyper, Product, Psido, Recursion, Ode };

struct TauRecord {
    Family family;
    int r;
    int g;
    Rat value;
    Method method;

    friend bool operator==(const TauRecord& a, const TauRecord& b) {
        return a.family == b.family && a.r == b.r && a.g == b.g && a.value == b.value && a.method == b.method;
    }
};

struct IndexSolve {
    int alpha;
    long m;
};

inline std::string family_tag(Family f) {
    switch (f) {
        case Family::A: return "a";
        case Family::D: return "d";
        case Family::E6: return "e6";
    }
    return "?";
}

inline std::string method_tag(Method m) {
    switch (m) {
        case Method::Closed: return "closed";
        case Method::Genfunc: return "genfunc";
        case Method::Hyper: return "hyper";
        case Method::Product: return "product";
        case Method::Psido: return "psido";
        case Method::Recursion: return "recursion";
        case Method::Ode: return "ode";
    }
    return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
    for (Method m : {Method::Closed, Method::Genfunc, Method::Hyper, Method::Product, Method::Psido, Method::Recursion,
                     Method::Ode})
        if (method_tag(m) == s) return m;
    return std::nullopt;
}

inline std::optional<Family> parse_family(const std::string& s) {
    for (Family f : {Family::A, Family::D, Family::E6})
        if (family_tag(f) == s) return f;
    return std::nullopt;
}

// Exponents m_1..m_n in the ordering used for tau indexing.
inline std::vector<int> exponents(Family fam, int r) {
    std::vector<int> m;
    if (fam == Family::A)
        for (int a = 1; a < r; ++a) m.push_back(a);
    else if (fam == Family::D) {
        int l = r / 2 + 1;
        for (int a = 1; a < l; ++a) m.push_back(2 * a - 1);
        m.push_back(l - 1);
    } else
        m = {1, 4, 5, 7, 8, 11};
    return m;
}

// alpha (1-based, into exponents()) and m with 2g-1 = m_alpha + r m; nullopt if no exponent fits.
inline std::optional<IndexSolve> solve_index(Family fam, int r, int g) {
    auto ms = exponents(fam, r);
    for (size_t a = 0; a < ms.size(); ++a) {
        long d = 2L * g - 1 - ms[a];
        if (((d % r) + r) % r != 0) continue;
        long m = (d >= 0) ? d / r : -((-d + r - 1) / r);
        return IndexSolve{static_cast<int>(a) + 1, m};
    }
    return std::nullopt;
}

namespace detail {

inline Rat sign_pow(long e) { return (e % 2 == 0) ? Rat(1) : Rat(-1); }

inline int thread_count() {
    if (const char* s = std::getenv("ADETAU_THREADS")) {
        int n = std::atoi(s);
        if (n >= 1) return n;
    }
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : static_cast<int>(h);
}

inline void parallel_for(int n, const std::function<void(int)>& body) {
    int T = std::min(thread_count(), n);
    if (T <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(static_cast<size_t>(T));
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i = next++; i < n; i = next++) body(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

inline void require_a(int r) {
    if (r < 2) throw std::invalid_argument("family A needs r >= 2");
}

inline int d_rank(int l) {
    if (l < 4) throw std::invalid_argument("family D needs l >= 4");
    return 2 * l - 2;
}

// (-1)^{m+g} r^{1-g} / ({(2g-1)/r})_m; zero when r | 2g-1.
inline Rat genfunc_factor(int r, int g) {
    auto fp = frac_int(2L * g - 1, r);
    if (fp.A.is_zero()) return Rat(0);
    long m = fp.m.get_si();
    return sign_pow(m + g) * pow(Rat(r), 1L - g) / poch_signed(fp.A, m);
}

// c_{., j}(r) rows for j = 0..jmax.
inline std::vector<std::vector<Rat>> c_rows(const Rat& r, int jmax) {
    std::vector<std::vector<Rat>> rows;
    CRowGenerator gen(r);
    rows.push_back(gen.row());
    for (int j = 1; j <= jmax; ++j) {
        gen.advance();
        rows.push_back(gen.row());
    }
    return rows;
}

// Closed-formula prefactor (-1)^{g+m-1} r^{-g} / ({(2g-1)/r})_{2g+m+1}.
inline Rat closed_prefactor(int r, int g) {
    auto fp = frac_int(2L * g - 1, r);
    long m = fp.m.get_si();
    return sign_pow(g + m - 1) * pow(Rat(r), -static_cast<long>(g)) / poch_signed(fp.A, 2L * g + m + 1);
}

inline Rat closed_lambda(int r, int g) { return Rat(2L * g * (r + 1) - 1, r); }

// sum over partitions of g into parts 1..R of multinomial(d; m) prod w_i^{m_i}, grouped by d.
inline std::vector<Rat> partition_sums(int g, const std::vector<Rat>& w) {
    int R = static_cast<int>(w.size()) - 1;
    std::vector<Rat> K(static_cast<size_t>(g) + 1, Rat(0));
    std::vector<std::vector<Rat>> wp(static_cast<size_t>(R) + 1);
    for (int i = 1; i <= R; ++i) {
        wp[i].push_back(Rat(1));
        for (int k = 1; k * i <= g; ++k) wp[i].push_back(wp[i].back() * w[i]);
    }
    std::vector<Rat> inv_fact;
    for (int k = 0; k <= g; ++k) inv_fact.push_back(Rat(1) / Rat(factorial(k)));
    std::function<void(int, int, int, const Rat&)> rec = [&](int i, int rest, int d, const Rat& acc) {
        if (rest == 0) {
            K[d] += acc * Rat(factorial(d));
            return;
        }
        if (i > R) return;
        for (int mi = 0; mi * i <= rest; ++mi) {
            if (i == R && mi * i != rest) continue;
            rec(i + 1, rest - mi * i, d + mi, mi == 0 ? acc : acc * wp[i][mi] * inv_fact[mi]);
        }
    };
    if (g == 0) {
        K[0] = Rat(1);
        return K;
    }
    if (R >= 1) rec(1, g, 0, Rat(1));
    return K;
}

inline Rat hyper_assemble(int r, int g, const std::vector<Rat>& K, const std::function<Rat(int)>& scale_d) {
    auto fp = frac_int(2L * g - 1, r);
    if (fp.A.is_zero()) return Rat(0);
    Rat x(2L * g - 1, r);
    Rat S(0);
    for (int d = 0; d < static_cast<int>(K.size()); ++d)
        if (!K[d].is_zero()) S += gen_binom(x, d) * K[d] * scale_d(d);
    return genfunc_factor(r, g) * S / Rat(1L - 2L * g);
}

// Product-identity normalization (1 - (1-2g)/r)_{2g} (1-2g) r^{2g}.
inline Rat product_norm(int r, int g) {
    return poch_asc(Rat(1) - Rat(1L - 2L * g, r), 2L * g) * Rat(1L - 2L * g) * pow(Rat(r), 2L * g);
}

}  // namespace detail

// ---- family A ----

inline Rat tau_a_closed(int r, int g) {
    detail::require_a(r);
    if (g < 0) throw std::invalid_argument("g must be nonnegative");
    if (frac_int(2L * g - 1, r).A.is_zero()) return Rat(0);
    CRowGenerator gen{Rat(r)};
    while (gen.j() < 2L * g) gen.advance();
    Rat lam = detail::closed_lambda(r, g);
    Rat S(0);
    Rat fall = poch_desc(lam, 2L * g);
    const auto& row = gen.row();
    for (int p = 0; p <= 2 * g; ++p) {
        if (p > 0) fall *= lam - Rat(2L * g + p - 1);
        S += fall * row[p];
    }
    return detail::closed_prefactor(r, g) * S;
}

// a~_0..a~_gmax(r): y = sum a~_g (2x)^{2g} solving sum_i binom(r+1,2i+1) x^{2i} y^{r-2i} = r+1.
inline std::vector<Rat> a_tilde(int r, int gmax) {
    detail::require_a(r);
    int n = 2 * gmax + 1;
    BivariatePoly<Rat> P(static_cast<size_t>(r) + 1, Series::zero());
    for (int i = 0; 2 * i <= r; ++i) P[r - 2 * i] = P[r - 2 * i] + Series::monomial(Rat(binom_int(r + 1, 2 * i + 1)), 2 * i);
    P[0] = P[0] - Series::constant(Rat(r + 1));
    auto y = solve_algebraic(P, Rat(1), Parity::even, n);
    std::vector<Rat> out;
    for (int g = 0; g <= gmax; ++g) out.push_back(y.coeff(2 * g) / pow(Rat(4), g));
    return out;
}

inline std::vector<Rat> tau_a_genfunc(int r, int gmax) {
    auto at = a_tilde(r, gmax);
    std::vector<Rat> tau;
    for (int g = 0; g <= gmax; ++g) tau.push_back(detail::genfunc_factor(r, g) * at[g]);
    return tau;
}

inline Rat tau_a_hyper(int r, int g) {
    detail::require_a(r);
    int R = r / 2;
    std::vector<Rat> w(static_cast<size_t>(R) + 1, Rat(0));
    for (int i = 1; i <= R; ++i) w[i] = Rat(binom_int(r + 1, 2 * i + 1));
    auto K = detail::partition_sums(g, w);
    Rat base = Rat(1) / pow(Rat(4), g);
    return detail::hyper_assemble(r, g, K, [&](int d) { return base / pow(Rat(r + 1), d); });
}

inline std::vector<Rat> tau_a_product(int r, int gmax) {
    detail::require_a(r);
    int n = 2 * gmax + 1;
    auto f = f_series(Rat(r), Rat(0), n);
    std::vector<Rat> tau;
    for (int g = 0; g <= gmax; ++g) {
        Rat c(0);
        for (int a = 0; a <= 2 * g; ++a) {
            Rat b = f.coeff(2 * g - a);
            if ((2 * g - a) % 2 != 0) b = -b;
            c += f.coeff(a) * b;
        }
        tau.push_back(detail::genfunc_factor(r, g) * c / detail::product_norm(r, g));
    }
    return tau;
}

// ---- family D (argument l, r = 2l - 2) ----

namespace detail {

inline Rat d_closed_from_rows(int r, int g, const std::vector<std::vector<Rat>>& rows) {
    Rat lam = closed_lambda(r, g);
    Rat base = poch_desc(lam, 2L * g);
    std::vector<Rat> fall{base};
    for (int p = 1; p <= 2 * g; ++p) fall.push_back(fall.back() * (lam - Rat(2L * g + p - 1)));
    Rat S(0);
    for (int j = 0; j <= 2 * g; ++j) {
        Rat inner(0);
        for (int p = 0; p <= j; ++p)
            if (!rows[j][p].is_zero()) inner += rows[j][p] * fall[p];
        S += inner * gen_binom(Rat(-1, 2), 2L * g - j);
    }
    return closed_prefactor(r, g) * S;
}

inline std::vector<Rat> d_weights(int l) {
    std::vector<Rat> w(static_cast<size_t>(l), Rat(0));
    for (int i = 1; i < l; ++i) w[i] = Rat(binom_int(l - 1 + i, 2 * i), 2 * i + 1);
    return w;
}

}  // namespace detail

inline Rat tau_d_closed(int l, int g) {
    int r = detail::d_rank(l);
    if (g < 0) throw std::invalid_argument("g must be nonnegative");
    return detail::d_closed_from_rows(r, g, detail::c_rows(Rat(r), 2 * g));
}

// n_0..n_gmax(r): sum_j binom(j+r/2, 2j)/(2j+1) y^{r-2j} t^{2j} = 1.
inline std::vector<Rat> n_series(int l, int gmax) {
    int r = detail::d_rank(l);
    int n = 2 * gmax + 1;
    BivariatePoly<Rat> P(static_cast<size_t>(r) + 1, Series::zero());
    auto w = detail::d_weights(l);
    for (int j = 0; j < l; ++j) P[r - 2 * j] = P[r - 2 * j] + Series::monomial(j == 0 ? Rat(1) : w[j], 2 * j);
    P[0] = P[0] - Series::constant(Rat(1));
    auto y = solve_algebraic(P, Rat(1), Parity::even, n);
    std::vector<Rat> out;
    for (int g = 0; g <= gmax; ++g) out.push_back(y.coeff(2 * g));
    return out;
}

inline std::vector<Rat> tau_d_genfunc(int l, int gmax) {
    int r = detail::d_rank(l);
    auto ng = n_series(l, gmax);
    std::vector<Rat> tau;
    for (int g = 0; g <= gmax; ++g) tau.push_back(detail::genfunc_factor(r, g) * ng[g]);
    return tau;
}

inline Rat tau_d_hyper(int l, int g) {
    int r = detail::d_rank(l);
    auto K = detail::partition_sums(g, detail::d_weights(l));
    return detail::hyper_assemble(r, g, K, [](int) { return Rat(1); });
}

inline std::vector<Rat> tau_d_product(int l, int gmax) {
    int r = detail::d_rank(l);
    int n = 2 * gmax + 1;
    auto fp = f_series(Rat(r), Rat(1, 2), n);
    auto fm = f_series(Rat(r), Rat(-1, 2), n);
    std::vector<Rat> tau;
    for (int g = 0; g <= gmax; ++g) {
        Rat c(0);
        for (int a = 0; a <= 2 * g; ++a) {
            Rat b = fm.coeff(2 * g - a);
            if ((2 * g - a) % 2 != 0) b = -b;
            c += fp.coeff(a) * b;
        }
        tau.push_back(detail::genfunc_factor(r, g) * c / detail::product_norm(r, g));
    }
    return tau;
}

// D4 from the Frobenius branches 13/6 and -1/6 (step 7) of the phi_3 ODE.
inline std::vector<Rat> tau_d4_ode(int gmax) {
    const auto& ode = find_ode("d4_phi3");
    int W = gmax / 3 + 1;
    auto up = branch_series(ode, {Rat(13, 6), 7}, W);
    auto lo = branch_series(ode, {Rat(-1, 6), 7}, W);
    std::vector<Rat> tau;
    for (int g = 0; g <= gmax; ++g) {
        int w = g / 3;
        Rat scale = Rat(1) / pow(Rat(216), w);
        if (g % 3 == 0) tau.push_back(lo.coeff(w) * scale);
        else if (g % 3 == 1) tau.push_back(Rat(1, 3) * up.coeff(w) * scale);
        else tau.push_back(Rat(0));
    }
    return tau;
}

// ---- E6 ----

inline std::vector<Rat> tau_e6(int gmax) {
    const auto& ode = find_ode("e6_dual_topological");
    int M = (2 * gmax) / 12 + 2;
    struct Br {
        int ma;
        Rat rho;
        Rat c;
        int offset;
    };
    const Br brs[4] = {{1, Rat(25, 12), Rat(1, 4), 0},
                       {5, Rat(77, 12), Rat(5, 1152), 0},
                       {7, Rat(103, 12), Rat(25, 27648), 0},
                       {11, Rat(-1, 12), Rat(1, 5184), 1}};
    std::vector<Series> series;
    for (auto& b : brs) series.push_back(branch_series(ode, {b.rho, 13}, M));
    std::vector<Rat> tau;
    for (int g = 0; g <= gmax; ++g) {
        if (g % 3 == 2) {
            tau.push_back(Rat(0));
            continue;
        }
        long k = 2L * g - 1;
        bool found = false;
        for (int i = 0; i < 4; ++i) {
            long d = k - brs[i].ma;
            if (((d % 12) + 12) % 12 != 0) continue;
            long m = d >= 0 ? d / 12 : -((-d + 11) / 12);
            Rat scale = pow(Rat(Int(64) * 81), -m);
            tau.push_back(brs[i].c * scale * series[i].coeff(static_cast<int>(m + brs[i].offset)));
            found = true;
            break;
        }
        if (!found) throw std::logic_error("tau_e6: no exponent class for g = " + std::to_string(g));
    }
    return tau;
}

// ---- dispatcher ----

inline bool method_supported(Family fam, int r, Method m) {
    switch (fam) {
        case Family::A:
            if (m == Method::Ode) return false;
            if (m == Method::Recursion) return r == 5;
            return true;
        case Family::D:
            if (m == Method::Recursion) return false;
            if (m == Method::Ode) return r == 6;
            return true;
        case Family::E6: return m == Method::Ode;
    }
    return false;
}

// r is the Coxeter number: A_{r-1}, D_{r/2+1}, E6 with r = 12.
inline std::vector<TauRecord> tau_table(Family fam, int r, int gmax, Method method) {
    if (gmax < 0) throw std::invalid_argument("gmax must be nonnegative");
    if (fam == Family::A) detail::require_a(r);
    if (fam == Family::D && (r % 2 != 0 || r < 6)) throw std::invalid_argument("family D needs even r >= 6");
    if (fam == Family::E6 && r != 12) throw std::invalid_argument("family E6 has r = 12");
    if (!method_supported(fam, r, method))
        throw std::invalid_argument("method " + method_tag(method) + " is not available for this family");
    int l = r / 2 + 1;
    std::vector<Rat> v(static_cast<size_t>(gmax) + 1);
    switch (method) {
        case Method::Closed:
            if (fam == Family::A) {
                auto rows = detail::c_rows(Rat(r), 2 * gmax);
                detail::parallel_for(gmax + 1, [&](int g) {
                    if (frac_int(2L * g - 1, r).A.is_zero()) {
                        v[g] = Rat(0);
                        return;
                    }
                    Rat lam = detail::closed_lambda(r, g);
                    Rat fall = poch_desc(lam, 2L * g), S(0);
                    for (int p = 0; p <= 2 * g; ++p) {
                        if (p > 0) fall *= lam - Rat(2L * g + p - 1);
                        S += fall * rows[2 * g][p];
                    }
                    v[g] = detail::closed_prefactor(r, g) * S;
                });
            } else {
                auto rows = detail::c_rows(Rat(r), 2 * gmax);
                detail::parallel_for(gmax + 1, [&](int g) { v[g] = detail::d_closed_from_rows(r, g, rows); });
            }
            break;
        case Method::Genfunc: v = fam == Family::A ? tau_a_genfunc(r, gmax) : tau_d_genfunc(l, gmax); break;
        case Method::Hyper:
            detail::parallel_for(gmax + 1, [&](int g) { v[g] = fam == Family::A ? tau_a_hyper(r, g) : tau_d_hyper(l, g); });
            break;
        case Method::Product: v = fam == Family::A ? tau_a_product(r, gmax) : tau_d_product(l, gmax); break;
        case Method::Psido:
            detail::parallel_for(gmax + 1, [&](int g) { v[g] = g == 0 ? Rat(1) : tau_from_psido(fam, r, g); });
            break;
        case Method::Recursion: v = a4_recursion_table(gmax); break;
        case Method::Ode: v = fam == Family::E6 ? tau_e6(gmax) : tau_d4_ode(gmax); break;
    }
    std::vector<TauRecord> out;
    for (int g = 0; g <= gmax; ++g) out.push_back({fam, r, g, v[g], method});
    return out;
}

// ---- asymptotics ----

struct AsymptoticPoint {
    double log_prediction;
    double log_actual;
    double ratio;
};

// Logarithm of the asymptotic right-hand side; r is the Coxeter number.
inline double asymptotic_log_rhs(Family fam, int r, int g) {
    const double pi = std::acos(-1.0);
    auto fp = frac_int(2L * g - 1, r);
    if (fp.A.is_zero()) throw std::domain_error("asymptotic_log_rhs: g lies in the vanishing class");
    if (g < 1) throw std::domain_error("asymptotic_log_rhs: g must be positive");
    double A = fp.A.to_double();
    double x = (2.0 * g - 1.0) / r;
    double common = 0.5 * std::log(pi) - std::lgamma(1.0 - A) - std::lgamma(x) - 1.5 * std::log(static_cast<double>(g));
    if (fam == Family::E6) {
        if (g % 3 == 2) throw std::domain_error("asymptotic_log_rhs: g lies in the vanishing class");
        int rho = static_cast<int>(((2L * g - 1) % 12 + 12) % 12);
        double s3 = std::sqrt(3.0);
        double theta = 0;
        switch (rho) {
            case 1: theta = 2.0 * std::pow(3.0, 5.0 / 12) * (1 + s3); break;
            case 5: theta = 4.0 * std::pow(3.0, 0.75); break;
            case 7: theta = std::pow(2.0, 2.5) * std::pow(3.0, 2.0 / 3); break;
            case 11: theta = std::pow(2.0, 2.5) * 3.0 * (1 + s3); break;
            default: throw std::logic_error("asymptotic_log_rhs: bad E6 class");
        }
        double base = std::sqrt(3 + 2 * s3) / (2.0 * std::pow(3.0, 7.0 / 6) * std::pow(13.0, 1.0 / 6));
        return -5.0 / 12 * std::log(13.0) + std::log(theta) + common + g * std::log(base);
    }
    double s = std::sin(pi / r);
    double lr = std::log(static_cast<double>(r)), lr1 = std::log(r + 1.0);
    double v = lr - 0.5 * (r - 2.0) / r * lr1 + common - g * (std::log(4.0) + lr + 2.0 / r * lr1 + 2 * std::log(s));
    if (fam == Family::A && r == 2) v += std::log(0.5);
    if (fam == Family::D) {
        v += std::log(std::cos(pi / r));
        if (r == 6) v += std::log(3.0);
    }
    return v;
}

inline AsymptoticPoint asymptotic_predict(Family fam, int r, int g, const Rat& tau) {
    double lp = asymptotic_log_rhs(fam, r, g);
    double la = tau.log_abs();
    double ratio = tau.sign() > 0 ? std::exp(la - lp) : -std::exp(la - lp);
    return {lp, la, ratio};
}

// ---- r = -1 limits ----

struct BernoulliLimit {
    Rat interpolated;
    Rat target;
    bool consistent;
};

namespace detail {

inline Rat lagrange_eval(const std::vector<Rat>& xs, const std::vector<Rat>& ys, const Rat& x) {
    Rat acc(0);
    for (size_t i = 0; i < xs.size(); ++i) {
        Rat t = ys[i];
        for (size_t j = 0; j < xs.size(); ++j)
            if (j != i) t *= (x - xs[j]) / (xs[i] - xs[j]);
        acc += t;
    }
    return acc;
}

}  // namespace detail

// Interpolates a~_g(r) (A) or n_g(r) (D), of degree <= 2g-1 in r, through 2g points,
// checks one more, evaluates at r = -1.
inline BernoulliLimit bernoulli_limit(Family fam, int g) {
    if (g < 0 || g > 10) throw std::domain_error("bernoulli_limit: g must lie in 0..10");
    if (fam == Family::E6) throw std::domain_error("bernoulli_limit: A and D only");
    std::vector<Rat> xs, ys;
    for (int i = 0; i < std::max(2, 2 * g + 1); ++i) {
        if (fam == Family::A) {
            int r = std::max(2, 2 * g) + i;
            xs.push_back(Rat(r));
            ys.push_back(a_tilde(r, g)[g]);
        } else {
            int l = std::max(4, g + 1) + i;
            xs.push_back(Rat(2 * l - 2));
            ys.push_back(n_series(l, g)[g]);
        }
    }
    std::vector<Rat> fx(xs.begin(), xs.end() - 1), fy(ys.begin(), ys.end() - 1);
    bool ok = detail::lagrange_eval(fx, fy, xs.back()) == ys.back();
    Rat val = detail::lagrange_eval(fx, fy, Rat(-1));
    Rat b = bernoulli(2L * g) / Rat(factorial(2L * g));
    Rat target = fam == Family::A ? b : -(Rat(1) - pow(Rat(2), 1L - 2L * g)) * b;
    return {val, target, ok};
}

// ---- serialization ----

inline std::string records_to_csv(const std::vector<TauRecord>& recs) {
    std::ostringstream os;
    os << "family,r,g,method,value\n";
    for (auto& t : recs) os << family_tag(t.family) << ',' << t.r << ',' << t.g << ',' << method_tag(t.method) << ',' << t.value.str() << '\n';
    return os.str();
}

inline nlohmann::ordered_json record_to_json(const TauRecord& t) {
    return {{"family", family_tag(t.family)}, {"r", t.r}, {"g", t.g}, {"method", method_tag(t.method)}, {"value", t.value.str()}};
}

inline nlohmann::ordered_json records_to_json(const std::vector<TauRecord>& recs, const nlohmann::ordered_json& config) {
    nlohmann::ordered_json j;
    j["meta"] = {{"version", ADETAU_VERSION}, {"config", config}};
    j["records"] = nlohmann::ordered_json::array();
    for (auto& t : recs) j["records"].push_back(record_to_json(t));
    return j;
}

inline TauRecord record_from_fields(const std::string& fam, int r, int g, const std::string& method, const std::string& value) {
    auto f = parse_family(fam);
    auto m = parse_method(method);
    if (!f || !m) throw std::invalid_argument("bad record: family '" + fam + "', method '" + method + "'");
    return {*f, r, g, Rat::parse(value), *m};
}

inline std::vector<TauRecord> records_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "family,r,g,method,value") throw std::invalid_argument("records_from_csv: bad header");
    std::vector<TauRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 5) throw std::invalid_argument("records_from_csv: bad row '" + line + "'");
        out.push_back(record_from_fields(f[0], std::stoi(f[1]), std::stoi(f[2]), f[3], f[4]));
    }
    return out;
}

inline std::vector<TauRecord> records_from_json(const nlohmann::ordered_json& j) {
    std::vector<TauRecord> out;
    for (auto& r : j.at("records"))
        out.push_back(record_from_fields(r.at("family").get<std::string>(), r.at("r").get<int>(), r.at("g").get<int>(),
                                         r.at("method").get<std::string>(), r.at("value").get<std::string>()));
    return out;
}

inline nlohmann::ordered_json series_to_json(const Series& s) {
    nlohmann::ordered_json j;
    j["valuation"] = s.valuation();
    if (s.trunc_order() >= Series::kExact) j["trunc_order"] = nullptr;
    else j["trunc_order"] = s.trunc_order();
    auto arr = nlohmann::ordered_json::array();
    int hi = std::min(s.top(), s.trunc_order());
    for (int n = s.valuation(); n < hi; ++n) arr.push_back(s.coeff(n).str());
    j["coeffs"] = arr;
    return j;
}

}  // namespace adetau

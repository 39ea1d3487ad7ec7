#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <map>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adetau/data_catalogue.hpp"
#include "adetau/scalar.hpp"
#include "adetau/series.hpp"

namespace adetau {

struct OdeTerm {
    int order = 0;
    std::vector<std::pair<int, Int>> coeff;  // (exponent, integer coefficient)
};

// sum_k p_k(x) (d/dx)^k with integer polynomial coefficients.
struct ScalarODE {
    std::string name;
    std::string variable;
    std::vector<OdeTerm> terms;

    int max_order() const {
        int k = 0;
        for (auto& t : terms) k = std::max(k, t.order);
        return k;
    }

    // Minimal e - k over all monomials x^e d^k.
    int delta_min() const {
        int d = INT_MAX;
        for (auto& t : terms)
            for (auto& [e, c] : t.coeff)
                if (c != 0) d = std::min(d, e - t.order);
        return d;
    }
};

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::vector<ScalarODE> parse_ode_catalogue(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<ScalarODE> out;
    for (auto& o : j.at("odes")) {
        ScalarODE ode;
        ode.name = o.at("name").get<std::string>();
        ode.variable = o.at("variable").get<std::string>();
        for (auto& t : o.at("terms")) {
            OdeTerm term;
            term.order = t.at("order").get<int>();
            if (term.order < 0) throw std::invalid_argument("ode catalogue: negative derivative order");
            for (auto& m : t.at("coeff_poly")) term.coeff.emplace_back(m.at(0).get<int>(), Int(m.at(1).get<std::string>()));
            ode.terms.push_back(std::move(term));
        }
        out.push_back(std::move(ode));
    }
    return out;
}

inline const std::vector<ScalarODE>& ode_catalogue() {
    static const std::vector<ScalarODE> cat = parse_ode_catalogue(data::kOdeCatalogueJson);
    return cat;
}

inline const ScalarODE& find_ode(const std::string& name) {
    for (auto& o : ode_catalogue())
        if (o.name == name) return o;
    throw std::out_of_range("no catalogue ODE named " + name);
}

// Coefficients (in rho, increasing degree) of sum over e - k = delta_min of c * rho^(k falling).
inline std::vector<Rat> indicial_polynomial(const ScalarODE& ode) {
    int d = ode.delta_min();
    std::vector<Rat> poly(static_cast<size_t>(ode.max_order()) + 1, Rat(0));
    for (auto& t : ode.terms) {
        for (auto& [e, c] : t.coeff) {
            if (e - t.order != d || c == 0) continue;
            std::vector<Rat> ff{Rat(1)};  // rho(rho-1)...(rho-k+1)
            for (int i = 0; i < t.order; ++i) {
                std::vector<Rat> next(ff.size() + 1, Rat(0));
                for (size_t a = 0; a < ff.size(); ++a) {
                    next[a + 1] += ff[a];
                    next[a] -= Rat(i) * ff[a];
                }
                ff = std::move(next);
            }
            for (size_t a = 0; a < ff.size(); ++a) poly[a] += Rat(c) * ff[a];
        }
    }
    while (!poly.empty() && poly.back().is_zero()) poly.pop_back();
    return poly;
}

namespace detail {

inline Rat eval_poly(const std::vector<Rat>& p, const Rat& x) {
    Rat acc(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

// Divide p by (x - a), assuming a is a root.
inline std::vector<Rat> deflate(const std::vector<Rat>& p, const Rat& a) {
    std::vector<Rat> q(p.size() - 1, Rat(0));
    Rat carry(0);
    for (size_t i = p.size(); i-- > 1;) {
        carry = p[i] + carry * a;
        q[i - 1] = carry;
    }
    return q;
}

// Best rational approximation with denominator at most maxden.
inline Rat rationalize(double x, long maxden) {
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(v);
        long ai = static_cast<long>(a);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > maxden) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = v - a;
        if (std::fabs(frac) < 1e-12) break;
        v = 1.0 / frac;
    }
    return Rat(p1, q1);
}

inline std::vector<std::complex<double>> durand_kerner(const std::vector<Rat>& p) {
    int n = static_cast<int>(p.size()) - 1;
    std::vector<std::complex<double>> a(p.size());
    double lead = p.back().to_double();
    for (size_t i = 0; i < p.size(); ++i) a[i] = p[i].to_double() / lead;
    std::vector<std::complex<double>> z(n);
    std::complex<double> seed(0.4, 0.9);
    for (int i = 0; i < n; ++i) z[i] = std::pow(seed, i) * 3.0;
    for (int it = 0; it < 2000; ++it) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> val = 1.0;
            for (int k = n - 1; k >= 0; --k) val = val * z[i] + a[k];
            std::complex<double> den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            std::complex<double> step = val / den;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

}  // namespace detail

struct IndicialResult {
    std::vector<Rat> roots;  // rational roots with multiplicity, ascending
    int unsolved = 0;        // roots that are not rational
};

// Numeric roots, rationalized, then confirmed exactly by deflation.
inline IndicialResult indicial_roots(const ScalarODE& ode) {
    auto p = indicial_polynomial(ode);
    IndicialResult res;
    if (p.size() <= 1) return res;
    bool progress = true;
    while (p.size() > 1 && progress) {
        progress = false;
        if (p[0].is_zero()) {
            res.roots.push_back(Rat(0));
            p.erase(p.begin());
            progress = true;
            continue;
        }
        for (auto& z : detail::durand_kerner(p)) {
            if (std::fabs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
            Rat cand = detail::rationalize(z.real(), 100000);
            if (!detail::eval_poly(p, cand).is_zero()) continue;
            res.roots.push_back(cand);
            p = detail::deflate(p, cand);
            progress = true;
            break;
        }
    }
    res.unsolved = static_cast<int>(p.size()) - 1;
    std::sort(res.roots.begin(), res.roots.end());
    return res;
}

struct BranchSpec {
    Rat rho;
    int step = 1;
};

// Monic coefficients a_0 = 1, ..., a_N of x^rho sum_n a_n x^{step n} annihilated by ode.
inline Series branch_series(const ScalarODE& ode, const BranchSpec& spec, int N) {
    int d = ode.delta_min();
    struct Mono {
        int order;
        int shift;
        Rat c;
    };
    std::vector<Mono> monos;
    for (auto& t : ode.terms)
        for (auto& [e, c] : t.coeff) {
            if (c == 0) continue;
            int sh = e - t.order - d;
            if (sh % spec.step != 0)
                throw std::domain_error("branch_series: exponent shift " + std::to_string(sh) + " is not a multiple of the step");
            monos.push_back({t.order, sh / spec.step, Rat(c)});
        }
    if (!detail::eval_poly(indicial_polynomial(ode), spec.rho).is_zero())
        throw std::domain_error("branch_series: exponent is not an indicial root");
    std::vector<Rat> a{Rat(1)};
    for (int n = 1; n <= N; ++n) {
        Rat lead(0), rhs(0);
        for (auto& m : monos) {
            int j = n - m.shift;
            if (j < 0) continue;
            Rat v = m.c * poch_desc(spec.rho + Rat(static_cast<long>(spec.step) * j), m.order);
            if (j == n) lead += v;
            else rhs += v * a[j];
        }
        if (lead.is_zero()) throw std::domain_error("branch_series: resonance at n = " + std::to_string(n));
        a.push_back(-rhs / lead);
    }
    return Series(0, std::move(a), N + 1);
}

// Residual Q(phi) for phi a Puiseux series in x^{1/q}.
inline PuiseuxSeries<Rat> apply_ode(const ScalarODE& ode, const PuiseuxSeries<Rat>& phi) {
    const Series& b = phi.body;
    int q = phi.q;
    int N = b.trunc_order();
    if (N >= Series::kExact) throw std::invalid_argument("apply_ode: need an explicit truncation order");
    int d = ode.delta_min();
    int out_trunc = N + q * d;
    Series out = Series::zero(out_trunc);
    std::map<int, Rat> acc;
    for (auto& t : ode.terms)
        for (auto& [e, c] : t.coeff) {
            if (c == 0) continue;
            for (int n = b.valuation(); n < std::min(b.top(), N); ++n) {
                Rat bn = b.coeff(n);
                if (bn.is_zero()) continue;
                int m = n + q * (e - t.order);
                if (m >= out_trunc) continue;
                acc[m] += Rat(c) * poch_desc(Rat(n, q), t.order) * bn;
            }
        }
    for (auto& [m, v] : acc) out.set(m, v);
    return {q, out};
}

// Coefficient polynomials of the four-term A4 recursion, indexed by shift 0, 5, 10, 15.
inline Rat a4_recursion_coeff(int shift, const Rat& g) {
    auto g2 = g * g, g3 = g2 * g, g4 = g3 * g;
    switch (shift) {
        case 0:
            return Rat(Int("256") * Int("81") * Int("762939453125") * Int("31")) * g * (g - Rat(1)) * (g - Rat(2)) *
                   (g - Rat(4));
        case 5:
            return -Rat(Int("48828125")) *
                   (Rat(256 * 81) * g4 - Rat(8192 * 81) * g3 + Rat(16 * 9 * 54331) * g2 - Rat(Int(16 * 9 * 43) * 6329) * g +
                    Rat(Int(35) * 2013229));
        case 10:
            return Rat(4 * 15625) * (Rat(4 * 9 * 5) * g2 - Rat(4 * 27 * 5 * 7) * g + Rat(19739));
        case 15:
            return Rat(-1);
        default:
            throw std::invalid_argument("a4_recursion_coeff: shift must be 0, 5, 10 or 15");
    }
}

struct RecursionCheck {
    bool ok = true;
    int first_violation = -1;
};

// tau indexed from g = 0; tau_g = 0 for g < 0.
inline RecursionCheck recursion_check_a4(const std::vector<Rat>& tau) {
    auto at = [&](int g) { return g < 0 ? Rat(0) : tau[static_cast<size_t>(g)]; };
    for (int g = 0; g < static_cast<int>(tau.size()); ++g) {
        Rat G(g);
        Rat s(0);
        for (int sh : {0, 5, 10, 15}) s += a4_recursion_coeff(sh, G) * at(g - sh);
        if (!s.is_zero()) return {false, g};
    }
    return {};
}

// tau_{A4}(0..gmax) from the recursion seeded with tau_0, tau_1, tau_2, tau_4.
inline std::vector<Rat> a4_recursion_table(int gmax) {
    const Rat seeds[5] = {Rat(1), Rat(1, 6), Rat(11, 3600), Rat(0), Rat(341, 25920000)};
    std::vector<Rat> tau;
    for (int g = 0; g <= gmax; ++g) {
        if (g <= 4 && g != 3) {
            tau.push_back(seeds[g]);
            continue;
        }
        auto at = [&](int h) { return h < 0 ? Rat(0) : tau[static_cast<size_t>(h)]; };
        Rat G(g);
        Rat rest = a4_recursion_coeff(5, G) * at(g - 5) + a4_recursion_coeff(10, G) * at(g - 10) +
                   a4_recursion_coeff(15, G) * at(g - 15);
        tau.push_back(-rest / a4_recursion_coeff(0, G));
    }
    return tau;
}

}  // namespace adetau

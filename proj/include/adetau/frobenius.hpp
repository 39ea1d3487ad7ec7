#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adetau/data_catalogue.hpp"
#include "adetau/invariants.hpp"
#include "adetau/scalar.hpp"
#include "adetau/series.hpp"

namespace adetau {

enum class Coords { Lower, Upper };

struct ThetaMonomial {
    std::vector<int> exp;
    Rat coeff;
};

struct ThetaPoly {
    std::string family;
    int alpha = 0;
    long m = 0;
    Coords coords = Coords::Upper;
    std::vector<ThetaMonomial> monomials;
    std::string note;
};

using Eta = std::vector<std::vector<Rat>>;

struct SpecialPoint {
    std::string family;
    Coords coords = Coords::Lower;
    std::vector<Rat> values;
    Eta eta;
};

struct ThetaFamily {
    std::string name;
    Family family = Family::A;
    int r = 0;
    int rank = 0;
    std::vector<int> exponents;
    SpecialPoint vstar;
    std::vector<ThetaPoly> thetas;
};

namespace detail {

inline Coords parse_coords(const std::string& s) {
    if (s == "lower") return Coords::Lower;
    if (s == "upper") return Coords::Upper;
    throw std::invalid_argument("theta catalogue: bad coords '" + s + "'");
}

inline Rat json_rat(const nlohmann::json& v) {
    return v.is_string() ? Rat::parse(v.get<std::string>()) : Rat(v.get<long>());
}

// Solves eta x = b by Gauss-Jordan elimination.
inline std::vector<Rat> solve_eta(Eta a, std::vector<Rat> b) {
    const size_t n = a.size();
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c].is_zero()) ++piv;
        if (piv == n) throw std::domain_error("pairing matrix is singular");
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c].is_zero()) continue;
            Rat f = a[i][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    for (size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

}  // namespace detail

inline std::map<std::string, ThetaFamily> parse_theta_catalogue(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::map<std::string, ThetaFamily> out;
    for (auto& [name, f] : j.at("families").items()) {
        ThetaFamily tf;
        tf.name = name;
        auto tag = f.at("family").get<std::string>();
        std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) { return std::tolower(c); });
        auto fam = parse_family(tag);
        if (!fam) throw std::invalid_argument("theta catalogue: bad family for " + name);
        tf.family = *fam;
        tf.r = f.at("r").get<int>();
        tf.rank = f.at("rank").get<int>();
        tf.exponents = f.at("exponents").get<std::vector<int>>();
        tf.vstar.family = name;
        tf.vstar.coords = detail::parse_coords(f.at("vstar").at("coords").get<std::string>());
        for (auto& v : f.at("vstar").at("values")) tf.vstar.values.push_back(detail::json_rat(v));
        for (auto& row : f.at("eta")) {
            std::vector<Rat> rr;
            for (auto& v : row) rr.push_back(detail::json_rat(v));
            tf.vstar.eta.push_back(rr);
        }
        for (auto& t : f.at("thetas")) {
            ThetaPoly p;
            p.family = name;
            p.alpha = t.at("alpha").get<int>();
            p.m = t.at("m").get<long>();
            p.coords = detail::parse_coords(t.at("coords").get<std::string>());
            p.note = t.value("note", "");
            for (auto& mo : t.at("monomials"))
                p.monomials.push_back({mo.at("exp").get<std::vector<int>>(), detail::json_rat(mo.at("coeff"))});
            tf.thetas.push_back(std::move(p));
        }
        const size_t n = static_cast<size_t>(tf.rank);
        if (tf.exponents.size() != n || tf.vstar.values.size() != n || tf.vstar.eta.size() != n)
            throw std::invalid_argument("theta catalogue: inconsistent rank for " + name);
        out.emplace(name, std::move(tf));
    }
    return out;
}

inline const std::map<std::string, ThetaFamily>& theta_catalogue() {
    static const auto cat = parse_theta_catalogue(data::kThetaCatalogueJson);
    return cat;
}

inline const ThetaFamily& theta_family(const std::string& name) {
    auto& cat = theta_catalogue();
    auto it = cat.find(name);
    if (it == cat.end()) throw std::invalid_argument("no theta table for family " + name);
    return it->second;
}

// v_alpha = eta_{alpha beta} v^beta
inline std::vector<Rat> lower_index(const Eta& eta, const std::vector<Rat>& upper) {
    if (upper.size() != eta.size()) throw std::invalid_argument("lower_index: dimension mismatch");
    std::vector<Rat> out(eta.size(), Rat(0));
    for (size_t a = 0; a < eta.size(); ++a)
        for (size_t b = 0; b < eta.size(); ++b) out[a] += eta[a][b] * upper[b];
    return out;
}

inline std::vector<Rat> raise_index(const Eta& eta, const std::vector<Rat>& lower) {
    if (lower.size() != eta.size()) throw std::invalid_argument("raise_index: dimension mismatch");
    return detail::solve_eta(eta, lower);
}

inline std::vector<Rat> coords_in(const SpecialPoint& pt, Coords want) {
    if (pt.coords == want) return pt.values;
    return want == Coords::Lower ? lower_index(pt.eta, pt.values) : raise_index(pt.eta, pt.values);
}

// Coordinates must already be in the polynomial's convention.
inline Rat theta_eval(const ThetaPoly& poly, const std::vector<Rat>& v) {
    Rat s(0);
    for (auto& mo : poly.monomials) {
        if (mo.exp.size() != v.size())
            throw std::invalid_argument("theta_eval: " + std::to_string(v.size()) + " coordinates for a monomial in " +
                                        std::to_string(mo.exp.size()) + " variables");
        Rat t = mo.coeff;
        for (size_t i = 0; i < v.size() && !t.is_zero(); ++i) t *= pow(v[i], mo.exp[i]);
        s += t;
    }
    return s;
}

inline Rat theta_eval(const ThetaPoly& poly, const SpecialPoint& pt) { return theta_eval(poly, coords_in(pt, poly.coords)); }

// 2g - 1 = n; nullopt when g is not an integer.
inline std::optional<int> genus_from_degree(long n) {
    if (n % 2 == 0) return std::nullopt;
    return static_cast<int>((n + 1) / 2);
}

struct DualityRow {
    int alpha;
    long m;
    std::optional<int> g;
    Rat theta;
    Rat tau;
    bool equal;
};

namespace detail {

inline std::vector<Rat> family_tau(const ThetaFamily& tf, int gmax) {
    Method method = tf.family == Family::E6 ? Method::Ode : Method::Genfunc;
    std::vector<Rat> out;
    for (auto& rec : tau_table(tf.family, tf.r, gmax, method)) out.push_back(rec.value);
    return out;
}

inline Rat tau_or_zero(const std::vector<Rat>& tau, std::optional<int> g) { return g ? tau.at(static_cast<size_t>(*g)) : Rat(0); }

}  // namespace detail

inline std::vector<DualityRow> duality_report(const std::string& name) {
    const auto& tf = theta_family(name);
    std::vector<std::optional<int>> gs;
    int gmax = 0;
    for (auto& th : tf.thetas) {
        auto g = genus_from_degree(tf.exponents.at(static_cast<size_t>(th.alpha - 1)) + tf.r * th.m);
        if (g) gmax = std::max(gmax, *g);
        gs.push_back(g);
    }
    auto tau = detail::family_tau(tf, gmax);
    std::vector<DualityRow> rows;
    for (size_t i = 0; i < tf.thetas.size(); ++i) {
        const auto& th = tf.thetas[i];
        Rat lhs = theta_eval(th, tf.vstar);
        Rat rhs = detail::tau_or_zero(tau, gs[i]);
        rows.push_back({th.alpha, th.m, gs[i], lhs, rhs, lhs == rhs});
    }
    return rows;
}

struct VstarRow {
    int alpha;
    std::optional<int> g;
    Rat shipped;
    Rat tau;
    bool equal;
};

// v*_alpha against the genus-g invariant with 2g - 1 = m_alpha.
inline std::vector<VstarRow> vstar_report(const std::string& name) {
    const auto& tf = theta_family(name);
    auto lower = coords_in(tf.vstar, Coords::Lower);
    int gmax = 0;
    for (int e : tf.exponents) gmax = std::max(gmax, (e + 1) / 2);
    auto tau = detail::family_tau(tf, gmax);
    std::vector<VstarRow> rows;
    for (int a = 1; a <= tf.rank; ++a) {
        auto g = genus_from_degree(tf.exponents[static_cast<size_t>(a - 1)]);
        Rat t = detail::tau_or_zero(tau, g);
        rows.push_back({a, g, lower[static_cast<size_t>(a - 1)], t, lower[static_cast<size_t>(a - 1)] == t});
    }
    return rows;
}

inline bool vstar_consistency(const std::string& name) {
    for (auto& row : vstar_report(name))
        if (!row.equal) return false;
    return true;
}

// Superpotentials as exact Laurent polynomials in p.
// A: p^r + sum_{b=1}^{r-1} s_b p^{r-1-b}.
inline LaurentSeries<Rat> superpotential_a(int r, const std::vector<Rat>& s) {
    if (r < 2 || static_cast<int>(s.size()) != r - 1) throw std::invalid_argument("superpotential_a: need r - 1 coordinates");
    LaurentSeries<Rat> lam = LaurentSeries<Rat>::monomial(Rat(1), r);
    for (int b = 1; b < r; ++b) lam += LaurentSeries<Rat>::monomial(s[static_cast<size_t>(b - 1)], r - 1 - b);
    return lam.normalized();
}

// D: p^r + sum_{b<l} s_b p^{r-2b} + s_l^2 p^{-2}, r = 2l - 2.
inline LaurentSeries<Rat> superpotential_d(int l, const std::vector<Rat>& s) {
    if (l < 4 || static_cast<int>(s.size()) != l) throw std::invalid_argument("superpotential_d: need l >= 4 coordinates");
    int r = 2 * l - 2;
    LaurentSeries<Rat> lam = LaurentSeries<Rat>::monomial(Rat(1), r);
    for (int b = 1; b < l; ++b) lam += LaurentSeries<Rat>::monomial(s[static_cast<size_t>(b - 1)], r - 2 * b);
    lam += LaurentSeries<Rat>::monomial(s.back() * s.back(), -2);
    return lam.normalized();
}

namespace detail {

inline LaurentSeries<Rat> reflect(const LaurentSeries<Rat>& f) {
    LaurentSeries<Rat> out = LaurentSeries<Rat>::zero();
    for (int e = f.valuation(); e < f.top(); ++e)
        if (!f.coeff(e).is_zero()) out.set(-e, f.coeff(e));
    return out;
}

}  // namespace detail

struct UkResult {
    std::vector<Rat> u_inversion;  // index k = 0..kmax, entry 0 unused
    std::vector<Rat> u_residue;
    std::vector<Rat> v_inversion;  // D only: coefficient of xi^{-m-r/2}, m = 0..kmax
    std::vector<Rat> v_residue;
    bool agree() const { return u_inversion == u_residue && v_inversion == v_residue; }
};

// u_k from lam(p(xi)) = xi^r two ways: series inversion, and
// k u_k = res_{p=inf} lam^{k/r} dp = -[q^{k+1}] (q^r lam)^{k/r}.
// For D also p^-: inversion, and (2j+1) v_{rj} = [p^{-1}] lam^{j+1/2}
// on the branch lam^{1/2} ~ s_l/p.
inline UkResult uk_residues(Family fam, int r, const std::vector<Rat>& s, int kmax) {
    if (kmax < 1) throw std::invalid_argument("uk_residues: kmax >= 1");
    LaurentSeries<Rat> lam;
    if (fam == Family::A)
        lam = superpotential_a(r, s);
    else if (fam == Family::D) {
        if (r % 2 != 0) throw std::invalid_argument("uk_residues: family D needs even r");
        lam = superpotential_d(r / 2 + 1, s);
    } else
        throw std::invalid_argument("uk_residues: families A and D only");

    UkResult res;
    auto lam_q = detail::reflect(lam);
    auto p = invert_superpotential(lam_q, r, kmax);
    auto h = lam_q.shifted(r).truncated(kmax + 2);
    res.u_inversion.assign(static_cast<size_t>(kmax) + 1, Rat(0));
    res.u_residue.assign(static_cast<size_t>(kmax) + 1, Rat(0));
    for (int k = 1; k <= kmax; ++k) {
        res.u_inversion[k] = p.coeff(k);
        auto hk = series_pow_frac(h, Rat(k, r), kmax + 2);
        res.u_residue[k] = -hk.coeff(k + 1) / Rat(k);
    }
    if (fam != Family::D) return res;

    const Rat sl = s.back();
    const int r2 = r / 2;
    res.v_inversion.assign(static_cast<size_t>(kmax) + 1, Rat(0));
    res.v_residue.assign(static_cast<size_t>(kmax) + 1, Rat(0));
    if (sl.is_zero()) return res;
    auto pm = invert_superpotential_neg(lam, r, kmax + r2 + 1);
    Rat sgn(sl.sign());
    for (int m = 0; m <= kmax; ++m) res.v_inversion[m] = sgn * pm.coeff(m + r2);
    // E(p) = p^2 lam / s_l^2
    auto E = ((Rat(1) / (sl * sl)) * lam.shifted(2)).truncated(kmax + 2);
    for (int j = 0; r * j <= kmax; ++j) {
        auto Ej = series_pow_frac(E, Rat(2L * j + 1, 2), 2 * j + 1);
        res.v_residue[static_cast<size_t>(r * j)] = pow(sl, 2L * j + 1) * Ej.coeff(2 * j) / Rat(2L * j + 1);
    }
    return res;
}

// Reduced special point of family A: s_{2i-1} = binom(r, 2i) / (4^i (2i+1)), even slots 0.
inline std::vector<Rat> a_special_point(int r) {
    std::vector<Rat> s(static_cast<size_t>(r - 1), Rat(0));
    for (int i = 1; 2 * i - 1 <= r - 1; ++i)
        s[static_cast<size_t>(2 * i - 2)] = Rat(binom_int(r, 2 * i)) / (pow(Rat(4), i) * Rat(2L * i + 1));
    return s;
}

// (1 - 2g) u_{2g-1} at the reduced special point, g = 1..gmax.
inline std::vector<Rat> a_bridge(int r, int gmax) {
    auto lam_q = detail::reflect(superpotential_a(r, a_special_point(r)));
    auto p = invert_superpotential(lam_q, r, 2 * gmax);
    std::vector<Rat> out(static_cast<size_t>(gmax) + 1, Rat(0));
    for (int g = 1; g <= gmax; ++g) out[g] = Rat(1L - 2L * g) * p.coeff(2 * g - 1);
    return out;
}

// E6 superpotential (Eguchi-Yang form) at v*, where t_3 = t_7 = 0 keeps
// everything inside Q(sqrt 3). Returned in q = 1/p, known below n.
inline LaurentSeries<QuadElem> e6_superpotential_at_vstar(int n) {
    using Q = QuadElem;
    using LS = LaurentSeries<Q>;
    auto q = [](long a, long b, long c, long d) { return Q(Rat(a, b), Rat(c, d)); };
    auto pw = [](Q x, int k) {
        Q y(1);
        for (int i = 0; i < k; ++i) y *= x;
        return y;
    };
    const Q s3(Rat(0), Rat(1));
    const auto& vs = theta_family("E6").vstar;
    auto up = coords_in(vs, Coords::Upper);
    Q t0 = Q(up[0]) / (Q(8) * s3), t4 = Q(up[2]) / (Q(2) * (s3 - Q(1)));
    Q t6 = -Q(up[3]) / (s3 - Q(1)), t10 = -Q(2) * s3 * Q(up[5]);
    if (!up[1].is_zero() || !up[4].is_zero()) throw std::logic_error("E6 v* must have v^2 = v^5 = 0");

    std::map<int, Q> Q1, P1, P2;
    Q1[15] = Q(270);
    Q1[13] = q(171, 1, 57, 1) * t10;
    Q1[11] = q(54, 1, 27, 1) * pw(t10, 2);
    Q1[9] = q(35, 4, 175, 36) * pw(t10, 3) + q(144, 1, 72, 1) * t6;
    Q1[7] = q(225, 4, 125, 4) * t6 * t10 + q(345, 384, 35, 96) * pw(t10, 4) + q(135, 1, 81, 1) * t4;
    Q1[5] = q(36, 1, 21, 1) * t4 * t10 + q(11, 768, 19, 2304) * pw(t10, 5) + q(21, 4, 3, 1) * t6 * pw(t10, 2);
    P1[10] = Q(78);
    P1[8] = q(30, 1, 10, 1) * t10;
    P1[6] = q(14, 3, 7, 3) * pw(t10, 2);
    P1[4] = q(1, 4, 5, 36) * pw(t10, 3) + q(16, 1, 8, 1) * t6;
    P1[2] = q(5, 1, 3, 1) * t4 + q(7, 3456, 1, 864) * pw(t10, 4) + q(3, 4, 5, 12) * t6 * t10;
    P2[10] = Q(12);
    P2[8] = q(6, 1, 2, 1) * t10;
    P2[6] = q(4, 3, 2, 3) * pw(t10, 2);
    P2[4] = q(8, 1, 4, 1) * t6 + q(1, 8, 5, 72) * pw(t10, 3);
    P2[2] = q(10, 1, 6, 1) * t4 + q(7, 1728, 1, 432) * pw(t10, 4) + q(3, 2, 5, 6) * t6 * t10;
    Q u0 = -q(270, 1, 156, 1) * t0 - q(19, 16, 11, 16) * t4 * pw(t10, 2) - q(33, 576, 19, 576) * t6 * pw(t10, 3) -
           q(21, 4, 3, 1) * t6 * t6;

    auto in_q = [](const std::map<int, Q>& poly) {
        LS out = LS::zero();
        for (auto& [d, c] : poly) out.set(-d, c);
        return out;
    };
    const int N = n + 15;
    // sqrt(P2) = 2 sqrt3 q^{-5} (q^10 P2 / 12)^{1/2}
    auto unit = ((Q(1) / Q(12)) * in_q(P2).shifted(10)).truncated(N);
    auto root = (Q(2) * s3) * series_pow_frac(unit, Rat(1, 2), N).shifted(-5);
    auto num = in_q(Q1) + LS::mul(in_q(P1), root, N - 15);
    auto lam = (Q(1) / q(270, 1, 156, 1)) * (LS::constant(-u0) + num.shifted(3));
    return lam.truncated(n);
}

inline nlohmann::ordered_json duality_to_json(const std::vector<DualityRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (auto& row : rows)
        arr.push_back({{"alpha", row.alpha},
                       {"m", row.m},
                       {"g", row.g ? nlohmann::ordered_json(*row.g) : nlohmann::ordered_json(nullptr)},
                       {"theta", row.theta.str()},
                       {"tau", row.tau.str()},
                       {"equal", row.equal}});
    return arr;
}

}  // namespace adetau

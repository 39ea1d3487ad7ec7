#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "adetau/frobenius.hpp"
#include "adetau/integrality.hpp"
#include "adetau/invariants.hpp"
#include "adetau/kernels.hpp"
#include "adetau/oderec.hpp"
#include "adetau/psido.hpp"

namespace adetau {

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;

    bool pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
    const Check* first_failure() const {
        for (auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
    void add(std::string name, bool ok, std::string detail = {}) { checks.push_back({std::move(name), ok, std::move(detail)}); }
    // Records one check for a batch; detail holds the first counterexample.
    void add_first(std::string name, const std::string& counterexample) {
        add(std::move(name), counterexample.empty(), counterexample);
    }
    void merge(const SuiteReport& o) {
        for (auto& c : o.checks) checks.push_back(c);
    }
};

namespace detail {

inline Rat sample_rat(std::mt19937_64& rng, long num_range = 40, long den_max = 12) {
    std::uniform_int_distribution<long> n(-num_range, num_range), d(1, den_max);
    return Rat(n(rng), d(rng));
}

// r avoiding the poles of the kernels at 0, -1, -1/2.
inline Rat sample_kernel_r(std::mt19937_64& rng) {
    Rat r;
    do r = sample_rat(rng, 30, 7);
    while (r.is_zero() || r == Rat(-1) || r == Rat(-1, 2));
    return r;
}

template <class... Args>
std::string describe(const Args&... args) {
    std::ostringstream os;
    ((os << args << ' '), ...);
    std::string s = os.str();
    if (!s.empty()) s.pop_back();
    return s;
}

}  // namespace detail

inline SuiteReport verify_kernels(unsigned long seed = 20240611) {
    SuiteReport rep{"kernels", {}};
    std::mt19937_64 rng(seed);
    using detail::describe;

    {
        const int n = 12;
        std::string bad1, bad2;
        for (int t = 0; t < 10 && bad1.empty() && bad2.empty(); ++t) {
            Rat r = detail::sample_kernel_r(rng), j = detail::sample_rat(rng);
            auto fj = f_series(r, j, n + 1);
            auto fj1 = f_series(r, j + Rat(1), n);
            auto rhs1 = (fj + Series::mul(Series::monomial(Rat(1), 1), fj, n) * ((r - Rat(1)) / Rat(2) - j) +
                         Series::mul(Series::monomial(r + Rat(1), 2), fj.derivative(), n))
                            .truncated(n);
            auto rhs2 = fj.truncated(n) - Series::mul(Series::monomial(r * j, 1), f_series(r, j - Rat(1), n), n);
            auto fjr = f_series(r, j + r, n);
            for (int k = 0; k < n; ++k) {
                if (bad1.empty() && fj1.coeff(k) != rhs1.coeff(k)) bad1 = describe("r =", r, "j =", j, "k =", k);
                if (bad2.empty() && fjr.coeff(k) != rhs2.coeff(k)) bad2 = describe("r =", r, "j =", j, "k =", k);
            }
        }
        rep.add_first("fid1: f_{j+1} from f_j, 10 points, order 12", bad1);
        rep.add_first("fid2: f_{j+r} = f_j - r j T f_{j-1}, 10 points, order 12", bad2);
    }
    {
        std::string bad1, bad2;
        for (int ri = 2; ri <= 8; ++ri) {
            Rat r(ri), i = detail::sample_rat(rng), j = detail::sample_rat(rng);
            for (int n = 1; n <= 10; ++n) {
                if (bad1.empty() && Ctilde(r, i + Rat(1), j, n) - Ctilde(r, i, j + Rat(1), n) != Rat(2) * Ctilde(r, i, j, n - 1))
                    bad1 = describe("r =", r, "i =", i, "j =", j, "n =", n);
                if (bad2.empty() && Ctilde(r, i + r + Rat(1), j, n) - Ctilde(r, i, j + r + Rat(1), n) !=
                                        Rat(2) * (r + Rat(1)) * Ctilde(r, i, j, n - 1))
                    bad2 = describe("r =", r, "i =", i, "j =", j, "n =", n);
            }
        }
        rep.add_first("tcid1: first Ctilde shift relation, r = 2..8, n <= 10", bad1);
        rep.add_first("tcid2: second Ctilde shift relation, r = 2..8, n <= 10", bad2);
    }
    {
        const int n = 10;
        std::vector<std::tuple<Rat, Rat, Rat>> pts;
        for (int t = 0; t < 9; ++t) pts.emplace_back(detail::sample_kernel_r(rng), detail::sample_rat(rng), detail::sample_rat(rng));
        pts.emplace_back(Rat(6), Rat(1, 2), Rat(-1, 2));
        std::string bad;
        for (auto& [r, i, j] : pts) {
            auto fi = f_series(r, i, n + 1), fj = f_series(r, j, n + 1);
            for (int k = 0; k <= n && bad.empty(); ++k) {
                Rat lhs(0);
                for (int a = 0; a <= k; ++a) lhs += fi.coeff(a) * fj.coeff(k - a) * detail::sign_pow(k - a);
                Rat rhs = poch_asc(Rat(1) + (Rat(k) - i - j - Rat(1)) / r, k) * Ctilde(r, i, j, k) * pow(r / Rat(2), k);
                if (lhs != rhs) bad = describe("r =", r, "i =", i, "j =", j, "n =", k);
            }
        }
        rep.add_first("product identity f_i(T) f_j(-T), 10 points, order 10", bad);
    }
    {
        std::string bad;
        int checked = 0;
        while (checked < 10 && bad.empty()) {
            Rat r = detail::sample_kernel_r(rng), j = detail::sample_rat(rng);
            if (r == Rat(-2)) continue;
            Rat r2 = -r / (r + Rat(1));
            if (r2.is_zero() || r2 == Rat(-1) || r2 == Rat(-1, 2)) continue;
            for (int n = 0; n <= 8 && bad.empty(); ++n) {
                Rat a = C_coeff(r, j, n);
                if (a != detail::sign_pow(n) * C_coeff(-r - Rat(1), Rat(n - 3, 2) - j, n) ||
                    a != pow(r + Rat(1), n) * C_coeff(r2, (j - r) / (r + Rat(1)), n))
                    bad = describe("r =", r, "j =", j, "n =", n);
            }
            ++checked;
        }
        rep.add_first("S3 symmetry of C_n, 10 points, n <= 8", bad);
    }
    {
        std::string bad;
        for (int t = 0; t < 5 && bad.empty(); ++t) {
            Rat r = detail::sample_rat(rng);
            for (long j = 1; j <= 12 && bad.empty(); ++j)
                for (long p = 1; p <= j; ++p)
                    if (Rat(p + j) * c_poly(p, j, r) !=
                        (r * Rat(p) - Rat(j) + Rat(1)) * c_poly(p, j - 1, r) + r * c_poly(p - 1, j - 1, r)) {
                        bad = describe("r =", r, "p =", p, "j =", j);
                        break;
                    }
        }
        rep.add_first("c recursion (p+j)c_{p,j}, p <= j <= 12, 5 values of r", bad);
    }
    return rep;
}

namespace detail {

inline std::vector<Rat> values_of(const std::vector<TauRecord>& recs) {
    std::vector<Rat> v;
    for (auto& t : recs) v.push_back(t.value);
    return v;
}

inline std::string first_mismatch(const std::vector<Rat>& a, const std::vector<Rat>& b, const std::string& what) {
    for (size_t g = 0; g < std::min(a.size(), b.size()); ++g)
        if (a[g] != b[g]) return describe(what, "g =", g, ":", a[g], "vs", b[g]);
    if (a.size() != b.size()) return describe(what, "length", a.size(), "vs", b.size());
    return {};
}

}  // namespace detail

inline SuiteReport verify_psido_oracle() {
    SuiteReport rep{"psido-oracle", {}};
    auto run = [&](Family fam, int r, int gmax, const std::string& label) {
        auto ref = detail::values_of(tau_table(fam, r, gmax, Method::Genfunc));
        auto ps = detail::values_of(tau_table(fam, r, gmax, Method::Psido));
        rep.add_first("psido vs genfunc " + label + " g <= " + std::to_string(gmax), detail::first_mismatch(ps, ref, label));
    };
    for (int r = 2; r <= 5; ++r) run(Family::A, r, 3, "A r=" + std::to_string(r));
    run(Family::D, 6, 2, "D l=4");
    {
        std::string bad;
        for (int r : {3, 5})
            for (int i = 0; i <= 4; ++i) {
                auto d = pairing_defect(r, Rat(r), i, 8);
                for (int M = 0; M < 8 && bad.empty(); ++M)
                    if (!d.coeff(M).is_zero()) bad = detail::describe("r =", r, "i =", i, "order", M, ":", d.coeff(M));
            }
        rep.add_first("pairing defect vanishes to order 8, i <= 4, r in {3,5}", bad);
    }
    {
        auto h = h_series_from_f(3, Rat(3), 12);
        auto z = psido_residues_at_zero(Family::A, 3, Rat(3), 11);
        std::string bad = h[0] == Rat(1) ? "" : "H_0 != 1";
        for (int k = 1; k <= 12 && bad.empty(); ++k)
            if (h[k] != detail::sign_pow(k) * z[k - 1]) bad = detail::describe("k =", k, ":", h[k], "vs", detail::sign_pow(k) * z[k - 1]);
        rep.add_first("H-series equals signed residues to 12 orders, r = 3", bad);
    }
    return rep;
}

struct CrossMethodOptions {
    int gmax = 100;
    std::vector<int> a_r = {2, 3, 4, 5, 6, 7, 8};
    std::vector<int> d_l = {4, 5, 6};
    int a4_recursion_gmax = 300;
};

inline SuiteReport verify_cross_method(const CrossMethodOptions& opt = {}) {
    SuiteReport rep{"cross-method", {}};
    auto family_check = [&](Family fam, int r, const std::string& label) {
        auto ref = detail::values_of(tau_table(fam, r, opt.gmax, Method::Genfunc));
        for (Method m : {Method::Closed, Method::Hyper, Method::Product, Method::Recursion, Method::Ode}) {
            if (!method_supported(fam, r, m)) continue;
            auto v = detail::values_of(tau_table(fam, r, opt.gmax, m));
            rep.add_first(label + " " + method_tag(m) + " = genfunc, g <= " + std::to_string(opt.gmax),
                          detail::first_mismatch(v, ref, label + " " + method_tag(m)));
        }
    };
    for (int r : opt.a_r) family_check(Family::A, r, "A r=" + std::to_string(r));
    for (int l : opt.d_l) family_check(Family::D, 2 * l - 2, "D l=" + std::to_string(l));
    if (opt.a4_recursion_gmax > 0) {
        auto rec = detail::values_of(tau_table(Family::A, 5, opt.a4_recursion_gmax, Method::Recursion));
        auto cl = detail::values_of(tau_table(Family::A, 5, opt.a4_recursion_gmax, Method::Closed));
        rep.add_first("A4 recursion = closed, g <= " + std::to_string(opt.a4_recursion_gmax),
                      detail::first_mismatch(rec, cl, "A4 recursion/closed"));
    }
    return rep;
}

inline SuiteReport verify_integrality(int gmax = 300, int cg_gmax = 200) {
    SuiteReport rep{"integrality", {}};
    auto tau = a4_recursion_table(gmax);
    std::string bad_abc, bad_shift;
    for (int g = 0; g <= gmax; ++g) {
        auto r = normalize_abc(g, tau[g]);
        for (auto* q : {&r.a, &r.b, &r.c})
            if (bad_abc.empty() && !in_ring_Z_inv(*q, {2, 3, 5})) bad_abc = detail::describe("g =", g, ":", *q);
        if (g >= 4 && bad_shift.empty() && !in_ring_Z_inv(r.a / Rat(g - 3), {2, 3, 5}))
            bad_shift = detail::describe("g =", g, ":", r.a / Rat(g - 3));
    }
    rep.add_first("a_g, b_g, c_g in Z[1/30], g <= " + std::to_string(gmax), bad_abc);
    rep.add_first("a_g/(g-3) in Z[1/30], 4 <= g <= " + std::to_string(gmax), bad_shift);
    std::string bad_cs;
    for (int g = 0; g <= cg_gmax && bad_cs.empty(); ++g)
        for (int s = 0; 2 * s <= g; ++s)
            if (!in_ring_Z_inv(cg_summand(g, s), {5})) {
                bad_cs = detail::describe("g =", g, "s =", s, ":", cg_summand(g, s));
                break;
            }
    rep.add_first("c_g^[s] in Z[1/5], g <= " + std::to_string(cg_gmax), bad_cs);
    return rep;
}

inline SuiteReport verify_duality(unsigned long seed = 20240611) {
    SuiteReport rep{"duality", {}};
    for (const char* fam : {"A1", "A2", "A4", "D4", "E6"}) {
        std::string bad;
        for (auto& row : duality_report(fam))
            if (!row.equal) {
                bad = detail::describe("alpha =", row.alpha, "m =", row.m, ": theta", row.theta, "tau", row.tau);
                break;
            }
        rep.add_first(std::string(fam) + " theta(v*) = tau for every catalogue row", bad);
        std::string badv;
        for (auto& row : vstar_report(fam))
            if (!row.equal) {
                badv = detail::describe("alpha =", row.alpha, ":", row.shipped, "vs", row.tau);
                break;
            }
        rep.add_first(std::string(fam) + " v* = one-point invariants", badv);
    }
    std::mt19937_64 rng(seed);
    auto routes = [&](Family fam, int r, size_t dim, const std::string& label) {
        std::string bad;
        for (int t = 0; t < 10 && bad.empty(); ++t) {
            std::vector<Rat> s;
            for (size_t i = 0; i < dim; ++i) s.push_back(detail::sample_rat(rng));
            auto res = uk_residues(fam, r, s, 15);
            if (!res.agree()) bad = label + " point " + std::to_string(t);
        }
        rep.add_first("u_k inversion = residue, " + label + ", 10 points, k <= 15", bad);
    };
    for (int r = 2; r <= 5; ++r) routes(Family::A, r, static_cast<size_t>(r - 1), "A r=" + std::to_string(r));
    routes(Family::D, 6, 4, "D l=4");
    routes(Family::D, 8, 5, "D l=5");
    return rep;
}

struct AsymptoticSample {
    int g;
    double ratio;
};

namespace detail {

// Largest g <= g0 with a nonzero invariant and a defined prediction.
inline int admissible_g(Family fam, int r, int g0, const std::vector<Rat>& tau) {
    for (int g = g0; g > 1; --g) {
        if (tau[static_cast<size_t>(g)].is_zero()) continue;
        try {
            asymptotic_log_rhs(fam, r, g);
            return g;
        } catch (const std::domain_error&) {
        }
    }
    throw std::domain_error("no admissible genus");
}

}  // namespace detail

struct AsymptoticCase {
    std::string label;
    std::vector<AsymptoticSample> samples;
};

inline AsymptoticCase asymptotic_case(Family fam, int r, int gtop, Method method) {
    AsymptoticCase c;
    c.label = family_tag(fam) + " r=" + std::to_string(r);
    auto tau = detail::values_of(tau_table(fam, r, gtop, method));
    for (int g0 : {gtop / 2, (3 * gtop) / 4, gtop}) {
        int g = detail::admissible_g(fam, r, g0, tau);
        c.samples.push_back({g, asymptotic_predict(fam, r, g, tau[static_cast<size_t>(g)]).ratio});
    }
    return c;
}

inline SuiteReport verify_asymptotics(double tol = 0.05) {
    SuiteReport rep{"asymptotics", {}};
    auto judge = [&](const AsymptoticCase& c) {
        auto& last = c.samples.back();
        auto& prev = c.samples[c.samples.size() - 2];
        double e1 = std::fabs(last.ratio - 1), e0 = std::fabs(prev.ratio - 1);
        rep.add(c.label + " |ratio - 1| < " + detail::describe(tol) + " at g = " + std::to_string(last.g), e1 < tol,
                detail::describe("ratio", last.ratio));
        rep.add(c.label + " error decreases from g = " + std::to_string(prev.g) + " to " + std::to_string(last.g), e1 < e0,
                detail::describe(e0, "->", e1));
    };
    judge(asymptotic_case(Family::A, 5, 500, Method::Recursion));
    judge(asymptotic_case(Family::D, 6, 300, Method::Genfunc));
    judge(asymptotic_case(Family::E6, 12, 300, Method::Ode));
    {
        auto tau = detail::values_of(tau_table(Family::A, 2, 60, Method::Genfunc));
        std::string bad;
        for (int g = 0; g <= 60 && bad.empty(); ++g)
            if (tau[g] != Rat(1) / (pow(Rat(24), g) * Rat(factorial(g)))) bad = detail::describe("g =", g, ":", tau[g]);
        rep.add_first("A1 tau_g = 1/(24^g g!), g <= 60", bad);
        auto a1 = asymptotic_case(Family::A, 2, 60, Method::Genfunc);
        rep.add("A1 |ratio - 1| < " + detail::describe(tol) + " at g = 60", std::fabs(a1.samples.back().ratio - 1) < tol,
                detail::describe("ratio", a1.samples.back().ratio));
    }
    return rep;
}

inline SuiteReport verify_arrangement() {
    SuiteReport rep{"arrangement", {}};
    for (int j = 1; j <= 4; ++j) {
        auto res = arrangement_analyze(f_spec(j));
        std::set<Int> vals;
        for (auto& c : res.cells) vals.insert(c.value);
        std::string name = "f" + std::to_string(j);
        rep.add(name + " min = 0", res.min == 0, detail::describe("min", res.min, "cells", res.cells.size()));
        if (j <= 2) {
            bool sub = true;
            for (auto& v : vals) sub = sub && (v == 0 || v == 1 || v == 2);
            rep.add(name + " values in {0,1,2}", sub, detail::describe("max", res.max));
        }
    }
    for (int j = 1; j <= 4; ++j) {
        auto res = arrangement_analyze(g_spec(j));
        rep.add("g" + std::to_string(j) + " min = 0", res.min == 0, detail::describe("min", res.min, "cells", res.cells.size()));
    }
    return rep;
}

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {"kernels",     "psido-oracle", "cross-method", "integrality",
                                                   "duality",     "asymptotics",  "arrangement"};
    return names;
}

}  // namespace adetau

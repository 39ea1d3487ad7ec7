#include <gtest/gtest.h>

#include <map>

#include "adetau/oderec.hpp"

using namespace adetau;

namespace {

using Poly = std::map<int, Int>;

Poly scaled(const Int& s, int shift, std::initializer_list<std::pair<int, const char*>> p) {
    Poly out;
    for (auto& [e, c] : p) out[e + shift] = s * Int(c);
    return out;
}

Poly stored(const ScalarODE& ode, int order) {
    for (auto& t : ode.terms)
        if (t.order == order) {
            Poly out;
            for (auto& [e, c] : t.coeff) out[e] = c;
            return out;
        }
    return {};
}

Int ipow(long b, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), e);
    return r;
}

const std::vector<Rat> kA4Table = {
    Rat(1), Rat(1, 6), Rat(11, 3600), Rat(0), Rat(341, 25920000), Rat(161, 777600000), Rat(3397, 93312000000),
    Rat(Int(3421), ipow(2, 13) * ipow(3, 8) * ipow(5, 7)), Rat(0),
    Rat(Int(1670581), ipow(2, 20) * ipow(3, 10) * ipow(5, 9) * 7), Rat(Int(26605753), ipow(2, 23) * ipow(3, 12) * ipow(5, 12))};

}  // namespace

TEST(Catalogue, ChecksumIsPinned) {
    EXPECT_EQ(fnv1a64(data::kOdeCatalogueJson), 13337856351315083483ULL);
    EXPECT_EQ(ode_catalogue().size(), 3u);
    EXPECT_THROW(find_ode("b3"), std::out_of_range);
}

TEST(Catalogue, A4MatchesFactoredDisplay) {
    const auto& ode = find_ode("a4_dual_topological");
    Int c4 = ipow(2, 8) * ipow(3, 4) * ipow(5, 15);
    EXPECT_EQ(stored(ode, 4), (Poly{{4, c4}, {3, -c4 * ipow(5, 6) * 31}}));
    Int c3 = ipow(2, 8) * ipow(3, 4) * ipow(5, 14);
    EXPECT_EQ(stored(ode, 3), (Poly{{3, c3 * 18}, {2, -c3 * ipow(5, 6) * 23 * 31}}));
    Int c2 = -ipow(2, 4) * ipow(3, 2) * ipow(5, 9);
    EXPECT_EQ(stored(ode, 2), (Poly{{3, c2}, {2, -c2 * ipow(5, 4) * 6091}, {1, c2 * ipow(2, 6) * ipow(3, 3) * ipow(5, 10) * 7 * 31}}));
    Int c1 = -ipow(2, 5) * ipow(3, 2) * ipow(5, 8);
    EXPECT_EQ(stored(ode, 1), (Poly{{2, c1 * 2}, {1, -c1 * ipow(5, 4) * 3209}, {0, c1 * ipow(2, 5) * ipow(3, 3) * ipow(5, 10) * 31}}));
    EXPECT_EQ(stored(ode, 0), (Poly{{2, Int(1)}, {1, Int(4) * ipow(5, 6) * 61}, {0, ipow(5, 13) * 7 * 23 * 31}}));
}

TEST(Catalogue, D4AndE6MatchDisplay) {
    const auto& d4 = find_ode("d4_phi3");
    EXPECT_EQ(stored(d4, 2), (Poly{{2, Int(108)}}));
    EXPECT_EQ(stored(d4, 1), (Poly{{8, Int(-104)}, {1, Int(-108)}}));
    EXPECT_EQ(stored(d4, 0), (Poly{{14, Int(-4)}, {7, Int(-260)}, {0, Int(-39)}}));
    const auto& e6 = find_ode("e6_dual_topological");
    EXPECT_EQ(stored(e6, 4), scaled(Int(2985984), 4, {{39, "37"}, {26, "-2775"}, {13, "-36960"}, {0, "11520"}}));
    EXPECT_EQ(stored(e6, 3), scaled(Int(-466560), 3,
                                    {{52, "2331"}, {39, "-162985"}, {26, "-2985600"}, {13, "-4951296"}, {0, "811008"}}));
    EXPECT_EQ(stored(e6, 2), scaled(Int(-27), 2,
                                    {{65, "6545189"}, {52, "-1276342935"}, {39, "10115971680"}, {26, "-127523831040"},
                                     {13, "860446310400"}, {0, "-52110950400"}}));
    EXPECT_EQ(stored(e6, 1), scaled(Int(-27), 1,
                                    {{78, "23310"}, {65, "-8293439"}, {52, "-3559160940"}, {39, "-153887586840"},
                                     {26, "1228034776320"}, {13, "236111616000"}, {0, "49235558400"}}));
    EXPECT_EQ(stored(e6, 0), scaled(Int(1), 0,
                                    {{91, "37"}, {78, "-3464310"}, {65, "2278737540"}, {52, "114309996390"},
                                     {39, "10889113435200"}, {26, "-60840963615600"}, {13, "-15770999462400"},
                                     {0, "-328914432000"}}));
}

TEST(Indicial, CatalogueRoots) {
    auto a4 = indicial_roots(find_ode("a4_dual_topological"));
    EXPECT_EQ(a4.unsolved, 0);
    EXPECT_EQ(a4.roots, (std::vector<Rat>{Rat(0), Rat(1, 5), Rat(2, 5), Rat(4, 5)}));
    auto d4 = indicial_roots(find_ode("d4_phi3"));
    EXPECT_EQ(d4.roots, (std::vector<Rat>{Rat(-1, 6), Rat(13, 6)}));
    auto e6 = indicial_roots(find_ode("e6_dual_topological"));
    EXPECT_EQ(e6.unsolved, 0);
    EXPECT_EQ(e6.roots, (std::vector<Rat>{Rat(-1, 12), Rat(25, 12), Rat(77, 12), Rat(103, 12)}));
    // phi_{2;6} and phi_{5;6} vanish: their exponents are not roots.
    for (int m : {4, 8}) {
        Rat rho = Rat(1) + Rat(13 * m, 12);
        EXPECT_EQ(std::count(e6.roots.begin(), e6.roots.end(), rho), 0);
        EXPECT_EQ(std::count(e6.roots.begin(), e6.roots.end(), rho - Rat(13)), 0);
    }
}

TEST(Indicial, IrrationalRootsAreReportedUnsolved) {
    ScalarODE ode{"t", "x", {{2, {{2, Int(1)}}}, {0, {{0, Int(-2)}}}}};  // rho(rho-1) - 2 has roots 2, -1
    auto r = indicial_roots(ode);
    EXPECT_EQ(r.roots, (std::vector<Rat>{Rat(-1), Rat(2)}));
    ScalarODE irr{"t", "x", {{2, {{2, Int(1)}}}, {1, {{1, Int(1)}}}, {0, {{0, Int(-2)}}}}};  // rho^2 - 2
    auto s = indicial_roots(irr);
    EXPECT_TRUE(s.roots.empty());
    EXPECT_EQ(s.unsolved, 2);
}

TEST(Branch, E6DisplayedCoefficients) {
    const auto& e6 = find_ode("e6_dual_topological");
    auto f1 = branch_series(e6, {Rat(25, 12), 13}, 3);
    EXPECT_EQ(f1.coeff(1), Rat(4235, 512 * 3 * 13));
    EXPECT_EQ(f1.coeff(2), Rat(Int(23102233), ipow(2, 18) * 9 * 169));
    EXPECT_EQ(f1.coeff(3), Rat(Int("381109489145"), ipow(2, 29) * 27 * 2197));
    auto f3 = branch_series(e6, {Rat(77, 12), 13}, 3);
    EXPECT_EQ(f3.coeff(1), Rat(4613, 1024 * 13));
    EXPECT_EQ(f3.coeff(2), Rat(Int(340813583), ipow(2, 19) * 9 * 5 * 169));
    EXPECT_EQ(f3.coeff(3), Rat(Int("1468738987769"), ipow(2, 28) * 9 * 2197 * 17));
    auto f4 = branch_series(e6, {Rat(103, 12), 13}, 3);
    EXPECT_EQ(f4.coeff(1), Rat(34829, 256 * 5 * 7 * 13));
    EXPECT_EQ(f4.coeff(2), Rat(Int(112497481), ipow(2, 20) * 9 * 169));
    EXPECT_EQ(f4.coeff(3), Rat(Int("45611422760339"), ipow(2, 28) * 9 * 5 * 7 * 2197 * 19));
    auto f6 = branch_series(e6, {Rat(-1, 12), 13}, 3);
    EXPECT_EQ(f6.coeff(1), Rat(435, 256 * 13));
    EXPECT_EQ(f6.coeff(2), Rat(Int(330276383), ipow(2, 19) * 9 * 11 * 169));
    EXPECT_EQ(f6.coeff(3), Rat(Int("7178883185"), ipow(2, 27) * 3 * 2197));
}

TEST(Branch, Errors) {
    const auto& e6 = find_ode("e6_dual_topological");
    EXPECT_THROW(branch_series(e6, {Rat(25, 12), 5}, 3), std::domain_error);
    EXPECT_THROW(branch_series(e6, {Rat(1, 12), 13}, 3), std::domain_error);
    // rho(rho-1) - 2: the branch at -1 resonates with the root 2 at n = 3.
    ScalarODE res{"t", "x", {{2, {{2, Int(1)}, {3, Int(1)}}}, {0, {{0, Int(-2)}}}}};
    EXPECT_THROW(branch_series(res, {Rat(-1), 1}, 5), std::domain_error);
}

TEST(Branch, ReSubstitutionAnnihilatesEveryCatalogueBranch) {
    struct Case {
        const char* name;
        int q;
        int step;
    };
    for (auto [name, q, step] : {Case{"a4_dual_topological", 5, 1}, Case{"d4_phi3", 6, 7}, Case{"e6_dual_topological", 12, 13}}) {
        const auto& ode = find_ode(name);
        for (const Rat& rho : indicial_roots(ode).roots) {
            int N = 12;
            auto a = branch_series(ode, {rho, step}, N);
            Series body = Series::zero(0);
            int base = static_cast<int>((rho * Rat(q)).num().get_si());
            std::vector<Rat> c;
            for (int n = 0; n <= N; ++n) {
                c.push_back(a.coeff(n));
                for (int z = 1; z < step * q && n < N; ++z) c.push_back(Rat(0));
            }
            PuiseuxSeries<Rat> phi{q, Series(base, c, base + step * q * N + 1)};
            auto res = apply_ode(ode, phi);
            for (int k = res.body.valuation(); k < res.body.trunc_order(); ++k)
                ASSERT_TRUE(res.body.coeff(k).is_zero()) << name << " rho=" << rho << " k=" << k;
            EXPECT_GT(res.body.trunc_order(), base);
        }
    }
}

TEST(ApplyOde, ZeroSeriesGivesZero) {
    PuiseuxSeries<Rat> z{5, Series::zero(40)};
    auto r = apply_ode(find_ode("a4_dual_topological"), z);
    EXPECT_TRUE(r.body.all_zero());
}

TEST(Recursion, PaperTableSatisfiesRecursion) {
    auto r = recursion_check_a4(kA4Table);
    EXPECT_TRUE(r.ok) << r.first_violation;
    auto bad = kA4Table;
    bad[10] += Rat(1);
    auto rb = recursion_check_a4(bad);
    EXPECT_FALSE(rb.ok);
    EXPECT_EQ(rb.first_violation, 10);
}

TEST(Recursion, GeneratorReproducesTable) {
    auto t = a4_recursion_table(10);
    EXPECT_EQ(t, kA4Table);
    auto big = a4_recursion_table(60);
    EXPECT_TRUE(recursion_check_a4(big).ok);
}

TEST(Recursion, EquivalentToOdeAnnihilation) {
    auto tau = a4_recursion_table(60);
    PuiseuxSeries<Rat> phi{5, Series(0, tau, 61)};
    auto res = apply_ode(find_ode("a4_dual_topological"), phi);
    int checked = 0;
    for (int k = res.body.valuation(); k < res.body.trunc_order(); ++k, ++checked)
        ASSERT_TRUE(res.body.coeff(k).is_zero()) << k;
    EXPECT_GE(checked, 55);
    auto bad = tau;
    bad[40] += Rat(1, 1000);
    auto r2 = apply_ode(find_ode("a4_dual_topological"), PuiseuxSeries<Rat>{5, Series(0, bad, 61)});
    EXPECT_FALSE(r2.body.all_zero());
}

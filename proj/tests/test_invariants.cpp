#include <gtest/gtest.h>

#include <cstdlib>

#include "adetau/invariants.hpp"

using namespace adetau;

namespace {

std::vector<Rat> values(const std::vector<TauRecord>& recs) {
    std::vector<Rat> v;
    for (auto& t : recs) v.push_back(t.value);
    return v;
}

Rat q(long n, long d = 1) { return Rat(n, d); }

const std::vector<Rat>& a4_table() {
    static const std::vector<Rat> t = {
        q(1), q(1, 6), q(11, 3600), q(0), q(341, 25920000), q(161, 777600000), q(3397, 93312000000),
        Rat(Int(3421), Int(8192) * 6561 * 78125), q(0),
        Rat(Int(1670581), Int(1048576) * 59049 * 1953125 * 7),
        Rat(Int(26605753), Int(8388608) * 531441 * Int("244140625"))};
    return t;
}

const std::vector<Rat>& d4_table() {
    static const std::vector<Rat> t = {q(1), q(1, 3), q(0), q(13, 40824), q(13, 122472), q(0),
                                       Rat(Int(1433), Int("16665989760")), Rat(Int(253), Int("9999593856")), q(0),
                                       Rat(Int(33917), Int("2041117097886720"))};
    return t;
}

const std::vector<Rat>& e6_table() {
    static const std::vector<Rat> t = {q(1), q(1, 4), q(0), q(5, 1152), q(25, 27648), q(0), q(145, 5750784),
                                       q(4235, 414056448), q(0), Rat(Int(23065), Int("79498838016")),
                                       Rat(Int(174145), Int("3338951196672"))};
    return t;
}

}  // namespace

TEST(TauA, ClosedExamples) {
    EXPECT_EQ(tau_a_closed(5, 1), q(1, 6));
    EXPECT_EQ(tau_a_closed(2, 1), q(1, 24));
    EXPECT_EQ(tau_a_closed(5, 3), q(0));
    EXPECT_EQ(tau_a_closed(7, 0), q(1));
}

TEST(TauA, GenfuncExamples) {
    for (int r = 2; r <= 9; ++r) EXPECT_EQ(a_tilde(r, 1)[1], -q(r - 1, 24)) << r;
    for (int r = 2; r <= 9; ++r) EXPECT_EQ(a_tilde(r, 2)[2], q((r - 1) * (r - 3) * (2 * r + 1), 5760)) << r;
    EXPECT_EQ(tau_a_genfunc(5, 2)[2], q(11, 3600));
    EXPECT_EQ(tau_a_genfunc(3, 3)[3], q(1, 31104));
}

TEST(TauA, HyperExamples) {
    EXPECT_EQ(tau_a_hyper(5, 1), q(1, 6));
    EXPECT_EQ(tau_a_hyper(4, 3), q(3, 20480));
    for (int r = 2; r <= 8; ++r) EXPECT_EQ(tau_a_hyper(r, 0), q(1));
    auto K = detail::partition_sums(1, {q(0), q(20), q(6)});
    EXPECT_EQ(K[1] / q(24), q(5, 6));
}

TEST(TauA, ProductExamples) {
    auto f = f_series(Rat(5), Rat(0), 3);
    Rat c0 = f.coeff(0) * f.coeff(0);
    Rat c2 = f.coeff(0) * f.coeff(2) - f.coeff(1) * f.coeff(1) + f.coeff(2) * f.coeff(0);
    EXPECT_EQ(c0, q(1));
    EXPECT_EQ(c2, q(11));
    EXPECT_EQ(detail::product_norm(5, 1) * q(-1, 6), q(11));
    EXPECT_EQ(tau_a_product(5, 40), tau_a_genfunc(5, 40));
}

TEST(TauA, A4TableAllMethods) {
    for (Method m : {Method::Closed, Method::Genfunc, Method::Hyper, Method::Product, Method::Recursion})
        EXPECT_EQ(values(tau_table(Family::A, 5, 10, m)), a4_table()) << method_tag(m);
    auto ps = values(tau_table(Family::A, 5, 3, Method::Psido));
    EXPECT_EQ(ps, std::vector<Rat>(a4_table().begin(), a4_table().begin() + 4));
}

TEST(TauA, A1MatchesFactorialFormula) {
    auto t = tau_a_genfunc(2, 30);
    for (int g = 0; g <= 30; ++g) EXPECT_EQ(t[g], Rat(1) / (pow(q(24), g) * Rat(factorial(g)))) << g;
}

TEST(TauA, LowGenusClosedForms) {
    for (int r = 2; r <= 12; ++r) {
        auto t = tau_a_closed(r, 1);
        EXPECT_EQ(t, q(r - 1, 24)) << r;
        Rat R(r);
        Rat t2 = r == 2 ? q(1, 1152) : (R - q(3)) * (R - q(1)) * (q(2) * R + q(1)) / (q(5760) * R);
        EXPECT_EQ(tau_a_hyper(r, 2), t2) << r;
        Rat t3;
        if (r == 2) t3 = q(1, 82944);
        else if (r == 3) t3 = q(1, 31104);
        else if (r == 4) t3 = q(3, 20480);
        else t3 = (R - q(5)) * (R - q(1)) * (q(2) * R + q(1)) * (q(8) * R * R - q(13) * R - q(13)) / (q(2903040) * R * R);
        EXPECT_EQ(tau_a_genfunc(r, 3)[3], t3) << r;
    }
}

TEST(TauA, CrossMethodSmall) {
    for (int r = 2; r <= 8; ++r) {
        auto ref = values(tau_table(Family::A, r, 20, Method::Genfunc));
        for (Method m : {Method::Closed, Method::Hyper, Method::Product})
            EXPECT_EQ(values(tau_table(Family::A, r, 20, m)), ref) << r << " " << method_tag(m);
        for (int g = 0; g <= 20; ++g) EXPECT_EQ(ref[g].is_zero(), g > 0 && (2 * g - 1) % r == 0) << r << " " << g;
    }
}

TEST(TauA, PsidoAgreesForSmallRanks) {
    for (int r = 2; r <= 4; ++r)
        EXPECT_EQ(values(tau_table(Family::A, r, 3, Method::Psido)), values(tau_table(Family::A, r, 3, Method::Closed))) << r;
}

TEST(TauA, LaurentPolynomialInR) {
    // tau_A(g) (-r)^{g-1} = -a~_g(r) is a polynomial in r of degree <= 2g-1 on r >= 2g.
    for (int g = 1; g <= 4; ++g) {
        std::vector<Rat> xs, ys;
        for (int i = 0; i < 2 * g + 1; ++i) {
            int r = 2 * g + i;
            xs.push_back(Rat(r));
            ys.push_back(tau_a_genfunc(r, g)[g] * pow(q(-r), g - 1));
        }
        std::vector<Rat> fx(xs.begin(), xs.end() - 1), fy(ys.begin(), ys.end() - 1);
        EXPECT_EQ(detail::lagrange_eval(fx, fy, xs.back()), ys.back()) << g;
    }
}

TEST(TauA, DegreeShiftIdentity) {
    const int r = 5, N = 60;
    auto at = a_tilde(r, N / 2);
    Series y = Series::zero(N);
    for (int g = 0; 2 * g < N; ++g) y.set(2 * g, at[g] * pow(q(4), g));
    auto x = Series::monomial(q(1), 1, N);
    auto yp = series_pow_int((y + x).truncated(N), r + 1, N);
    auto ym = series_pow_int((y - x).truncated(N), r + 1, N);
    Series y1 = (q(1) / q(2 * (r + 1))) * (yp + ym);
    auto lhs = (Series::mul(x, y1.derivative(), N) - q(r + 1) * y1).truncated(N);
    auto rhs = (q(r + 1) * Series::mul(x, y.derivative(), N) - y).truncated(N);
    EXPECT_TRUE((lhs - rhs).truncated(N).all_zero());
    for (int g = 1; 2 * g < N; ++g) {
        if (2 * g == r + 1) continue;
        EXPECT_EQ(y1.coeff(2 * g), Rat(2L * (r + 1) * g - 1, 2 * g - r - 1) * at[g] * pow(q(4), g)) << g;
    }
}

TEST(TauD, Examples) {
    EXPECT_EQ(tau_d_closed(4, 1), q(1, 3));
    EXPECT_EQ(tau_d_closed(4, 2), q(0));
    EXPECT_EQ(tau_d_closed(5, 1), q(5, 12));
    for (int l = 4; l <= 8; ++l) {
        Rat R(2 * l - 2);
        auto n = n_series(l, 2);
        EXPECT_EQ(n[1], -(R + q(2)) / q(24));
        EXPECT_EQ(n[2], (R + q(2)) * (R - q(6)) * (q(2) * R + q(1)) / q(5760));
    }
    EXPECT_EQ(tau_d_genfunc(4, 3)[3], q(13, 40824));
    EXPECT_EQ(tau_d_hyper(4, 1), q(1, 3));
    EXPECT_EQ(detail::partition_sums(1, detail::d_weights(4))[1], q(2));
    EXPECT_EQ(tau_d_hyper(4, 3), q(13, 40824));
    for (int l = 4; l <= 7; ++l) EXPECT_EQ(tau_d_hyper(l, 0), q(1));
    auto p = tau_d_product(4, 1);
    EXPECT_EQ(p[0], q(1));
    EXPECT_EQ(n_series(4, 1)[1], q(-1, 3));
}

TEST(TauD, D4TableAllMethods) {
    for (Method m : {Method::Closed, Method::Genfunc, Method::Hyper, Method::Product, Method::Ode})
        EXPECT_EQ(values(tau_table(Family::D, 6, 9, m)), d4_table()) << method_tag(m);
    auto ps = values(tau_table(Family::D, 6, 2, Method::Psido));
    EXPECT_EQ(ps, std::vector<Rat>(d4_table().begin(), d4_table().begin() + 3));
}

TEST(TauD, LowGenusClosedForms) {
    for (int l = 4; l <= 8; ++l) {
        Rat R(2 * l - 2);
        EXPECT_EQ(tau_d_closed(l, 1), (R + q(2)) / q(24));
        EXPECT_EQ(tau_d_hyper(l, 2), (R + q(2)) * (R - q(6)) * (q(2) * R + q(1)) / (q(5760) * R));
        EXPECT_EQ(tau_d_genfunc(l, 3)[3], (R + q(2)) * (q(2) * R + q(1)) *
                                              (q(8) * R * R * R - q(77) * R * R + q(196) * R + q(188)) /
                                              (q(2903040) * R * R));
    }
}

TEST(TauD, CrossMethodSmall) {
    for (int l = 4; l <= 6; ++l) {
        auto ref = values(tau_table(Family::D, 2 * l - 2, 20, Method::Genfunc));
        for (Method m : {Method::Closed, Method::Hyper, Method::Product})
            EXPECT_EQ(values(tau_table(Family::D, 2 * l - 2, 20, m)), ref) << l << " " << method_tag(m);
    }
    EXPECT_EQ(tau_d4_ode(40), tau_d_genfunc(4, 40));
}

TEST(TauD, PsidoAgrees) {
    EXPECT_EQ(values(tau_table(Family::D, 8, 2, Method::Psido)), values(tau_table(Family::D, 8, 2, Method::Closed)));
}

TEST(TauE6, Table) {
    EXPECT_EQ(tau_e6(10), e6_table());
    auto t = tau_e6(60);
    for (int g = 0; g <= 60; ++g) EXPECT_EQ(t[g].is_zero(), g % 3 == 2) << g;
}

TEST(TauTable, RejectsUnsupportedCombinations) {
    EXPECT_THROW(tau_table(Family::E6, 12, 3, Method::Closed), std::invalid_argument);
    EXPECT_THROW(tau_table(Family::A, 4, 3, Method::Recursion), std::invalid_argument);
    EXPECT_THROW(tau_table(Family::D, 8, 3, Method::Ode), std::invalid_argument);
    EXPECT_THROW(tau_table(Family::D, 7, 3, Method::Closed), std::invalid_argument);
    EXPECT_THROW(tau_table(Family::A, 1, 3, Method::Closed), std::invalid_argument);
    EXPECT_THROW(tau_table(Family::A, 5, -1, Method::Closed), std::invalid_argument);
}

TEST(TauTable, DeterministicAcrossThreadCounts) {
    setenv("ADETAU_THREADS", "1", 1);
    auto a = records_to_csv(tau_table(Family::D, 8, 15, Method::Hyper));
    setenv("ADETAU_THREADS", "4", 1);
    auto b = records_to_csv(tau_table(Family::D, 8, 15, Method::Hyper));
    unsetenv("ADETAU_THREADS");
    EXPECT_EQ(a, b);
}

TEST(IndexSolve, ExponentClasses) {
    auto s = solve_index(Family::E6, 12, 3);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->alpha, 3);
    EXPECT_EQ(s->m, 0);
    EXPECT_FALSE(solve_index(Family::A, 5, 3));
    auto d = solve_index(Family::D, 6, 5);
    ASSERT_TRUE(d);
    EXPECT_EQ(exponents(Family::D, 6)[d->alpha - 1] + 6 * d->m, 9);
    EXPECT_EQ(exponents(Family::D, 8), (std::vector<int>{1, 3, 5, 7, 4}));
}

TEST(Asymptotics, A1WithHalfFactor) {
    auto t = tau_a_genfunc(2, 200);
    double e100 = std::fabs(asymptotic_predict(Family::A, 2, 100, t[100]).ratio - 1);
    double e200 = std::fabs(asymptotic_predict(Family::A, 2, 200, t[200]).ratio - 1);
    EXPECT_LT(e200, e100);
    EXPECT_LT(e200, 0.01);
}

TEST(Asymptotics, ModerateGenus) {
    auto a = a4_recursion_table(200);
    EXPECT_NEAR(asymptotic_predict(Family::A, 5, 199, a[199]).ratio, 1.0, 0.05);
    auto d = tau_d_genfunc(5, 120);
    EXPECT_NEAR(asymptotic_predict(Family::D, 8, 120, d[120]).ratio, 1.0, 0.05);
    auto e = tau_e6(120);
    EXPECT_NEAR(asymptotic_predict(Family::E6, 12, 120, e[120]).ratio, 1.0, 0.05);
    EXPECT_THROW(asymptotic_predict(Family::A, 5, 3, q(0)), std::domain_error);
    EXPECT_THROW(asymptotic_predict(Family::E6, 12, 5, q(0)), std::domain_error);
}

TEST(Bernoulli, ExamplesAndRange) {
    EXPECT_EQ(bernoulli_limit(Family::A, 1).interpolated, q(1, 12));
    EXPECT_EQ(bernoulli_limit(Family::A, 2).interpolated, q(-1, 720));
    EXPECT_EQ(bernoulli_limit(Family::D, 1).interpolated, q(-1, 24));
    for (int g = 0; g <= 6; ++g)
        for (Family f : {Family::A, Family::D}) {
            auto b = bernoulli_limit(f, g);
            EXPECT_TRUE(b.consistent) << g;
            EXPECT_EQ(b.interpolated, b.target) << g;
        }
    EXPECT_THROW(bernoulli_limit(Family::A, 11), std::domain_error);
}

TEST(Serialization, CsvAndJson) {
    auto recs = tau_table(Family::A, 5, 2, Method::Closed);
    EXPECT_EQ(records_to_csv(recs), "family,r,g,method,value\na,5,0,closed,1/1\na,5,1,closed,1/6\na,5,2,closed,11/3600\n");
    auto j = records_to_json(recs, {{"family", "a"}});
    EXPECT_EQ(j["meta"]["config"]["family"], "a");
    EXPECT_EQ(j["records"].size(), 3u);
    EXPECT_EQ(j["records"][2]["value"], "11/3600");
    Series s(-1, {q(1), q(0), q(2, 3)}, 4);
    auto js = series_to_json(s);
    EXPECT_EQ(js["valuation"], -1);
    EXPECT_EQ(js["trunc_order"], 4);
    EXPECT_EQ(js["coeffs"][2], "2/3");
}

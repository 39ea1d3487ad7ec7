#include <gtest/gtest.h>

#include <random>

#include "adetau/frobenius.hpp"
#include "adetau/invariants.hpp"

using namespace adetau;

namespace {

const ThetaPoly& find_theta(const std::string& fam, int alpha, long m) {
    for (auto& t : theta_family(fam).thetas)
        if (t.alpha == alpha && t.m == m) return t;
    throw std::logic_error("missing theta");
}

Rat theta_at_vstar(const std::string& fam, int alpha, long m) {
    return theta_eval(find_theta(fam, alpha, m), theta_family(fam).vstar);
}

std::vector<Rat> random_point(std::mt19937_64& rng, size_t n) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 12);
    std::vector<Rat> s;
    for (size_t i = 0; i < n; ++i) s.emplace_back(num(rng), den(rng));
    return s;
}

}  // namespace

TEST(ThetaCatalogue, LoadsAllFamilies) {
    auto& cat = theta_catalogue();
    for (const char* f : {"A1", "A2", "A4", "D4", "E6"}) EXPECT_TRUE(cat.count(f)) << f;
    EXPECT_EQ(theta_family("D4").exponents, (std::vector<int>{1, 3, 5, 3}));
    EXPECT_EQ(theta_family("E6").r, 12);
    EXPECT_FALSE(find_theta("A4", 1, 2).note.empty());
    EXPECT_THROW(theta_family("B3"), std::invalid_argument);
}

TEST(ThetaEval, PaperValuesAtVstar) {
    EXPECT_EQ(theta_at_vstar("A4", 2, 1), Rat(341, 25920000));
    EXPECT_EQ(theta_at_vstar("A4", 4, 1), Rat(161, 777600000));
    EXPECT_EQ(theta_at_vstar("A4", 1, 2), Rat(Int("3397"), Int("93312000000")));
    EXPECT_EQ(theta_at_vstar("D4", 1, 1), Rat(13, 122472));
    EXPECT_EQ(theta_at_vstar("D4", 3, 1), Rat(Int("1433"), Int("16665989760")));
    EXPECT_EQ(theta_at_vstar("E6", 1, 1), Rat(4235, 414056448));
}

TEST(ThetaEval, HandEvaluatedMonomials) {
    Rat v1(1, 6), v3(11, 3600);
    EXPECT_EQ(theta_at_vstar("A4", 2, 1), v3 * v3 / Rat(2) + v1 * v1 * v3 / Rat(10));
    EXPECT_EQ(theta_at_vstar("A4", 4, 1), pow(v1, 5) / Rat(2500) + v3 * v3 * v1 / Rat(10));
    EXPECT_EQ(theta_at_vstar("D4", 1, 1), Rat(13, 40824) * Rat(1, 3));
    EXPECT_EQ(theta_at_vstar("E6", 1, 1), Rat(145, 5750784) * Rat(1, 4) + Rat(25, 27648) * Rat(5, 1152));
}

TEST(ThetaEval, RejectsWrongArity) {
    EXPECT_THROW(theta_eval(find_theta("A4", 2, 1), std::vector<Rat>{Rat(1), Rat(2)}), std::invalid_argument);
}

TEST(ThetaEval, DegreeZeroIsLowerCoordinate) {
    std::mt19937_64 rng(7);
    for (auto& [name, tf] : theta_catalogue()) {
        auto upper = random_point(rng, static_cast<size_t>(tf.rank));
        auto lower = lower_index(tf.vstar.eta, upper);
        for (auto& th : tf.thetas) {
            if (th.m != 0) continue;
            auto v = th.coords == Coords::Upper ? upper : lower;
            EXPECT_EQ(theta_eval(th, v), lower[static_cast<size_t>(th.alpha - 1)]) << name << " " << th.alpha;
        }
    }
}

TEST(Eta, RaiseLowerInvolution) {
    std::mt19937_64 rng(11);
    for (auto& [name, tf] : theta_catalogue())
        for (int trial = 0; trial < 5; ++trial) {
            auto v = random_point(rng, static_cast<size_t>(tf.rank));
            EXPECT_EQ(raise_index(tf.vstar.eta, lower_index(tf.vstar.eta, v)), v) << name;
            EXPECT_EQ(lower_index(tf.vstar.eta, raise_index(tf.vstar.eta, v)), v) << name;
        }
    auto& eta = theta_family("D4").vstar.eta;
    EXPECT_EQ(eta[3][3], Rat(1));
    EXPECT_EQ(eta[0][2], Rat(1));
    EXPECT_EQ(eta[1][1], Rat(1));
}

TEST(Duality, AllCatalogueRowsMatch) {
    for (const char* f : {"A1", "A2", "A4", "D4", "E6"}) {
        auto rows = duality_report(f);
        EXPECT_EQ(rows.size(), theta_family(f).thetas.size());
        for (auto& row : rows) EXPECT_TRUE(row.equal) << f << " alpha=" << row.alpha << " m=" << row.m << " " << row.theta;
    }
}

TEST(Duality, NonIntegralGenusRowsVanish) {
    for (auto& row : duality_report("A4"))
        if (row.alpha == 1 && row.m == 1) {
            EXPECT_FALSE(row.g.has_value());
            EXPECT_TRUE(row.theta.is_zero());
            EXPECT_TRUE(row.tau.is_zero());
        }
    for (auto& row : duality_report("D4"))
        if ((row.alpha == 2 || row.alpha == 4) && row.m == 1) {
            EXPECT_EQ(row.g, 5);
            EXPECT_TRUE(row.theta.is_zero());
        }
}

TEST(Vstar, ConsistentWithInvariants) {
    for (const char* f : {"A1", "A2", "A4", "D4", "E6"}) EXPECT_TRUE(vstar_consistency(f)) << f;
    auto rows = vstar_report("A4");
    EXPECT_EQ(rows[0].shipped, Rat(1, 6));
    EXPECT_EQ(rows[2].shipped, Rat(11, 3600));
    EXPECT_FALSE(vstar_report("D4")[1].g.has_value() && !vstar_report("D4")[1].tau.is_zero());
    EXPECT_TRUE(vstar_report("D4")[1].shipped.is_zero());
}

TEST(UkResidues, A1Example) {
    auto res = uk_residues(Family::A, 2, {Rat(3)}, 5);
    EXPECT_EQ(res.u_inversion[1], Rat(-3, 2));
    EXPECT_EQ(res.u_residue[1], Rat(-3, 2));
    // p = sqrt(xi^2 - 3): u_3 = -9/8
    EXPECT_EQ(res.u_inversion[3], Rat(-9, 8));
}

TEST(UkResidues, D4MatchesDisplayedExpansion) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        auto s = random_point(rng, 4);
        if (s[3].is_zero()) s[3] = Rat(1, 2);
        const Rat &s1 = s[0], &s2 = s[1], &s3 = s[2], &s4 = s[3];
        auto res = uk_residues(Family::D, 6, s, 20);
        auto& u = res.u_inversion;
        EXPECT_EQ(u[1], -s1 / Rat(6));
        EXPECT_EQ(u[3], (s1 * s1 - Rat(4) * s2) / Rat(24));
        EXPECT_EQ(u[5], (Rat(-7) * pow(s1, 3) + Rat(36) * s2 * s1 - Rat(216) * s3) / Rat(1296));
        EXPECT_EQ(u[7], (Rat(-55) * pow(s1, 4) + Rat(360) * s2 * s1 * s1 - Rat(864) * s3 * s1 - Rat(432) * s2 * s2 -
                         Rat(5184) * s4 * s4) /
                            Rat(31104));
        auto& v = res.v_inversion;
        EXPECT_EQ(v[0], s4);
        EXPECT_EQ(v[6], s3 * s4 / Rat(2));
        EXPECT_EQ(v[12], (Rat(3) * s3 * s3 + Rat(4) * s2 * s4 * s4) * s4 / Rat(8));
        EXPECT_EQ(v[18], (Rat(8) * s1 * pow(s4, 4) + Rat(20) * s2 * s3 * s4 * s4 + Rat(5) * pow(s3, 3)) * s4 / Rat(16));
        for (int m = 0; m <= 20; ++m)
            if (m % 6 != 0) EXPECT_TRUE(v[m].is_zero()) << m;
        EXPECT_TRUE(res.agree());
    }
}

TEST(UkResidues, DZeroCornerCoordinateKillsMinusBranch) {
    auto res = uk_residues(Family::D, 6, {Rat(1, 3), Rat(2), Rat(-5, 7), Rat(0)}, 15);
    for (auto& v : res.v_inversion) EXPECT_TRUE(v.is_zero());
    for (auto& v : res.v_residue) EXPECT_TRUE(v.is_zero());
}

TEST(UkResidues, RoutesAgreeOnRandomPoints) {
    std::mt19937_64 rng(20240611);
    for (int r : {2, 3, 4, 5, 6})
        for (int trial = 0; trial < 10; ++trial) {
            auto res = uk_residues(Family::A, r, random_point(rng, static_cast<size_t>(r - 1)), 15);
            EXPECT_EQ(res.u_inversion, res.u_residue) << "A r=" << r;
        }
    for (int l : {4, 5})
        for (int trial = 0; trial < 10; ++trial) {
            auto s = random_point(rng, static_cast<size_t>(l));
            auto res = uk_residues(Family::D, 2 * l - 2, s, 15);
            EXPECT_EQ(res.u_inversion, res.u_residue) << "D l=" << l;
            EXPECT_EQ(res.v_inversion, res.v_residue) << "D l=" << l;
        }
}

TEST(UkResidues, RejectsBadShape) {
    EXPECT_THROW(uk_residues(Family::A, 4, {Rat(1)}, 5), std::invalid_argument);
    EXPECT_THROW(uk_residues(Family::D, 7, {Rat(1), Rat(1), Rat(1), Rat(1)}, 5), std::invalid_argument);
    EXPECT_THROW(uk_residues(Family::E6, 12, {}, 5), std::invalid_argument);
}

TEST(ABridge, ReproducesHypergeometricSum) {
    for (int r = 2; r <= 8; ++r) {
        const int gmax = 12;
        auto br = a_bridge(r, gmax);
        for (int g = 1; g <= gmax; ++g) {
            Rat f = detail::genfunc_factor(r, g);
            EXPECT_EQ(f * br[g] / Rat(1L - 2L * g), tau_a_hyper(r, g)) << r << " " << g;
        }
    }
}

TEST(E6Superpotential, MonicEvenAndLeadingData) {
    using Q = QuadElem;
    auto lam = e6_superpotential_at_vstar(30);
    EXPECT_EQ(lam.valuation(), -12);
    EXPECT_EQ(lam.coeff(-12), Q(1));
    for (int e = -11; e < 30; e += 2) EXPECT_TRUE(lam.coeff(e).is_zero()) << e;
    auto p = invert_superpotential(lam, 12, 12);
    const Q s3(Rat(0), Rat(1));
    // theta_{alpha,0} = -kappa_alpha 12 u_{m_alpha}
    EXPECT_EQ(Q(12) / (Q(2) * s3) * p.coeff(1), Q(Rat(1, 4)));
    EXPECT_EQ((s3 - Q(1)) * Q(12) * p.coeff(5), Q(Rat(5, 1152)));
    EXPECT_TRUE(p.coeff(4).is_zero());
    EXPECT_TRUE(p.coeff(8).is_zero());
}

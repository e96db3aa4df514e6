#include <gtest/gtest.h>

#include "support.hpp"

using namespace expneed;

TEST(Agreement, PublishedTable) {
    const ContingencyTable2x2 t{448, 17, 7, 13};
    EXPECT_EQ(t.n(), 485u);
    EXPECT_NEAR(percent_agreement(t), 0.9505, 0.001);
    EXPECT_NEAR(cohens_kappa(t), 0.495, 0.001);
    EXPECT_NEAR(gwets_ac1(t), 0.945, 0.001);
}

TEST(Agreement, HandComputedOracle) {
    const ContingencyTable2x2 t{2, 1, 1, 2};
    EXPECT_NEAR(percent_agreement(t), 4.0 / 6.0, 1e-12);
    // p_o = 2/3, p_e = 0.5*0.5 + 0.5*0.5 = 0.5
    EXPECT_NEAR(cohens_kappa(t), (2.0 / 3.0 - 0.5) / 0.5, 1e-12);
    // pi = 0.5, p_e = 2*pi*(1-pi) = 0.5
    EXPECT_NEAR(gwets_ac1(t), 1.0 / 3.0, 1e-12);
}

TEST(Agreement, KappaMatchesMarginalFormula) {
    for (const ContingencyTable2x2& t : {ContingencyTable2x2{448, 17, 7, 13}, ContingencyTable2x2{10, 3, 5, 40},
                                         ContingencyTable2x2{1, 2, 3, 4}}) {
        const double n = static_cast<double>(t.n());
        const double po = static_cast<double>(t.a + t.d) / n;
        const double r1_pos = static_cast<double>(t.b + t.d) / n;
        const double r2_pos = static_cast<double>(t.c + t.d) / n;
        const double pe = r1_pos * r2_pos + (1 - r1_pos) * (1 - r2_pos);
        EXPECT_NEAR(cohens_kappa(t), (po - pe) / (1 - pe), 1e-12);
        const double pi = (r1_pos + r2_pos) / 2;
        const double pe_ac1 = 2 * pi * (1 - pi);
        EXPECT_NEAR(gwets_ac1(t), (po - pe_ac1) / (1 - pe_ac1), 1e-12);
    }
}

TEST(Agreement, LabelSwapInvariance) {
    for (const ContingencyTable2x2& t : {ContingencyTable2x2{448, 17, 7, 13}, ContingencyTable2x2{10, 3, 5, 40},
                                         ContingencyTable2x2{0, 2, 3, 4}}) {
        const ContingencyTable2x2 swapped{t.d, t.c, t.b, t.a};
        EXPECT_NEAR(cohens_kappa(t), cohens_kappa(swapped), 1e-12);
        EXPECT_NEAR(gwets_ac1(t), gwets_ac1(swapped), 1e-12);
        EXPECT_NEAR(percent_agreement(t), percent_agreement(swapped), 1e-12);
    }
}

TEST(Agreement, DegenerateExpectedAgreement) {
    // Both raters always negative: p_e = 1 for kappa.
    const auto k = cohens_kappa_detail({10, 0, 0, 0});
    EXPECT_TRUE(k.degenerate);
    EXPECT_EQ(k.value, 1.0);
    EXPECT_FALSE(gwets_ac1_detail({10, 0, 0, 0}).degenerate);
    EXPECT_NEAR(gwets_ac1({10, 0, 0, 0}), 1.0, 1e-12);
}

TEST(Agreement, EmptyTableIsRejected) {
    EXPECT_THROW(percent_agreement({0, 0, 0, 0}), ValidationError);
    EXPECT_THROW(cohens_kappa({0, 0, 0, 0}), ValidationError);
}

TEST(LandisKoch, Bands) {
    EXPECT_EQ(landis_koch_band(-0.3), AgreementBand::none);
    EXPECT_EQ(landis_koch_band(0.0), AgreementBand::none);
    EXPECT_EQ(landis_koch_band(0.004), AgreementBand::none);
    EXPECT_EQ(landis_koch_band(0.01), AgreementBand::slight);
    EXPECT_EQ(landis_koch_band(0.20), AgreementBand::slight);
    EXPECT_EQ(landis_koch_band(0.205), AgreementBand::fair);
    EXPECT_EQ(landis_koch_band(0.40), AgreementBand::fair);
    EXPECT_EQ(landis_koch_band(0.495), AgreementBand::moderate);
    EXPECT_EQ(landis_koch_band(0.61), AgreementBand::substantial);
    EXPECT_EQ(landis_koch_band(0.945), AgreementBand::almost_perfect);
    EXPECT_EQ(landis_koch_band(1.0), AgreementBand::almost_perfect);
    EXPECT_THROW(landis_koch_band(1.5), ValidationError);
    EXPECT_THROW(landis_koch_band(-1.01), ValidationError);
}

TEST(AgreementReport, PublishedTableBands) {
    const auto r = agreement_report({448, 17, 7, 13});
    EXPECT_EQ(r.kappa_band, AgreementBand::moderate);
    EXPECT_EQ(r.ac1_band, AgreementBand::almost_perfect);
}

TEST(PairAnnotations, CountsRows) {
    const auto t = parse_annotation_pairs("review_id,rater1,rater2\n1,0,0\n2,1,0\n3,0,1\n4,1,1\n5,0,0\n");
    EXPECT_EQ(t.a, 2u);
    EXPECT_EQ(t.b, 1u);
    EXPECT_EQ(t.c, 1u);
    EXPECT_EQ(t.d, 1u);
}

TEST(PairAnnotations, Errors) {
    EXPECT_THROW(parse_annotation_pairs("review_id,rater1,rater2\n1,0,2\n"), ValidationError);
    EXPECT_THROW(parse_annotation_pairs("review_id,rater1,rater2\n1,0,0\n1,1,1\n"), ValidationError);
    EXPECT_THROW(parse_annotation_pairs("review_id,rater1,rater2\n"), ValidationError);
    EXPECT_THROW(parse_annotation_pairs("id,a,b\n1,0,0\n"), ValidationError);
    EXPECT_THROW(pair_annotations("/nonexistent/pairs.csv"), ValidationError);
}

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tmlab/errors.hpp"
#include "tmlab/mappings.hpp"

using namespace tmlab;

namespace {

const SpaceModel e2 = SpaceModel::euclidean(2);

Point e(double a, double b) { return EuclideanPoint{{a, b}}; }

}  // namespace

TEST(Apply, Examples) {
    EXPECT_TRUE(e2.equal(MappingFamily::identity(e2).apply(9, e(3, 4)), e(3, 4)));
    const auto prox =
        MappingFamily::proximal(e2, ConvexFunction::half_squared_norm(e2.origin()), RealSequence::parse("const:1"));
    EXPECT_TRUE(e2.equal(prox.apply(0, e(2, 0)), e(1, 0)));
    const auto rot = MappingFamily::rotation(e2, std::numbers::pi / 2);
    EXPECT_TRUE(e2.equal(rot.apply(0, e(1, 0)), e(0, 1)));
}

TEST(Apply, BallProjectionAndIndicatorProx) {
    const auto proj = MappingFamily::metric_projection(e2, e2.origin(), 0.5);
    EXPECT_TRUE(e2.equal(proj.apply(0, e(2, 0)), e(0.5, 0)));
    EXPECT_TRUE(e2.equal(proj.apply(0, e(0.1, 0.2)), e(0.1, 0.2)));
    const auto ind = MappingFamily::proximal(e2, ConvexFunction::indicator_of_ball(e2.origin(), 0.5),
                                             RealSequence::parse("const:3"));
    EXPECT_TRUE(e2.equal(ind.apply(4, e(0, -3)), e(0, -0.5)));
    EXPECT_FALSE(ind.depends_on_n());
}

TEST(Apply, DiskAndTripod) {
    const auto d = SpaceModel::poincare_disk();
    const auto proj = MappingFamily::metric_projection(d, d.origin(), 0.5);
    EXPECT_NEAR(d.dist(d.origin(), proj.apply(0, DiskPoint{0.9, 0})), 0.5, 1e-12);
    const auto t = SpaceModel::tripod();
    const Point y = MappingFamily::metric_projection(t, t.origin(), 0.5).apply(0, TripodPoint{2, 4.0});
    EXPECT_EQ(std::get<TripodPoint>(y).leg, 2);
    EXPECT_NEAR(std::get<TripodPoint>(y).length, 0.5, 1e-15);
    const Point r = MappingFamily::rotation(t, 2 * std::numbers::pi / 3).apply(0, TripodPoint{0, 1.0});
    EXPECT_EQ(std::get<TripodPoint>(r).leg, 1);
}

TEST(Construction, Rejects) {
    EXPECT_THROW(MappingFamily::rotation(SpaceModel::euclidean(1), 1.0), InvalidInput);
    EXPECT_THROW(MappingFamily::metric_projection(e2, e2.origin(), 0.0), InvalidInput);
    EXPECT_THROW(MappingFamily::rotation(e2, 1.0).with_fixed_point(e(1, 1)), InvalidInput);
    const auto prox =
        MappingFamily::proximal(e2, ConvexFunction::half_squared_norm(e2.origin()), RealSequence::parse("const:0"));
    EXPECT_THROW(prox.apply(0, e(1, 0)), InvalidInput);
    EXPECT_NO_THROW(MappingFamily::identity(e2).with_fixed_point(e(1, 1)));
}

TEST(Nonexpansive, ShippedFamiliesPass) {
    const SampleSpec spec{7, 1000, 2.0};
    const auto rot = check_nonexpansive(MappingFamily::rotation(e2, 0.7), 10, spec, 1e-9);
    EXPECT_TRUE(rot.pass);
    EXPECT_LE(std::abs(rot.max_violation), 1e-12);
    EXPECT_TRUE(check_nonexpansive(MappingFamily::metric_projection(e2, e(0.3, 0), 1.0), 5, spec, 1e-9).pass);
    const auto prox = MappingFamily::proximal(e2, ConvexFunction::half_squared_norm(e2.origin()),
                                              preset("harmonic").gamma);
    EXPECT_TRUE(check_nonexpansive(prox, 20, spec, 1e-9).pass);
    const auto d = SpaceModel::poincare_disk();
    EXPECT_TRUE(check_nonexpansive(MappingFamily::metric_projection(d, d.origin(), 0.4), 3, spec, 1e-9).pass);
}

TEST(ConditionC1, Examples) {
    const SampleSpec spec{3, 1000, 2.0};
    const auto h = preset("harmonic");
    const auto prox = MappingFamily::proximal(e2, ConvexFunction::half_squared_norm(e2.origin()), h.gamma);
    EXPECT_TRUE(check_condition_c1(prox, h.gamma, 50, spec, 1e-9).pass);
    const auto constant = MappingFamily::constant(MappingFamily::rotation(e2, 1.0));
    const auto c = check_condition_c1(constant, h.gamma, 20, spec, 1e-9);
    EXPECT_TRUE(c.pass);
    EXPECT_LE(c.max_violation, 0.0);
    EXPECT_TRUE(check_condition_c1(MappingFamily::identity(e2), h.gamma, 20, spec, 1e-9).pass);
}

TEST(ConditionC1, ResolventFamily) {
    const auto h = preset("harmonic");
    const auto res = MappingFamily::resolvent(MappingFamily::rotation(e2, std::numbers::pi / 3), h.gamma);
    EXPECT_TRUE(res.depends_on_n());
    EXPECT_TRUE(check_condition_c1(res, h.gamma, 20, {5, 200, 1.5}, 1e-8).pass);
    EXPECT_TRUE(check_fixed_point(res, 50, 1e-9).pass);
}

TEST(ResolventFailure, ReportsResidual) {
    const auto res = MappingFamily::resolvent(MappingFamily::rotation(e2, 1.0), RealSequence::parse("const:1"),
                                              1e-15, 2);
    try {
        res.apply(0, e(1, 1));
        FAIL() << "expected SolverFailure";
    } catch (const SolverFailure& f) {
        EXPECT_GT(f.residual(), 0.0);
    }
}

TEST(AfpMembership, Examples) {
    const auto rot = MappingFamily::rotation(e2, std::numbers::pi / 2);
    EXPECT_TRUE(check_afp_membership(rot, e2.origin(), e2.origin(), 2, 1, 10));
    EXPECT_FALSE(check_afp_membership(rot, e(1, 0), e2.origin(), 2, 1, 10));
    EXPECT_TRUE(check_afp_membership(MappingFamily::identity(e2), e(1, 0), e2.origin(), 2, 5, 10));
}

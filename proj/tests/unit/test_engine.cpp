#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "tmlab/engine.hpp"
#include "tmlab/errors.hpp"

using namespace tmlab;

namespace {

const SpaceModel e1 = SpaceModel::euclidean(1);
const SpaceModel e2 = SpaceModel::euclidean(2);

Point e(double a, double b) { return EuclideanPoint{{a, b}}; }

}  // namespace

TEST(Step, IdentityFirstStep) {
    const auto s = step(IterationState::initial(EuclideanPoint{{0.0}}, EuclideanPoint{{1.0}}),
                        MappingFamily::identity(e1), preset("harmonic"), e1);
    EXPECT_EQ(s.n, 1u);
    EXPECT_NEAR(coordinates(s.x)[0], 0.5, 1e-15);
    ASSERT_TRUE(s.u_n);
}

TEST(Step, RotationExample) {
    const auto s = step(IterationState::initial(e2.origin(), e(1, 0)), MappingFamily::rotation(e2, std::numbers::pi / 2),
                        preset("harmonic"), e2);
    EXPECT_TRUE(e2.equal(*s.u_n, e(0.5, 0)));
    EXPECT_NEAR(coordinates(s.x)[0], 0.25, 1e-15);
    EXPECT_NEAR(coordinates(s.x)[1], 0.25, 1e-15);
}

TEST(Run, ClosedForm) {
    const auto t = run(e1, MappingFamily::identity(e1), preset("harmonic"), EuclideanPoint{{0.0}},
                       EuclideanPoint{{1.0}}, 1000);
    ASSERT_EQ(t.records.size(), 1001u);
    for (const auto& r : t.records) EXPECT_NEAR(coordinates(r.x)[0], 1.0 / double(r.n + 1), 1e-12);
    EXPECT_TRUE(std::isnan(t.records.back().d_step));
    EXPECT_EQ(t.last_index(), 1000u);
}

TEST(Run, OneStepHasTwoRecords) {
    const auto t = run(e2, MappingFamily::rotation(e2, 1.0), preset("harmonic"), e2.origin(), e(1, 0), 1);
    ASSERT_EQ(t.records.size(), 2u);
    EXPECT_EQ(t.records[1].n, 1u);
    EXPECT_THROW(run(e2, MappingFamily::identity(e2), preset("harmonic"), e2.origin(), e(1, 0), 0), InvalidInput);
}

TEST(Run, ProximalDistanceToFixedPointIsNonincreasing) {
    const auto h = preset("harmonic");
    const auto prox = MappingFamily::proximal(e2, ConvexFunction::half_squared_norm(e2.origin()), h.gamma);
    const auto t = run(e2, prox, h, e2.origin(), e(1, 0), 10'000);
    for (std::size_t i = 1; i < t.records.size(); ++i) EXPECT_LE(t.records[i].d_p, t.records[i - 1].d_p + 1e-12);
}

TEST(Run, SolverFailureIsRecorded) {
    const auto res = MappingFamily::resolvent(MappingFamily::rotation(e2, 1.0), RealSequence::parse("const:1"),
                                              1e-15, 2);
    const auto t = run(e2, res, preset("harmonic"), e2.origin(), e(1, 1), 5);
    ASSERT_TRUE(t.error);
    EXPECT_GT(t.error_residual, 0.0);
    std::ostringstream csv;
    write_csv(csv, t);
    EXPECT_NE(csv.str().find("# error:"), std::string::npos);
}

TEST(Hilbert, SpecialCaseAgrees) {
    const auto h = preset("harmonic");
    for (const auto& f : {MappingFamily::identity(e2), MappingFamily::rotation(e2, std::numbers::pi / 3),
                          MappingFamily::proximal(e2, ConvexFunction::half_squared_norm(e2.origin()), h.gamma)}) {
        const auto r = check_hilbert_special_case(e2, f, h, e(1, 0.5), 100, 1e-10);
        EXPECT_TRUE(r.pass) << f.name();
    }
    const auto id = check_hilbert_special_case(e2, MappingFamily::identity(e2), h, e(1, 0.5), 100, 1e-10);
    EXPECT_LE(id.max_violation, 0.0);
    const auto d = SpaceModel::poincare_disk();
    EXPECT_THROW(check_hilbert_special_case(d, MappingFamily::identity(d), h, d.origin(), 10, 1e-10), InvalidInput);
}

TEST(Csv, Format) {
    const auto t = run(e1, MappingFamily::identity(e1), preset("harmonic"), EuclideanPoint{{0.0}},
                       EuclideanPoint{{1.0}}, 3);
    std::ostringstream csv;
    write_csv(csv, t);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# model=euclidean(1) family=identity scenario=", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line, "n,x_0,d_step,d_Tn,d_p");
    std::vector<std::string> xs;
    while (std::getline(in, line)) xs.push_back(line.substr(0, line.find(',', 2)));
    EXPECT_EQ(xs, (std::vector<std::string>{"0,1", "1,0.5", "2,0.33333333333333331", "3,0.25"}));
}

TEST(Csv, Deterministic) {
    const auto go = [] {
        std::ostringstream s;
        write_csv(s, run(e2, MappingFamily::rotation(e2, 0.3), preset("harmonic"), e(0.1, 0.2), e(1, 0), 200));
        return s.str();
    };
    EXPECT_EQ(go(), go());
}

TEST(ScenarioHash, DistinguishesInputs) {
    const auto h = preset("harmonic");
    const auto a = scenario_hash(e2, MappingFamily::identity(e2), h, e2.origin(), e(1, 0));
    EXPECT_EQ(a.size(), 16u);
    EXPECT_EQ(a, scenario_hash(e2, MappingFamily::identity(e2), h, e2.origin(), e(1, 0)));
    EXPECT_NE(a, scenario_hash(e2, MappingFamily::identity(e2), h, e2.origin(), e(1, 1e-9)));
}

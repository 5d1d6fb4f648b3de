#include "support.hpp"

#include <gtest/gtest.h>

using namespace mkfp;
using namespace mkfp::testing;

namespace {

FiniteMetricSpace<Q> line3() { return make_line_space<Q>({"a", "b", "c"}, {Q(0), Q(1), Q(3)}); }
SelfMap line3_map() { return SelfMap({0, 0, 1}, 3); }

}  // namespace

TEST(Iterate, LineFromEachStart) {
    auto tr = iterate(line3(), line3_map(), 2, 10);
    EXPECT_EQ(tr.outcome, Outcome::fixed_point_reached);
    EXPECT_EQ(tr.states, (std::vector<Index>{2, 1, 0, 0}));
    EXPECT_EQ(tr.step_dists, (std::vector<Q>{Q(2), Q(1), Q(0)}));
    EXPECT_EQ(tr.steps, 2u);
    EXPECT_FALSE(tr.monotonicity_violation.has_value());
    auto at_fixed = iterate(line3(), line3_map(), 0, 10);
    EXPECT_EQ(at_fixed.steps, 0u);
    EXPECT_EQ(at_fixed.fixed_point, std::optional<Index>(0));
}

TEST(Iterate, CycleAndExhaustion) {
    auto s = make_line_space<Q>({"x", "y"}, {Q(0), Q(1)});
    SelfMap swap({1, 0}, 2);
    auto tr = iterate(s, swap, 0, 10);
    EXPECT_EQ(tr.outcome, Outcome::cycle_detected);
    EXPECT_FALSE(tr.fixed_point.has_value());
    EXPECT_EQ(tr.monotonicity_violation, std::optional<std::size_t>(0));
    auto ex = iterate(line3(), line3_map(), 2, 1);
    EXPECT_EQ(ex.outcome, Outcome::max_steps_exhausted);
    EXPECT_THROW(iterate(line3(), line3_map(), 3, 1), precondition_error);
}

TEST(CheckAssumptions, LineWithTotalRelation) {
    FptReport r = check_fpt_assumptions(line3(), line3_map(), Relation::total(3));
    EXPECT_TRUE(r.existence_hypotheses());
    EXPECT_TRUE(r.uniqueness_hypotheses());
    EXPECT_EQ(r.start, std::optional<Index>(0));
}

TEST(CheckAssumptions, SinglePairRelation) {
    // R = {(c, b)}: (ii) at c, but (b, a) is not in R so (iii) fails.
    FptReport r = check_fpt_assumptions(line3(), line3_map(), Relation(3, {{2, 1}}));
    EXPECT_TRUE(r.assumption("i").holds);
    EXPECT_TRUE(r.assumption("ii").holds);
    EXPECT_EQ(r.start, std::optional<Index>(2));
    EXPECT_FALSE(r.assumption("iii").holds);
    EXPECT_TRUE(r.assumption("iv").holds);
    EXPECT_FALSE(r.assumption("vi").holds);
}

TEST(CheckAssumptions, IdentityFailsMeirKeeler) {
    auto s = make_line_space<Q>({"x", "y"}, {Q(0), Q(1)});
    FptReport r = check_fpt_assumptions(s, SelfMap::identity(2), Relation::total(2));
    EXPECT_FALSE(r.assumption("iv").holds);
    EXPECT_TRUE(r.assumption("v").holds);
    EXPECT_TRUE(r.assumption("vii").holds);
}

TEST(CheckAssumptions, EmptyRelation) {
    FptReport r = check_fpt_assumptions(line3(), line3_map(), Relation(3, {}));
    EXPECT_TRUE(r.assumption("iv").holds);
    EXPECT_FALSE(r.assumption("ii").holds);
    EXPECT_FALSE(r.start.has_value());
    FptReport s = solve(line3(), line3_map(), Relation(3, {}));
    EXPECT_FALSE(s.trajectory.has_value());
}

TEST(Uniqueness, NotCertifiedWithoutFullComparability) {
    // Two fixed points on the discrete order; MK holds vacuously off the diagonal.
    auto s = make_line_space<Q>({"x", "y"}, {Q(0), Q(1)});
    Relation diag(2, {{0, 0}, {1, 1}});
    FptReport r = solve(s, SelfMap::identity(2), diag);
    ASSERT_TRUE(r.fixed_point.has_value());
    EXPECT_TRUE(r.existence_hypotheses());
    EXPECT_FALSE(r.assumption("vi").holds);
    EXPECT_EQ(r.uniqueness.status, Uniqueness::not_certified);
}

TEST(Uniqueness, TwoFixedPointsWhenMeirKeelerFails) {
    auto s = make_line_space<Q>({"x", "y"}, {Q(0), Q(1)});
    UniquenessResult u = certify_uniqueness(s, SelfMap::identity(2), Relation::total(2), 0, 0);
    EXPECT_EQ(u.status, Uniqueness::not_unique);
    EXPECT_EQ(u.fixed_points.size(), 2u);
    EXPECT_THROW(certify_uniqueness(line3(), line3_map(), Relation::total(3), 2, 0), precondition_error);
}

TEST(Uniqueness, LineIsUnique) {
    FptReport r = solve(line3(), line3_map(), Relation::total(3), {std::optional<Index>(2), std::nullopt});
    EXPECT_EQ(r.fixed_point, std::optional<Index>(0));
    EXPECT_EQ(r.uniqueness.status, Uniqueness::unique);
}

TEST(Convergence, RandomInstancesWithinDistanceBound) {
    std::mt19937_64 rng(41);
    int accepted = 0, unique_checked = 0;
    for (int trial = 0; trial < 1500; ++trial) {
        FiniteCase c = random_fixed_point_case(rng);
        FptReport r = solve(c.space, c.map, c.rel);
        if (!r.existence_hypotheses()) continue;
        ++accepted;
        ASSERT_TRUE(r.trajectory.has_value()) << c.family;
        const auto& tr = *r.trajectory;
        ASSERT_EQ(tr.outcome, Outcome::fixed_point_reached) << c.family << " trial " << trial;
        EXPECT_LE(tr.steps, distinct_positive_orbit_distances(c.space, tr.states)) << c.family;
        for (std::size_t i = 0; i + 1 < tr.step_dists.size(); ++i)
            if (tr.step_dists[i] > 0) { EXPECT_LT(tr.step_dists[i + 1], tr.step_dists[i]) << c.family; }
        // Every orbit point stays R-related to its successor.
        for (std::size_t i = 0; i + 1 < tr.states.size(); ++i)
            EXPECT_TRUE(c.rel.contains(tr.states[i], tr.states[i + 1])) << c.family;
        if (r.uniqueness_hypotheses()) {
            ++unique_checked;
            EXPECT_EQ(r.uniqueness.status, Uniqueness::unique) << c.family;
            int comparable = 0;
            for (Index y : all_fixed_points(c.map)) comparable += c.rel.contains(*r.start, y);
            EXPECT_EQ(comparable, 1) << c.family;
        }
    }
    EXPECT_GT(accepted, 500);
    EXPECT_GT(unique_checked, 100);
}

TEST(PreCauchy, RandomWalksAgainstExhaustiveScan) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        Walk w = random_walk(rng);
        auto d = [&](Index i, Index j) { return w.dist(i, j); };
        Index j = pre_cauchy_witness<Q>(d, w.l, w.m, w.eps, w.eta);
        const Q lo = w.eps + 2 * w.eta / 3, hi = w.eps + w.eta;
        EXPECT_GT(j, w.l);
        EXPECT_LT(j, w.m);
        EXPECT_GE(d(w.l, j), lo) << trial;
        EXPECT_LT(d(w.l, j), hi) << trial;
        Index first = w.m;
        for (Index i = w.l + 1; i < w.m && first == w.m; ++i)
            if (d(w.l, i) >= lo) first = i;
        EXPECT_EQ(j, first) << trial;
    }
}

TEST(PreCauchy, PreconditionErrorsNameTheClause) {
    auto d = [](Index i, Index j) { return Q(i > j ? i - j : j - i); };
    auto message = [&](Index l, Index m, Q eps, Q eta) {
        try {
            (void)pre_cauchy_witness<Q>(d, l, m, eps, eta);
        } catch (const precondition_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message(2, 2, Q(1), Q(1)).find("l < m"), std::string::npos);
    EXPECT_NE(message(0, 5, Q(1), Q(2)).find("eta <= eps"), std::string::npos);
    EXPECT_NE(message(0, 5, Q(1), Q(0)).find("eta > 0"), std::string::npos);
    // Unit steps are not below eta/3 = 1/3.
    EXPECT_NE(message(0, 5, Q(1), Q(1)).find("eta/3"), std::string::npos);
    // m = l + 1 can never meet both distance clauses.
    auto near = [](Index i, Index j) { return i == j ? Q(0) : Q(1, 10); };
    EXPECT_THROW(pre_cauchy_witness<Q>(near, 0, 1, Q(1), Q(1)), precondition_error);
}

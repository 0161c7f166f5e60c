#include <gtest/gtest.h>

#include <cmath>

#include "kmlmp/core_model.hpp"
#include "support.hpp"

using namespace kmlmp;
using namespace testsupport;

TEST(PairCost, ThreeFourFive) {
    EXPECT_DOUBLE_EQ(pair_cost({0, 0}, {3, 4}, Objective::KMedian), 5.0);
    EXPECT_DOUBLE_EQ(pair_cost({0, 0}, {3, 4}, Objective::KMeans), 25.0);
    EXPECT_DOUBLE_EQ(pair_cost({1.5, -2}, {1.5, -2}, Objective::KMeans), 0.0);
    EXPECT_DOUBLE_EQ(pair_cost({1.5, -2}, {1.5, -2}, Objective::KMedian), 0.0);
}

TEST(PairCost, DimensionMismatchThrows) {
    EXPECT_THROW(pair_cost({0, 0}, {1, 2, 3}, Objective::KMeans), std::invalid_argument);
}

TEST(PairCost, KMeansIsSquareOfKMedian) {
    Rng rng(3, 0);
    for (int t = 0; t < 1000; ++t) {
        Point a = random_point(rng, 4, 5.0), b = random_point(rng, 4, 5.0);
        double med = pair_cost(a, b, Objective::KMedian);
        EXPECT_TRUE(close_rel(pair_cost(a, b, Objective::KMeans), med * med, 1e-12));
    }
}

TEST(AssignmentCost, Examples) {
    Instance inst;
    inst.objective = Objective::KMeans;
    inst.clients = {{0, 0}};
    inst.facilities = {{2, 0}, {5, 5}};
    EXPECT_DOUBLE_EQ(assignment_cost(inst, {0}), 4.0);
    EXPECT_THROW(assignment_cost(inst, {}), std::invalid_argument);
    EXPECT_THROW(assignment_cost(inst, {2}), std::out_of_range);
}

TEST(AssignmentCost, AllFacilitiesGivesPerClientMinimum) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        Instance inst = small_instance(s, s % 2 ? Objective::KMeans : Objective::KMedian);
        std::vector<int> all;
        for (std::size_t i = 0; i < inst.m(); ++i) all.push_back(static_cast<int>(i));
        EXPECT_TRUE(close_rel(assignment_cost(inst, all), naive_assignment(inst, (1u << inst.m()) - 1)));
        EXPECT_TRUE(close_rel(assignment_cost(CostMatrix(inst), all), assignment_cost(inst, all)));
    }
}

TEST(AssignmentCost, MonotoneUnderInclusion) {
    std::size_t checks = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Instance inst = small_instance(s, Objective::KMeans, 10, 6);
        CostMatrix c(inst);
        const unsigned full = (1u << inst.m()) - 1;
        for (unsigned T = 1; T <= full; ++T)
            for (unsigned S = T; S; S = (S - 1) & T) {
                std::vector<int> vs, vt;
                for (std::size_t i = 0; i < inst.m(); ++i) {
                    if (S >> i & 1) vs.push_back(static_cast<int>(i));
                    if (T >> i & 1) vt.push_back(static_cast<int>(i));
                }
                EXPECT_LE(assignment_cost(c, vt), assignment_cost(c, vs) + 1e-12);
                ++checks;
            }
    }
    EXPECT_GE(checks, 1000u);
}

// cost(S + x) - cost(S) <= cost(T + x) - cost(T) for S subset of T, x outside T
TEST(AssignmentCost, NegativeSubmodularExhaustive) {
    std::size_t checks = 0;
    for (std::uint64_t s = 0; s < 60; ++s) {
        Instance inst = small_instance(1000 + s, s % 2 ? Objective::KMeans : Objective::KMedian, 10, 6);
        if (inst.m() < 2) continue;
        const unsigned full = (1u << inst.m()) - 1;
        std::vector<double> cost(full + 1, 0.0);
        for (unsigned S = 1; S <= full; ++S) cost[S] = naive_assignment(inst, S);
        for (unsigned T = 1; T <= full; ++T)
            for (unsigned S = T; S; S = (S - 1) & T)
                for (std::size_t x = 0; x < inst.m(); ++x) {
                    if (T >> x & 1) continue;
                    const unsigned b = 1u << x;
                    const double lhs = cost[S | b] - cost[S];
                    const double rhs = cost[T | b] - cost[T];
                    EXPECT_LE(lhs, rhs + 1e-9 * std::max(1.0, cost[S]));
                    ++checks;
                }
    }
    EXPECT_GE(checks, 1000u);
}

TEST(BruteForceOpt, MedianOnALine) {
    Instance inst;
    inst.objective = Objective::KMedian;
    inst.clients = {{0}, {1}, {2}};
    inst.facilities = {{0}, {1}, {2}};
    CenterSet c = brute_force_opt(inst, 1);
    ASSERT_EQ(c.indices, std::vector<int>{1});
    EXPECT_DOUBLE_EQ(c.cost, 2.0);
}

TEST(BruteForceOpt, AllFacilities) {
    Instance inst = small_instance(5, Objective::KMeans);
    CenterSet c = brute_force_opt(inst, static_cast<int>(inst.m()));
    EXPECT_EQ(c.indices.size(), inst.m());
    EXPECT_TRUE(close_rel(c.cost, naive_assignment(inst, (1u << inst.m()) - 1)));
}

TEST(BruteForceOpt, MatchesIndependentEnumerator) {
    Rng rng(11, 0);
    for (int t = 0; t < 200; ++t) {
        Instance inst;
        inst.objective = t % 2 ? Objective::KMeans : Objective::KMedian;
        for (int j = 0; j < 8; ++j) inst.clients.push_back(random_point(rng, 2, 10));
        for (int i = 0; i < 6; ++i) inst.facilities.push_back(random_point(rng, 2, 10));
        for (int k = 1; k <= 6; ++k) {
            CenterSet c = brute_force_opt(inst, k);
            EXPECT_EQ(static_cast<int>(c.indices.size()), k);
            EXPECT_TRUE(close_rel(c.cost, naive_opt(inst, k)));
            EXPECT_TRUE(close_rel(c.cost, assignment_cost(inst, c.indices)));
        }
    }
}

TEST(BruteForceOpt, NoWorseThanAnyKSubset) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Instance inst = small_instance(300 + s, Objective::KMeans, 10, 7);
        for (int k = 1; k <= static_cast<int>(inst.m()); ++k) {
            double opt = brute_force_opt(inst, k).cost;
            for (unsigned mask = 1; mask < (1u << inst.m()); ++mask)
                if (__builtin_popcount(mask) == k) EXPECT_LE(opt, naive_assignment(inst, mask) + 1e-9);
        }
    }
}

TEST(BruteForceOpt, Errors) {
    Instance inst = small_instance(1, Objective::KMeans);
    EXPECT_THROW(brute_force_opt(inst, 0), std::invalid_argument);
    EXPECT_THROW(brute_force_opt(inst, static_cast<int>(inst.m()) + 1), std::invalid_argument);
    Instance big;
    big.clients = {{0.0}};
    for (int i = 0; i < 40; ++i) big.facilities.push_back({double(i + 1)});
    EXPECT_THROW(brute_force_opt(big, 20), BudgetExceeded);
}

TEST(ValidateInstance, FixedPointAtUnitMinimum) {
    Instance inst;
    inst.clients = {{0, 0}, {5, 0}};
    inst.facilities = {{1, 0}, {9, 0}};
    Instance v = validate_instance(inst);
    EXPECT_FALSE(v.degenerate);
    EXPECT_EQ(v.clients, inst.clients);
    EXPECT_EQ(v.facilities, inst.facilities);
    EXPECT_DOUBLE_EQ(v.scale, 1.0);
}

TEST(ValidateInstance, ScaleInvariance) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        Instance inst = small_instance(s, Objective::KMedian);
        Instance twice = inst;
        for (auto& p : twice.clients)
            for (auto& x : p) x *= 2;
        for (auto& p : twice.facilities)
            for (auto& x : p) x *= 2;
        Instance a = validate_instance(inst), b = validate_instance(twice);
        EXPECT_EQ(a.range_flag, b.range_flag);
        EXPECT_EQ(a.degenerate, b.degenerate);
        for (std::size_t j = 0; j < a.n(); ++j)
            for (std::size_t d = 0; d < a.dim(); ++d)
                EXPECT_TRUE(close_rel(a.clients[j][d], b.clients[j][d], 1e-12));
    }
}

TEST(ValidateInstance, CoincidentPairIsDegenerate) {
    Instance inst;
    inst.clients = {{1, 1}, {4, 4}};
    inst.facilities = {{1, 1}, {0, 7}};
    Instance v = validate_instance(inst);
    EXPECT_TRUE(v.degenerate);
    EXPECT_EQ(v.clients, inst.clients);
}

TEST(ValidateInstance, ShapeErrors) {
    Instance inst;
    EXPECT_THROW(validate_instance(inst), std::invalid_argument);
    inst.clients = {{0, 0}};
    inst.facilities = {{0, 0, 1}};
    EXPECT_THROW(validate_instance(inst), std::invalid_argument);
}

TEST(Binomial, SmallValues) {
    EXPECT_EQ(binomial(5, 2), 10.0);
    EXPECT_EQ(binomial(8, 0), 1.0);
    EXPECT_EQ(binomial(3, 4), 0.0);
    EXPECT_EQ(binomial(40, 20), 137846528820.0);
}

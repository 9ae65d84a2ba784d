#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "vascalc/errors.hpp"
#include "vascalc/metrics.hpp"

#include "helpers.hpp"

using namespace vascalc;

namespace {

MaskVolume mask_of(const Dims& dims, const std::vector<std::uint8_t>& bits) {
    return MaskVolume{dims, {1.0, 1.0, 1.0}, bits};
}

}  // namespace

TEST_CASE("confusion counts identical masks as tp and tn only") {
    const MaskVolume m = mask_of({2, 2, 2}, {1, 0, 1, 0, 1, 0, 1, 0});
    const ConfusionCounts c = confusion(m, m);
    CHECK(c == ConfusionCounts{4, 0, 0, 4});
    CHECK(c.total() == 8);
}

TEST_CASE("confusion with an empty prediction puts all truth in fn") {
    const MaskVolume truth = mask_of({5, 1, 1}, {1, 1, 1, 1, 1});
    const MaskVolume pred = mask_of({5, 1, 1}, {0, 0, 0, 0, 0});
    CHECK(confusion(pred, truth) == ConfusionCounts{0, 0, 5, 0});
}

TEST_CASE("confusion on partially overlapping masks") {
    const MaskVolume pred = mask_of({4, 1, 1}, {1, 1, 0, 0});
    const MaskVolume truth = mask_of({4, 1, 1}, {0, 1, 1, 0});
    CHECK(confusion(pred, truth) == ConfusionCounts{1, 1, 1, 1});
}

TEST_CASE("confusion rejects mismatched dims") {
    const MaskVolume a = mask_of({2, 1, 1}, {0, 0});
    const MaskVolume b = mask_of({1, 2, 1}, {0, 0});
    CHECK_THROWS_AS(confusion(a, b), DimsMismatchError);
}

TEST_CASE("iou and dice on a worked example") {
    // overlap 1, union 3
    const ConfusionCounts c{1, 1, 1, 5};
    CHECK(iou(c) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(dice(c) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("disjoint masks score zero, both-empty masks score one") {
    CHECK(iou(ConfusionCounts{0, 3, 4, 10}) == 0.0);
    CHECK(dice(ConfusionCounts{0, 3, 4, 10}) == 0.0);
    CHECK(iou(ConfusionCounts{0, 0, 0, 12}) == 1.0);
    CHECK(dice(ConfusionCounts{0, 0, 0, 12}) == 1.0);
}

TEST_CASE("dice equals 2*iou/(1+iou) on random counts") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<std::uint64_t> dist(0, 1000);
    for (int i = 0; i < 200; ++i) {
        const ConfusionCounts c{dist(rng), dist(rng), dist(rng), dist(rng)};
        const double j = iou(c);
        CHECK(dice(c) == doctest::Approx(2.0 * j / (1.0 + j)).epsilon(1e-12));
    }
}

TEST_CASE("overlap metrics are symmetric in their arguments") {
    std::mt19937 rng(42);
    for (int i = 0; i < 20; ++i) {
        const MaskVolume a = testutil::random_mask(rng, {6, 5, 4}, 0.4);
        const MaskVolume b = testutil::random_mask(rng, {6, 5, 4}, 0.4);
        CHECK(iou(confusion(a, b)) == iou(confusion(b, a)));
        CHECK(dice(confusion(a, b)) == dice(confusion(b, a)));
        CHECK(per_slice_dice_mean(a, b) == per_slice_dice_mean(b, a));
    }
}

TEST_CASE("per-slice dice averages slice scores") {
    // slice 0 agrees exactly, slice 1 is disjoint
    const Dims dims{2, 1, 2};
    const MaskVolume pred = mask_of(dims, {1, 0, 1, 0});
    const MaskVolume truth = mask_of(dims, {1, 0, 0, 1});
    CHECK(per_slice_dice_mean(pred, truth) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("slices empty in both masks count as perfect agreement") {
    const Dims dims{2, 1, 2};
    const MaskVolume pred = mask_of(dims, {1, 1, 0, 0});
    const MaskVolume truth = mask_of(dims, {1, 1, 0, 0});
    CHECK(per_slice_dice_mean(pred, truth) == 1.0);
}

TEST_CASE("ape worked examples") {
    CHECK(ape(100.0, 110.0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(ape(7892.0, 7707.0) == doctest::Approx(2.344).epsilon(1e-3));
    CHECK(ape(50.0, 50.0) == 0.0);
    CHECK_THROWS_AS(ape(0.0, 1.0), InvalidArgumentError);
}

TEST_CASE("mape averages the per-sample errors") {
    const std::vector<double> t{100.0, 200.0};
    const std::vector<double> p{110.0, 180.0};
    CHECK(mape(t, p) == doctest::Approx(10.0).epsilon(1e-12));

    const std::vector<double> one_t{80.0};
    const std::vector<double> one_p{100.0};
    CHECK(mape(one_t, one_p) == doctest::Approx(ape(80.0, 100.0)).epsilon(1e-12));
    CHECK(mape(t, t) == 0.0);
}

TEST_CASE("mape is nonnegative and rejects bad input") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> dist(1.0, 500.0);
    std::vector<double> t(10), p(10);
    for (int round = 0; round < 20; ++round) {
        for (int i = 0; i < 10; ++i) {
            t[static_cast<std::size_t>(i)] = dist(rng);
            p[static_cast<std::size_t>(i)] = dist(rng);
        }
        CHECK(mape(t, p) >= 0.0);
    }
    const std::vector<double> short_p{1.0};
    CHECK_THROWS_AS(mape(t, short_p), InvalidArgumentError);
    CHECK_THROWS_AS(mape(std::vector<double>{}, std::vector<double>{}), InvalidArgumentError);
    const std::vector<double> with_zero{1.0, 0.0};
    const std::vector<double> any{1.0, 1.0};
    CHECK_THROWS_AS(mape(with_zero, any), InvalidArgumentError);
}

TEST_CASE("r_squared basics") {
    const std::vector<double> y{1.0, 2.0, 3.0, 4.0};
    CHECK(r_squared(y, y) == 1.0);

    // predicting the mean makes RSS = TSS
    const std::vector<double> mean_pred{2.5, 2.5, 2.5, 2.5};
    CHECK(r_squared(y, mean_pred) == doctest::Approx(0.0).epsilon(1e-12));

    const std::vector<double> t{1.0, 2.0, 3.0};
    const std::vector<double> p{1.1, 1.9, 3.2};
    CHECK(r_squared(t, p) == doctest::Approx(0.97).epsilon(1e-9));
}

TEST_CASE("r_squared validation") {
    const std::vector<double> constant{5.0, 5.0, 5.0};
    const std::vector<double> p{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(r_squared(constant, p), InvalidArgumentError);
    const std::vector<double> single{1.0};
    CHECK_THROWS_AS(r_squared(single, single), InvalidArgumentError);
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(r_squared(two, single), InvalidArgumentError);
}

TEST_CASE("bce worked values") {
    const std::vector<double> y1{1.0};
    const std::vector<double> sure{1.0};
    CHECK(bce(y1, sure) <= 1e-6);

    const std::vector<double> half{0.5};
    CHECK(bce(y1, half) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const std::vector<double> y{0.0, 1.0};
    const std::vector<double> p{0.5, 0.5};
    CHECK(bce(y, p) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("bce falls as the prediction approaches the label") {
    const std::vector<double> y{1.0};
    double prev = bce(y, std::vector<double>{0.1});
    for (double q : {0.3, 0.5, 0.7, 0.9, 0.99}) {
        const double cur = bce(y, std::vector<double>{q});
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("bce validation") {
    const std::vector<double> y{1.0};
    CHECK_THROWS_AS(bce(std::vector<double>{0.5}, y), InvalidArgumentError);
    CHECK_THROWS_AS(bce(y, std::vector<double>{1.5}), InvalidArgumentError);
    CHECK_THROWS_AS(bce(y, std::vector<double>{-0.1}), InvalidArgumentError);
    CHECK_THROWS_AS(bce(y, std::vector<double>{0.5, 0.5}), InvalidArgumentError);
    CHECK_THROWS_AS(bce(std::vector<double>{}, std::vector<double>{}), InvalidArgumentError);
}

TEST_CASE("jaccard loss endpoints and a worked value") {
    const std::vector<double> a{1.0, 0.0, 1.0};
    CHECK(jaccard_loss(a, a) == doctest::Approx(0.0).epsilon(1e-12));

    const std::vector<double> t{1.0, 0.0};
    const std::vector<double> d{0.0, 1.0};
    CHECK(jaccard_loss(t, d) == doctest::Approx(1.0).epsilon(1e-12));

    // intersection 0.5, union 1 + 1 - 0.5
    const std::vector<double> p{0.5, 0.5};
    CHECK(jaccard_loss(t, p) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const std::vector<double> z{0.0, 0.0};
    CHECK(jaccard_loss(z, z) == 0.0);
}

TEST_CASE("regression fit recovers an exact line") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] + 1.0;
    const RegressionFit f = regression_fit(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.n == 5);
}

TEST_CASE("regression fit conventions and validation") {
    const std::vector<double> x{0.0, 1.0, 2.0};
    const std::vector<double> flat{3.0, 3.0, 3.0};
    const RegressionFit f = regression_fit(x, flat);
    CHECK(f.slope == 0.0);
    CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.r == 0.0);

    CHECK_THROWS_AS(regression_fit(flat, x), InvalidArgumentError);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(regression_fit(one, one), InvalidArgumentError);
    CHECK_THROWS_AS(regression_fit(x, one), InvalidArgumentError);
}

TEST_CASE("regression r_squared is r*r on noisy data") {
    std::mt19937 rng(44);
    std::uniform_real_distribution<double> noise(-5.0, 5.0);
    std::vector<double> x(30), y(30);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = static_cast<double>(i);
        y[i] = 1.7 * x[i] - 4.0 + noise(rng);
    }
    const RegressionFit f = regression_fit(x, y);
    CHECK(f.r_squared == doctest::Approx(f.r * f.r).epsilon(1e-12));
    CHECK(f.r > 0.9);
}

TEST_CASE("kfold split sizes for 11 ids and k=4") {
    std::vector<std::string> ids;
    for (int i = 0; i < 11; ++i) ids.push_back("case" + std::to_string(i));
    const FoldPlan plan = kfold_split(ids, 4, 9);
    REQUIRE(plan.folds.size() == 4);
    CHECK(plan.folds[0].test_ids.size() == 3);
    CHECK(plan.folds[1].test_ids.size() == 3);
    CHECK(plan.folds[2].test_ids.size() == 3);
    CHECK(plan.folds[3].test_ids.size() == 2);
    for (const auto& fold : plan.folds)
        CHECK(fold.train_ids.size() + fold.test_ids.size() == ids.size());
}

TEST_CASE("kfold with as many folds as ids holds out one each") {
    const std::vector<std::string> ids{"a", "b", "c"};
    const FoldPlan plan = kfold_split(ids, 3, 1);
    REQUIRE(plan.folds.size() == 3);
    std::set<std::string> held;
    for (const auto& fold : plan.folds) {
        CHECK(fold.test_ids.size() == 1);
        CHECK(fold.train_ids.size() == 2);
        held.insert(fold.test_ids[0]);
    }
    CHECK(held == std::set<std::string>{"a", "b", "c"});
}

TEST_CASE("kfold is deterministic in the seed") {
    std::vector<std::string> ids;
    for (int i = 0; i < 20; ++i) ids.push_back(std::to_string(i));
    const FoldPlan a = kfold_split(ids, 5, 123);
    const FoldPlan b = kfold_split(ids, 5, 123);
    REQUIRE(a.folds.size() == b.folds.size());
    for (std::size_t f = 0; f < a.folds.size(); ++f) {
        CHECK(a.folds[f].test_ids == b.folds[f].test_ids);
        CHECK(a.folds[f].train_ids == b.folds[f].train_ids);
    }
}

TEST_CASE("kfold partitions and complements on random shapes") {
    std::mt19937 rng(45);
    std::uniform_int_distribution<int> n_dist(2, 40);
    for (int round = 0; round < 100; ++round) {
        const int n = n_dist(rng);
        std::uniform_int_distribution<int> k_dist(2, n);
        const int k = k_dist(rng);
        std::vector<std::string> ids;
        for (int i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));

        const FoldPlan plan = kfold_split(ids, k, static_cast<std::uint64_t>(round));
        REQUIRE(plan.folds.size() == static_cast<std::size_t>(k));

        std::vector<std::string> all_test;
        std::size_t min_sz = ids.size(), max_sz = 0;
        for (const auto& fold : plan.folds) {
            min_sz = std::min(min_sz, fold.test_ids.size());
            max_sz = std::max(max_sz, fold.test_ids.size());
            all_test.insert(all_test.end(), fold.test_ids.begin(), fold.test_ids.end());

            std::set<std::string> test_set(fold.test_ids.begin(), fold.test_ids.end());
            for (const auto& id : fold.train_ids) CHECK(test_set.count(id) == 0);

            std::set<std::string> fold_union(fold.train_ids.begin(), fold.train_ids.end());
            fold_union.insert(fold.test_ids.begin(), fold.test_ids.end());
            CHECK(fold_union == std::set<std::string>(ids.begin(), ids.end()));
        }
        CHECK(max_sz - min_sz <= 1);

        std::sort(all_test.begin(), all_test.end());
        std::vector<std::string> sorted_ids(ids);
        std::sort(sorted_ids.begin(), sorted_ids.end());
        CHECK(all_test == sorted_ids);
    }
}

TEST_CASE("kfold validation") {
    const std::vector<std::string> ids{"a", "b", "c"};
    CHECK_THROWS_AS(kfold_split(ids, 1, 0), InvalidArgumentError);
    CHECK_THROWS_AS(kfold_split(ids, 4, 0), InvalidArgumentError);
    CHECK_THROWS_AS(kfold_split({}, 2, 0), InvalidArgumentError);
}

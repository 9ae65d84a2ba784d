#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vascalc/types.hpp"

namespace vascalc {

/// Probability clamp applied before the logarithms in bce().
inline constexpr double kBceEpsilon = 1e-7;

/// Voxel-wise agreement counts between a predicted and a reference mask.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    [[nodiscard]] std::uint64_t total() const { return tp + fp + fn + tn; }
    bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(const MaskVolume& pred, const MaskVolume& truth);

/// tp / (tp + fp + fn). When both masks are empty (tp+fp+fn = 0) the
/// convention is 1.0: two correctly empty slices agree perfectly.
double iou(const ConfusionCounts& c);

/// 2*tp / (2*tp + fp + fn), same empty-overlap convention as iou().
double dice(const ConfusionCounts& c);

/// Dice computed slice by slice and averaged over all slices. Slices empty
/// in both masks contribute 1.0; slices empty in exactly one contribute 0.
double per_slice_dice_mean(const MaskVolume& pred, const MaskVolume& truth);

/// |y_true - y_pred| / y_true * 100. Throws on zero y_true.
double ape(double y_true, double y_pred);

/// Mean of per-sample ape over paired vectors.
double mape(std::span<const double> y_true, std::span<const double> y_pred);

/// 1 - RSS/TSS. Throws when y_true is constant (TSS = 0) or length < 2.
double r_squared(std::span<const double> y_true, std::span<const double> y_pred);

/// Mean binary cross entropy with natural logarithms; predicted
/// probabilities are clamped into [kBceEpsilon, 1 - kBceEpsilon].
double bce(std::span<const double> y, std::span<const double> y_prob);

/// 1 - soft-IOU where soft-IOU = sum(t*p) / (sum(t) + sum(p) - sum(t*p));
/// two all-zero vectors give loss 0.
double jaccard_loss(std::span<const double> truth_prob, std::span<const double> pred_prob);

/// Ordinary least squares fit plus the Pearson correlation, reported side
/// by side: r and r_squared = r*r are both carried because agreement is
/// quoted sometimes as one, sometimes as the other.
struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// Throws when fewer than 2 points or x is constant. A constant y yields
/// slope 0 and, by convention, r = 0.
RegressionFit regression_fit(std::span<const double> x, std::span<const double> y);

/// One cross-validation plan: per fold, the held-out test ids and the
/// complementary training ids. Test sets partition the id list.
struct FoldPlan {
    struct Fold {
        std::vector<std::string> train_ids;
        std::vector<std::string> test_ids;
    };
    std::vector<Fold> folds;
};

/// Deterministic k-fold split: a seeded shuffle followed by contiguous test
/// chunks as equal as possible, larger chunks first (11 ids, k=4 gives test
/// sizes 3,3,3,2). The shuffle is hand-rolled so the same seed produces the
/// same plan on every platform.
FoldPlan kfold_split(const std::vector<std::string>& ids, int k, std::uint64_t seed);

}  // namespace vascalc

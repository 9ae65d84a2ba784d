#include "vascalc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vascalc/rng.hpp"

namespace vascalc {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw InvalidArgumentError(std::string(what) + ": length mismatch, " +
                                   std::to_string(a) + " vs " + std::to_string(b));
    }
}

double overlap_ratio(std::uint64_t numer, std::uint64_t denom) {
    if (denom == 0) return 1.0;  // both masks empty
    return static_cast<double>(numer) / static_cast<double>(denom);
}

}  // namespace

ConfusionCounts confusion(const MaskVolume& pred, const MaskVolume& truth) {
    require_same_dims(pred.dims, truth.dims, "confusion");
    std::uint64_t tp = 0, fp = 0, fn = 0;
    const auto n = static_cast<std::int64_t>(pred.bits.size());
#pragma omp parallel for reduction(+ : tp, fp, fn) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const bool p = pred.bits[k] != 0;
        const bool t = truth.bits[k] != 0;
        tp += p && t;
        fp += p && !t;
        fn += !p && t;
    }
    const std::uint64_t total = pred.dims.total();
    return ConfusionCounts{tp, fp, fn, total - tp - fp - fn};
}

double iou(const ConfusionCounts& c) { return overlap_ratio(c.tp, c.tp + c.fp + c.fn); }

double dice(const ConfusionCounts& c) {
    return overlap_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
}

double per_slice_dice_mean(const MaskVolume& pred, const MaskVolume& truth) {
    require_same_dims(pred.dims, truth.dims, "per_slice_dice_mean");
    const int nz = pred.dims.nz;
    const std::size_t sxy = pred.dims.slice_size();
    std::vector<double> slice_dice(static_cast<std::size_t>(nz));
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < nz; ++z) {
        const std::size_t off = static_cast<std::size_t>(z) * sxy;
        std::uint64_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < sxy; ++i) {
            const bool p = pred.bits[off + i] != 0;
            const bool t = truth.bits[off + i] != 0;
            tp += p && t;
            fp += p && !t;
            fn += !p && t;
        }
        slice_dice[static_cast<std::size_t>(z)] = overlap_ratio(2 * tp, 2 * tp + fp + fn);
    }
    // Fixed-order summation keeps the mean identical for any thread count.
    double sum = 0.0;
    for (double d : slice_dice) sum += d;
    return sum / static_cast<double>(nz);
}

double ape(double y_true, double y_pred) {
    if (y_true == 0.0) {
        throw InvalidArgumentError("ape: y_true must be nonzero");
    }
    return std::abs(y_true - y_pred) / y_true * 100.0;
}

double mape(std::span<const double> y_true, std::span<const double> y_pred) {
    require_same_length(y_true.size(), y_pred.size(), "mape");
    if (y_true.empty()) {
        throw InvalidArgumentError("mape: need at least one sample");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 0.0) {
            throw InvalidArgumentError("mape: y_true element " + std::to_string(i) + " is zero");
        }
        sum += ape(y_true[i], y_pred[i]);
    }
    return sum / static_cast<double>(y_true.size());
}

double r_squared(std::span<const double> y_true, std::span<const double> y_pred) {
    require_same_length(y_true.size(), y_pred.size(), "r_squared");
    if (y_true.size() < 2) {
        throw InvalidArgumentError("r_squared: need at least 2 samples");
    }
    const double mean =
        std::accumulate(y_true.begin(), y_true.end(), 0.0) / static_cast<double>(y_true.size());
    double rss = 0.0, tss = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        rss += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
        tss += (y_true[i] - mean) * (y_true[i] - mean);
    }
    if (tss == 0.0) {
        throw InvalidArgumentError("r_squared: y_true is constant (TSS = 0)");
    }
    return 1.0 - rss / tss;
}

double bce(std::span<const double> y, std::span<const double> y_prob) {
    require_same_length(y.size(), y_prob.size(), "bce");
    if (y.empty()) {
        throw InvalidArgumentError("bce: need at least one sample");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) {
            throw InvalidArgumentError("bce: labels must be 0 or 1");
        }
        if (!(y_prob[i] >= 0.0 && y_prob[i] <= 1.0)) {
            throw InvalidArgumentError("bce: probabilities must lie in [0, 1]");
        }
        const double p = std::clamp(y_prob[i], kBceEpsilon, 1.0 - kBceEpsilon);
        sum += y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p);
    }
    return -sum / static_cast<double>(y.size());
}

double jaccard_loss(std::span<const double> truth_prob, std::span<const double> pred_prob) {
    require_same_length(truth_prob.size(), pred_prob.size(), "jaccard_loss");
    double inter = 0.0, sum_t = 0.0, sum_p = 0.0;
    for (std::size_t i = 0; i < truth_prob.size(); ++i) {
        if (!(truth_prob[i] >= 0.0 && truth_prob[i] <= 1.0) ||
            !(pred_prob[i] >= 0.0 && pred_prob[i] <= 1.0)) {
            throw InvalidArgumentError("jaccard_loss: values must lie in [0, 1]");
        }
        inter += truth_prob[i] * pred_prob[i];
        sum_t += truth_prob[i];
        sum_p += pred_prob[i];
    }
    const double denom = sum_t + sum_p - inter;
    if (denom == 0.0) return 0.0;  // both all-zero
    return 1.0 - inter / denom;
}

RegressionFit regression_fit(std::span<const double> x, std::span<const double> y) {
    require_same_length(x.size(), y.size(), "regression_fit");
    if (x.size() < 2) {
        throw InvalidArgumentError("regression_fit: need at least 2 points");
    }
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw InvalidArgumentError("regression_fit: x is constant");
    }
    RegressionFit fit;
    fit.n = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r = syy == 0.0 ? 0.0 : sxy / std::sqrt(sxx * syy);
    fit.r_squared = fit.r * fit.r;
    return fit;
}

FoldPlan kfold_split(const std::vector<std::string>& ids, int k, std::uint64_t seed) {
    if (k < 2) {
        throw InvalidArgumentError("kfold_split: k must be >= 2");
    }
    if (static_cast<std::size_t>(k) > ids.size()) {
        throw InvalidArgumentError("kfold_split: k = " + std::to_string(k) + " exceeds " +
                                   std::to_string(ids.size()) + " ids");
    }
    std::vector<std::string> shuffled = ids;
    SplitMix64 rng(seed);
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next() % (i + 1));
        std::swap(shuffled[i], shuffled[j]);
    }

    const std::size_t n = shuffled.size();
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t remainder = n % static_cast<std::size_t>(k);

    FoldPlan plan;
    std::size_t pos = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t sz = base + (static_cast<std::size_t>(f) < remainder ? 1 : 0);
        FoldPlan::Fold fold;
        fold.test_ids.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(pos),
                             shuffled.begin() + static_cast<std::ptrdiff_t>(pos + sz));
        fold.train_ids.reserve(n - sz);
        for (std::size_t i = 0; i < n; ++i) {
            if (i < pos || i >= pos + sz) fold.train_ids.push_back(shuffled[i]);
        }
        plan.folds.push_back(std::move(fold));
        pos += sz;
    }
    return plan;
}

}  // namespace vascalc

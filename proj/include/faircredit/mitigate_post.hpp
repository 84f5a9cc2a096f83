#pragma once

// Post-processing bias mitigation: adjusts a fitted classifier's outputs
// using only probabilities, true labels and protected flags. Post-processors
// never see features, which this interface enforces by shape.
//
//  - reject option classification: inside a critical probability band around
//    the decision threshold, unprivileged instances are labeled favorable
//    and privileged ones unfavorable
//  - calibrated equalized odds: the better-off group's probabilities are
//    mixed with its base-rate predictor until the chosen generalized cost
//    matches across groups

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "faircredit/metrics.hpp"

namespace faircredit {

// ---------------------------------------------------------------------------
// Reject option classification

enum class RocConstraint { spd, aod, eod };

inline RocConstraint parse_roc_constraint(const std::string& s) {
    if (s == "spd") return RocConstraint::spd;
    if (s == "aod") return RocConstraint::aod;
    if (s == "eod") return RocConstraint::eod;
    throw std::invalid_argument("roc: unknown constraint: " + s);
}

struct RocSearchGrid {
    std::vector<double> thresholds;
    std::vector<double> margins;

    // 99 base thresholds x 13 margins; fine enough that the base threshold
    // can sit at the balanced-accuracy optimum while the margin handles the
    // fairness constraint.
    static RocSearchGrid standard() {
        RocSearchGrid g;
        for (int i = 1; i <= 99; ++i) g.thresholds.push_back(i / 100.0);
        for (int i = 0; i < 13; ++i) g.margins.push_back(0.01 + 0.02 * i);
        return g;
    }
};

// The classical formulation prices in-region relabeling through asymmetric
// misclassification costs L(deprived +,-) = L(favored -,+) = theta/(1-theta);
// a wider critical region corresponds to a larger trade-off coefficient
// theta. Operationally the policy is the (threshold, margin) pair.
struct RocPolicy {
    RocConstraint constraint = RocConstraint::spd;
    double threshold = 0.5;
    double margin = 0.0;       // critical region is [threshold - margin, threshold + margin]
    bool fitted = false;
    bool feasible = false;     // constraint metric landed inside its interval
    double fit_metric = 0.0;   // constraint metric achieved on the fitting data
    double fit_bacc = 0.0;
};

inline std::vector<int> roc_apply(const RocPolicy& policy, const std::vector<double>& probabilities,
                                  const std::vector<int>& protected_flags) {
    if (!policy.fitted) throw std::runtime_error("roc_apply: policy not fitted");
    if (!(policy.margin > 0.0 && policy.margin < 0.5))
        throw std::invalid_argument("roc_apply: margin must lie inside (0, 0.5)");
    if (probabilities.size() != protected_flags.size())
        throw std::invalid_argument("roc_apply: length mismatch");
    std::vector<int> labels(probabilities.size());
    const double lo = policy.threshold - policy.margin;
    const double hi = policy.threshold + policy.margin;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = probabilities[i];
        if (p >= lo && p <= hi)  // closed region boundaries
            labels[i] = protected_flags[i] == 0 ? 1 : 0;
        else
            labels[i] = p >= policy.threshold ? 1 : 0;
    }
    return labels;
}

// Selection: maximize balanced accuracy subject to the constraint metric
// lying inside its fairness interval on the fitting data. Near-tied
// candidates resolve to the smallest margin (fewest relabeled instances),
// which generalizes better than the raw argmax on small validation sets.
inline RocPolicy roc_fit(const std::vector<double>& probabilities, const std::vector<int>& y_true,
                         const std::vector<int>& protected_flags, RocConstraint constraint,
                         const RocSearchGrid& grid = RocSearchGrid::standard(),
                         const FairnessIntervals& intervals = {}, double bacc_tie_tolerance = 0.01) {
    const std::size_t n = probabilities.size();
    if (y_true.size() != n || protected_flags.size() != n || n == 0)
        throw std::invalid_argument("roc_fit: bad input lengths");
    bool g0 = false, g1 = false;
    for (int g : protected_flags) (g ? g1 : g0) = true;
    if (!g0 || !g1) throw MetricError("roc_fit: empty validation group");

    struct Candidate {
        double threshold, margin, metric, bacc;
    };
    std::vector<Candidate> feasible;
    Candidate fallback{0.5, 0.01, 1e300, -1.0};
    double max_bacc = -1.0;

    for (double t : grid.thresholds) {
        for (double m : grid.margins) {
            if (!(m > 0.0 && m < 0.5)) continue;
            RocPolicy trial;
            trial.constraint = constraint;
            trial.threshold = t;
            trial.margin = m;
            trial.fitted = true;
            const auto labels = roc_apply(trial, probabilities, protected_flags);
            std::vector<double> pred(labels.begin(), labels.end());
            const auto conf = confusion_by_group(y_true, pred, protected_flags);
            const auto rates = group_rates(conf);
            double metric = 0;
            switch (constraint) {
                case RocConstraint::spd: metric = spd(rates); break;
                case RocConstraint::aod: metric = aod(rates); break;
                case RocConstraint::eod: metric = eod(rates); break;
            }
            const double bacc = balanced_accuracy(conf);
            if (metric > intervals.diff_lo && metric < intervals.diff_hi) {
                feasible.push_back({t, m, metric, bacc});
                max_bacc = std::max(max_bacc, bacc);
            } else if (std::fabs(metric) < std::fabs(fallback.metric)) {
                fallback = {t, m, metric, bacc};
            }
        }
    }

    RocPolicy best;
    best.constraint = constraint;
    best.fitted = true;
    if (!feasible.empty()) {
        best.feasible = true;
        const Candidate* chosen = nullptr;
        for (const auto& c : feasible) {
            if (c.bacc < max_bacc - bacc_tie_tolerance) continue;
            if (!chosen || c.margin < chosen->margin ||
                (c.margin == chosen->margin && c.bacc > chosen->bacc))
                chosen = &c;
        }
        best.threshold = chosen->threshold;
        best.margin = chosen->margin;
        best.fit_metric = chosen->metric;
        best.fit_bacc = chosen->bacc;
    } else {
        best.threshold = fallback.threshold;
        best.margin = fallback.margin;
        best.fit_metric = fallback.metric;
        best.fit_bacc = fallback.bacc;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Calibrated equalized odds

enum class CeoCost { fnr, fpr, weighted };

inline CeoCost parse_ceo_cost(const std::string& s) {
    if (s == "fnr") return CeoCost::fnr;
    if (s == "fpr") return CeoCost::fpr;
    if (s == "weighted") return CeoCost::weighted;
    throw std::invalid_argument("ceo: unknown cost constraint: " + s);
}

struct CeoPolicy {
    CeoCost cost = CeoCost::weighted;
    double mix_rate[2] = {0.0, 0.0};   // per group
    double base_rate[2] = {0.0, 0.0};
    bool fitted = false;
    double calibration_gap = 0.0;      // diagnostic from the fitting data
    bool calibration_warning = false;  // gap above 0.2
};

namespace detail {

// generalized cost of a probability vector restricted to one group
inline double ceo_cost_of(CeoCost kind, const std::vector<double>& p, const std::vector<int>& y,
                          const std::vector<int>& groups, int g) {
    double fn_sum = 0, fn_cnt = 0, fp_sum = 0, fp_cnt = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (groups[i] != g) continue;
        if (y[i] == 1) {
            fn_sum += 1.0 - p[i];
            fn_cnt += 1;
        } else {
            fp_sum += p[i];
            fp_cnt += 1;
        }
    }
    switch (kind) {
        case CeoCost::fnr:
            if (fn_cnt == 0) throw MetricError("ceo: a group has no positives");
            return fn_sum / fn_cnt;
        case CeoCost::fpr:
            if (fp_cnt == 0) throw MetricError("ceo: a group has no negatives");
            return fp_sum / fp_cnt;
        case CeoCost::weighted:
            if (fn_cnt == 0 || fp_cnt == 0) throw MetricError("ceo: a group lacks a label class");
            return 0.5 * (fn_sum / fn_cnt + fp_sum / fp_cnt);
    }
    return 0;
}

inline double ceo_trivial_cost(CeoCost kind, double base_rate) {
    switch (kind) {
        case CeoCost::fnr: return 1.0 - base_rate;
        case CeoCost::fpr: return base_rate;
        case CeoCost::weighted: return 0.5;
    }
    return 0;
}

}  // namespace detail

inline CeoPolicy ceo_fit(const std::vector<double>& probabilities, const std::vector<int>& y_true,
                         const std::vector<int>& protected_flags, CeoCost cost) {
    const std::size_t n = probabilities.size();
    if (y_true.size() != n || protected_flags.size() != n || n == 0)
        throw std::invalid_argument("ceo_fit: bad input lengths");
    double cnt[2] = {0, 0}, fav[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        cnt[protected_flags[i]] += 1;
        fav[protected_flags[i]] += y_true[i];
    }
    if (cnt[0] == 0 || cnt[1] == 0) throw MetricError("ceo_fit: empty group");

    CeoPolicy policy;
    policy.cost = cost;
    for (int g = 0; g < 2; ++g) policy.base_rate[g] = fav[g] / cnt[g];

    const auto table = calibration_by_group(probabilities, y_true, protected_flags, 10);
    policy.calibration_gap = table.max_gap;
    policy.calibration_warning = table.max_gap > 0.2;

    const double cost_g[2] = {
        detail::ceo_cost_of(cost, probabilities, y_true, protected_flags, 0),
        detail::ceo_cost_of(cost, probabilities, y_true, protected_flags, 1),
    };
    const int better = cost_g[0] <= cost_g[1] ? 0 : 1;
    const int worse = 1 - better;
    const double trivial = detail::ceo_trivial_cost(cost, policy.base_rate[better]);
    const double denom = trivial - cost_g[better];
    if (std::fabs(denom) < 1e-12)
        throw MetricError("ceo_fit: degenerate group (trivial predictor matches model cost)");
    const double m = (cost_g[worse] - cost_g[better]) / denom;
    policy.mix_rate[better] = std::clamp(m, 0.0, 1.0);
    policy.mix_rate[worse] = 0.0;
    policy.fitted = true;
    return policy;
}

// Deterministic variant: each affected probability moves toward its group
// base rate by the fitted mixing rate. Thresholding happens downstream.
inline std::vector<double> ceo_apply(const CeoPolicy& policy, const std::vector<double>& probabilities,
                                     const std::vector<int>& protected_flags) {
    if (!policy.fitted) throw std::runtime_error("ceo_apply: policy not fitted");
    if (probabilities.size() != protected_flags.size())
        throw std::invalid_argument("ceo_apply: length mismatch");
    std::vector<double> out(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const int g = protected_flags[i];
        const double m = policy.mix_rate[g];
        out[i] = (1.0 - m) * probabilities[i] + m * policy.base_rate[g];
    }
    return out;
}

}  // namespace faircredit

#pragma once

// Fairness, accuracy and profit measures computed from predictions, labels
// and protected flags. Group 0 is the unprivileged (protected) group,
// group 1 the privileged one. Predictions are doubles so that randomized
// classifiers can be scored by their expected confusion counts; hard labels
// are just the 0/1 special case.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "faircredit/core.hpp"

namespace faircredit {

struct MetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroupCounts {
    double tp = 0, fp = 0, tn = 0, fn = 0;
    double size() const { return tp + fp + tn + fn; }
    double positives() const { return tp + fn; }
    double negatives() const { return fp + tn; }
    double accepted() const { return tp + fp; }
};

struct ConfusionByGroup {
    GroupCounts group[2];  // [0] unprivileged, [1] privileged

    GroupCounts pooled() const {
        GroupCounts c;
        c.tp = group[0].tp + group[1].tp;
        c.fp = group[0].fp + group[1].fp;
        c.tn = group[0].tn + group[1].tn;
        c.fn = group[0].fn + group[1].fn;
        return c;
    }
};

inline ConfusionByGroup confusion_by_group(const std::vector<int>& y_true,
                                           const std::vector<double>& y_pred,
                                           const std::vector<int>& protected_flags) {
    const std::size_t n = y_true.size();
    if (y_pred.size() != n || protected_flags.size() != n)
        throw MetricError("confusion_by_group: length mismatch");
    ConfusionByGroup c;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = y_pred[i];
        if (p < 0.0 || p > 1.0) throw MetricError("confusion_by_group: prediction outside [0,1]");
        GroupCounts& g = c.group[protected_flags[i] ? 1 : 0];
        if (y_true[i] == 1) {
            g.tp += p;
            g.fn += 1.0 - p;
        } else {
            g.fp += p;
            g.tn += 1.0 - p;
        }
    }
    if (c.group[0].size() == 0 || c.group[1].size() == 0)
        throw MetricError("confusion_by_group: empty protected group");
    return c;
}

struct GroupRates {
    struct Rates {
        double tpr = std::numeric_limits<double>::quiet_NaN();
        double fpr = std::numeric_limits<double>::quiet_NaN();
        double tnr = std::numeric_limits<double>::quiet_NaN();
        double fnr = std::numeric_limits<double>::quiet_NaN();
        double acceptance = std::numeric_limits<double>::quiet_NaN();
        double base_rate = std::numeric_limits<double>::quiet_NaN();
    };
    Rates group[2];
};

inline GroupRates group_rates(const ConfusionByGroup& c) {
    GroupRates r;
    for (int g = 0; g < 2; ++g) {
        const GroupCounts& gc = c.group[g];
        if (gc.positives() > 0) {
            r.group[g].tpr = gc.tp / gc.positives();
            r.group[g].fnr = gc.fn / gc.positives();
        }
        if (gc.negatives() > 0) {
            r.group[g].fpr = gc.fp / gc.negatives();
            r.group[g].tnr = gc.tn / gc.negatives();
        }
        if (gc.size() > 0) {
            r.group[g].acceptance = gc.accepted() / gc.size();
            r.group[g].base_rate = gc.positives() / gc.size();
        }
    }
    return r;
}

// Statistical parity difference: acceptance(unprivileged) - acceptance(privileged).
inline double spd(const GroupRates& r) {
    if (std::isnan(r.group[0].acceptance) || std::isnan(r.group[1].acceptance))
        throw MetricError("spd: acceptance rate undefined");
    return r.group[0].acceptance - r.group[1].acceptance;
}

// Disparate impact: acceptance(unprivileged) / acceptance(privileged).
inline double di(const GroupRates& r) {
    if (std::isnan(r.group[0].acceptance) || std::isnan(r.group[1].acceptance))
        throw MetricError("di: acceptance rate undefined");
    if (r.group[1].acceptance <= 0.0)
        throw MetricError("di: undefined ratio (zero privileged acceptance)");
    return r.group[0].acceptance / r.group[1].acceptance;
}

// Average odds difference, signed: 1/2 [(FPR_u - FPR_p) + (TPR_u - TPR_p)].
inline double aod(const GroupRates& r) {
    for (int g = 0; g < 2; ++g)
        if (std::isnan(r.group[g].tpr) || std::isnan(r.group[g].fpr))
            throw MetricError("aod: a group lacks a label class");
    return 0.5 * ((r.group[0].fpr - r.group[1].fpr) + (r.group[0].tpr - r.group[1].tpr));
}

// Equal opportunity difference: TPR_u - TPR_p.
inline double eod(const GroupRates& r) {
    if (std::isnan(r.group[0].tpr) || std::isnan(r.group[1].tpr))
        throw MetricError("eod: no positives in a group");
    return r.group[0].tpr - r.group[1].tpr;
}

// Separation: 1/2 |(FPR_u - FPR_p) + (FNR_u - FNR_p)|. Near 0 means the
// error rates separate cleanly from group membership.
inline double separation_sp(const GroupRates& r) {
    for (int g = 0; g < 2; ++g)
        if (std::isnan(r.group[g].fnr) || std::isnan(r.group[g].fpr))
            throw MetricError("separation_sp: a group lacks a label class");
    return 0.5 * std::fabs((r.group[0].fpr - r.group[1].fpr) + (r.group[0].fnr - r.group[1].fnr));
}

// Theil index over per-instance benefits b_i = yhat_i - y_i + 1, with the
// 0 ln 0 = 0 convention. Zero iff every instance receives the same benefit.
inline double theil(const std::vector<int>& y_true, const std::vector<double>& y_pred) {
    const std::size_t n = y_true.size();
    if (y_pred.size() != n || n == 0) throw MetricError("theil: bad input lengths");
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += y_pred[i] - y_true[i] + 1.0;
    mu /= static_cast<double>(n);
    if (mu <= 0.0) throw MetricError("theil: mean benefit is zero");
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double b = (y_pred[i] - y_true[i] + 1.0) / mu;
        if (b > 0.0) t += b * std::log(b);
    }
    return t / static_cast<double>(n);
}

// Equal-width binning over the empirical score range.
inline std::vector<int> bin_scores(const std::vector<double>& scores, int n_bins) {
    if (n_bins < 2) throw MetricError("bin_scores: need at least 2 bins");
    if (scores.empty()) throw MetricError("bin_scores: empty input");
    double lo = scores[0], hi = scores[0];
    for (double s : scores) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    std::vector<int> bins(scores.size(), 0);
    if (hi <= lo) return bins;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        int b = static_cast<int>((scores[i] - lo) / (hi - lo) * n_bins);
        bins[i] = std::min(b, n_bins - 1);
    }
    return bins;
}

// Plug-in mutual information (nats) between discretized scores and the
// protected flag: I = H(bins) + H(group) - H(bins, group).
inline double mutual_information(const std::vector<int>& score_bins,
                                 const std::vector<int>& protected_flags) {
    const std::size_t n = score_bins.size();
    if (n == 0 || protected_flags.size() != n) throw MetricError("mutual_information: bad input");
    int max_bin = 0;
    for (int b : score_bins) {
        if (b < 0) throw MetricError("mutual_information: negative bin");
        max_bin = std::max(max_bin, b);
    }
    const int nb = max_bin + 1;
    std::vector<double> joint(static_cast<std::size_t>(nb) * 2, 0.0);
    std::vector<double> pb(nb, 0.0);
    double pg[2] = {0, 0};
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int g = protected_flags[i] ? 1 : 0;
        joint[static_cast<std::size_t>(score_bins[i]) * 2 + g] += inv;
        pb[score_bins[i]] += inv;
        pg[g] += inv;
    }
    double mi = 0.0;
    for (int b = 0; b < nb; ++b)
        for (int g = 0; g < 2; ++g) {
            const double pj = joint[static_cast<std::size_t>(b) * 2 + g];
            if (pj > 0.0) mi += pj * std::log(pj / (pb[b] * pg[g]));
        }
    return std::max(mi, 0.0);
}

// Per-group reliability table for the calibration-by-group diagnostic.
struct CalibrationTable {
    struct Bin {
        double count = 0;
        double mean_predicted = std::numeric_limits<double>::quiet_NaN();
        double empirical_rate = std::numeric_limits<double>::quiet_NaN();
    };
    std::vector<Bin> group[2];
    double max_gap = 0.0;  // over non-empty bins
};

inline CalibrationTable calibration_by_group(const std::vector<double>& probabilities,
                                             const std::vector<int>& y_true,
                                             const std::vector<int>& protected_flags,
                                             int n_bins = 10) {
    if (n_bins < 2) throw MetricError("calibration_by_group: need at least 2 bins");
    const std::size_t n = probabilities.size();
    if (y_true.size() != n || protected_flags.size() != n || n == 0)
        throw MetricError("calibration_by_group: bad input lengths");
    CalibrationTable table;
    std::vector<double> sum_p[2], sum_y[2], cnt[2];
    for (int g = 0; g < 2; ++g) {
        sum_p[g].assign(n_bins, 0.0);
        sum_y[g].assign(n_bins, 0.0);
        cnt[g].assign(n_bins, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double p = probabilities[i];
        if (p < 0.0 || p > 1.0) throw MetricError("calibration_by_group: probability outside [0,1]");
        const int b = std::min(static_cast<int>(p * n_bins), n_bins - 1);
        const int g = protected_flags[i] ? 1 : 0;
        sum_p[g][b] += p;
        sum_y[g][b] += y_true[i];
        cnt[g][b] += 1.0;
    }
    for (int g = 0; g < 2; ++g) {
        table.group[g].resize(n_bins);
        for (int b = 0; b < n_bins; ++b) {
            auto& bin = table.group[g][b];
            bin.count = cnt[g][b];
            if (cnt[g][b] > 0) {
                bin.mean_predicted = sum_p[g][b] / cnt[g][b];
                bin.empirical_rate = sum_y[g][b] / cnt[g][b];
                table.max_gap = std::max(table.max_gap, std::fabs(bin.mean_predicted - bin.empirical_rate));
            }
        }
    }
    return table;
}

// Mean of sensitivity and specificity, pooled over groups.
inline double balanced_accuracy(const ConfusionByGroup& c) {
    const GroupCounts p = c.pooled();
    if (p.positives() == 0 || p.negatives() == 0)
        throw MetricError("balanced_accuracy: a label class is missing");
    return 0.5 * (p.tp / p.positives() + p.tn / p.negatives());
}

struct ProfitConfig {
    double roi = 0.34;  // return on a correctly accepted good
    double lc = 0.9;    // loss on a wrongly accepted bad

    // ROI derived from loan terms: interest rate x years x early-repayment coefficient.
    static ProfitConfig from_loan_terms(double interest_rate, double years, double erc, double lc = 0.9) {
        ProfitConfig cfg;
        cfg.roi = interest_rate * years * erc;
        cfg.lc = lc;
        cfg.validate();
        return cfg;
    }

    void validate() const {
        if (!(roi > 0)) throw std::invalid_argument("ProfitConfig: ROI must be > 0");
        if (!(lc > 0 && lc <= 1)) throw std::invalid_argument("ProfitConfig: LC must be in (0,1]");
    }
};

inline double profit_from_rates(double good_rate, double bad_rate, const ProfitConfig& cfg = {}) {
    return good_rate * cfg.roi - bad_rate * cfg.lc;
}

// Expected profit per accepted loan: the good/bad shares among accepted
// applications drive returns and losses. 0 when nothing is accepted.
inline double profit(const ConfusionByGroup& c, const ProfitConfig& cfg = {}) {
    const GroupCounts p = c.pooled();
    const double accepted = p.accepted();
    if (accepted <= 0.0) return 0.0;
    return profit_from_rates(p.tp / accepted, p.fp / accepted, cfg);
}

// Fairness intervals (open; boundary values count as unfair).
struct FairnessIntervals {
    double diff_lo = -0.1, diff_hi = 0.1;  // SPD, AOD, EOD
    double di_lo = 0.8, di_hi = 1.25;
    double theil_threshold = 0.15;
};

struct FairnessVerdicts {
    bool di = false, spd = false, aod = false, eod = false, theil = false;
    bool all() const { return di && spd && aod && eod && theil; }
};

struct MetricReport {
    double di = std::numeric_limits<double>::quiet_NaN();
    double spd = std::numeric_limits<double>::quiet_NaN();
    double aod = std::numeric_limits<double>::quiet_NaN();
    double eod = std::numeric_limits<double>::quiet_NaN();
    double separation = std::numeric_limits<double>::quiet_NaN();
    double theil = std::numeric_limits<double>::quiet_NaN();
    double balanced_accuracy = std::numeric_limits<double>::quiet_NaN();
    double profit = std::numeric_limits<double>::quiet_NaN();
    FairnessVerdicts verdicts;
};

inline FairnessVerdicts fairness_verdicts(const MetricReport& r, const FairnessIntervals& iv = {}) {
    auto open = [](double x, double lo, double hi) { return x > lo && x < hi; };
    FairnessVerdicts v;
    v.di = open(r.di, iv.di_lo, iv.di_hi);
    v.spd = open(r.spd, iv.diff_lo, iv.diff_hi);
    v.aod = open(r.aod, iv.diff_lo, iv.diff_hi);
    v.eod = open(r.eod, iv.diff_lo, iv.diff_hi);
    v.theil = r.theil >= 0.0 && r.theil < iv.theil_threshold;
    return v;
}

inline MetricReport compute_report(const std::vector<int>& y_true,
                                   const std::vector<double>& y_pred,
                                   const std::vector<int>& protected_flags,
                                   const ProfitConfig& profit_cfg = {},
                                   const FairnessIntervals& intervals = {}) {
    const ConfusionByGroup c = confusion_by_group(y_true, y_pred, protected_flags);
    const GroupRates r = group_rates(c);
    MetricReport report;
    auto guarded = [](auto&& fn) {
        try {
            return fn();
        } catch (const MetricError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    report.spd = guarded([&] { return spd(r); });
    report.di = guarded([&] { return di(r); });
    report.aod = guarded([&] { return aod(r); });
    report.eod = guarded([&] { return eod(r); });
    report.separation = guarded([&] { return separation_sp(r); });
    report.theil = guarded([&] { return theil(y_true, y_pred); });
    report.balanced_accuracy = guarded([&] { return balanced_accuracy(c); });
    report.profit = profit(c, profit_cfg);
    report.verdicts = fairness_verdicts(report, intervals);
    return report;
}

// One CSV row mirroring the benchmark table layout.
inline const char* metric_report_csv_header() {
    return "processor,type,DI,SPD,AOD,EOD,TI,BAcc,P";
}

inline std::string metric_report_csv_row(const std::string& processor, const std::string& type,
                                         const MetricReport& r, int precision = 4) {
    std::string row = processor + "," + type;
    for (double v : {r.di, r.spd, r.aod, r.eod, r.theil, r.balanced_accuracy, r.profit})
        row += "," + format_double(v, precision);
    return row;
}

inline nlohmann::json metric_report_to_json(const MetricReport& r) {
    return nlohmann::json{
        {"DI", r.di},
        {"SPD", r.spd},
        {"AOD", r.aod},
        {"EOD", r.eod},
        {"separation", r.separation},
        {"TI", r.theil},
        {"BAcc", r.balanced_accuracy},
        {"P", r.profit},
        {"verdicts",
         {{"DI", r.verdicts.di},
          {"SPD", r.verdicts.spd},
          {"AOD", r.verdicts.aod},
          {"EOD", r.verdicts.eod},
          {"TI", r.verdicts.theil}}}};
}

}  // namespace faircredit

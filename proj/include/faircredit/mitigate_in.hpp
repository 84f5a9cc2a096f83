#pragma once

// In-processing bias mitigation: classifiers trained under fairness
// constraints.
//
//  - prejudice remover: logistic regression with a mutual-information
//    regularizer between the protected flag and the predicted probability
//  - exponentiated gradient reduction: saddle-point play between
//    multiplicative-weights constraint multipliers and a cost-sensitive
//    weighted logistic best response, returning a randomized classifier
//  - grid search reduction: one cost-reweighted fit per Lagrange-multiplier
//    grid point, keeping the full trade-off trace

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "faircredit/classifier.hpp"
#include "faircredit/core.hpp"
#include "faircredit/dataset.hpp"

namespace faircredit {

enum class ConstraintKind {
    demographic_parity,
    equalized_odds,
    tpr_difference,
    error_rate_ratio,
    bounded_group_loss,
};

inline ConstraintKind parse_constraint(const std::string& s) {
    if (s == "demographic_parity" || s == "dp") return ConstraintKind::demographic_parity;
    if (s == "equalized_odds" || s == "eo") return ConstraintKind::equalized_odds;
    if (s == "tpr_difference" || s == "tpr") return ConstraintKind::tpr_difference;
    if (s == "error_rate_ratio" || s == "err") return ConstraintKind::error_rate_ratio;
    if (s == "bounded_group_loss" || s == "bgl") return ConstraintKind::bounded_group_loss;
    throw std::invalid_argument("unknown constraint: " + s);
}

inline const char* constraint_name(ConstraintKind c) {
    switch (c) {
        case ConstraintKind::demographic_parity: return "demographic_parity";
        case ConstraintKind::equalized_odds: return "equalized_odds";
        case ConstraintKind::tpr_difference: return "tpr_difference";
        case ConstraintKind::error_rate_ratio: return "error_rate_ratio";
        case ConstraintKind::bounded_group_loss: return "bounded_group_loss";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Prejudice remover

struct PrejudiceConfig {
    double eta = 1.0;       // prejudice-regularizer strength
    double l2 = 1e-3;
    std::size_t max_iter = 2000;
    double tol = 1e-6;

    void validate() const {
        if (!std::isfinite(eta) || eta < 0) throw std::invalid_argument("prejudice: eta must be finite and >= 0");
        if (l2 < 0) throw std::invalid_argument("prejudice: l2 must be >= 0");
    }
};

// Objective = weighted NLL + L2 + eta * PI where PI is the plug-in mutual
// information between the protected flag and the model's favorable
// probability, in the per-group mean-prediction (Bernoulli) form:
//   PI = h(q) - sum_s pi_s h(q_s),  h = Bernoulli entropy,
//   q_s = weighted mean prediction in group s, q = overall.
// Exposed with its analytic gradient for finite-difference checking.
inline double prejudice_objective_grad(const Matrix& X, const std::vector<int>& y,
                                       const std::vector<int>& groups,
                                       const std::vector<double>& w, double l2, double eta,
                                       const std::vector<double>& params,
                                       std::vector<double>* grad_out) {
    const std::size_t n = X.rows(), d = X.cols();
    double loss = weighted_nll_grad(X, y, w, l2, params, grad_out);
    if (eta == 0.0) return loss;

    std::vector<double> p(n);
    double qs[2] = {0, 0}, ws[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = X.row(i);
        double z = params[d];
        for (std::size_t j = 0; j < d; ++j) z += params[j] * xi[j];
        p[i] = sigmoid(z);
        const int g = groups[i];
        qs[g] += w[i] * p[i];
        ws[g] += w[i];
    }
    if (ws[0] <= 0 || ws[1] <= 0) throw DataError("prejudice: empty protected group");
    const double wtot = ws[0] + ws[1];
    for (int g = 0; g < 2; ++g) qs[g] /= ws[g];
    const double q = (ws[0] * qs[0] + ws[1] * qs[1]) / wtot;

    auto clamp01 = [](double x) { return std::min(std::max(x, 1e-9), 1.0 - 1e-9); };
    auto entropy = [](double x) { return -(x * std::log(x) + (1 - x) * std::log(1 - x)); };
    const double qc = clamp01(q), q0 = clamp01(qs[0]), q1 = clamp01(qs[1]);
    const double pi_term = entropy(qc) - (ws[0] / wtot) * entropy(q0) - (ws[1] / wtot) * entropy(q1);
    loss += eta * pi_term;

    if (grad_out) {
        auto logit = [](double x) { return std::log(x / (1 - x)); };
        const double lq = logit(qc), l0 = logit(q0), l1 = logit(q1);
        for (std::size_t i = 0; i < n; ++i) {
            const double lg = groups[i] == 0 ? l0 : l1;
            const double r = eta * (w[i] / wtot) * (lg - lq) * p[i] * (1.0 - p[i]);
            const double* xi = X.row(i);
            for (std::size_t j = 0; j < d; ++j) (*grad_out)[j] += r * xi[j];
            (*grad_out)[d] += r;
        }
    }
    return loss;
}

inline LogisticModel prejudice_remover_fit(const TabularDataset& ds, const PrejudiceConfig& cfg) {
    cfg.validate();
    if (cfg.eta == 0.0) {
        // exactly the plain weighted fit
        TrainConfig tc;
        tc.l2 = cfg.l2;
        tc.max_iter = cfg.max_iter;
        tc.tol = cfg.tol;
        return fit(ds, tc);
    }
    const std::size_t n = ds.size(), d = ds.dim();
    bool has0 = false, has1 = false;
    for (int y : ds.labels) (y ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError("prejudice: degenerate labels");

    LogisticModel model;
    model.config.l2 = cfg.l2;
    model.config.max_iter = cfg.max_iter;
    model.config.tol = cfg.tol;
    model.feature_means.resize(d);
    model.feature_stds.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0;
        for (std::size_t i = 0; i < n; ++i) m += ds.X(i, j);
        m /= static_cast<double>(n);
        double s2 = 0;
        for (std::size_t i = 0; i < n; ++i) s2 += (ds.X(i, j) - m) * (ds.X(i, j) - m);
        const double s = std::sqrt(s2 / static_cast<double>(n));
        model.feature_means[j] = m;
        model.feature_stds[j] = s > 1e-12 ? s : 1.0;
    }
    Matrix Z(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            Z(i, j) = (ds.X(i, j) - model.feature_means[j]) / model.feature_stds[j];

    std::vector<double> params(d + 1, 0.0), grad, trial(d + 1);
    double step = 1.0;
    double loss = prejudice_objective_grad(Z, ds.labels, ds.protected_flags, ds.weights,
                                           cfg.l2, cfg.eta, params, &grad);
    for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        double gmax = 0;
        for (double g : grad) gmax = std::max(gmax, std::fabs(g));
        model.iterations = it;
        if (gmax < cfg.tol) {
            model.converged = true;
            break;
        }
        double drop = -1.0;
        for (int half = 0; half < 50; ++half) {
            for (std::size_t j = 0; j <= d; ++j) trial[j] = params[j] - step * grad[j];
            const double cand = prejudice_objective_grad(Z, ds.labels, ds.protected_flags, ds.weights,
                                                         cfg.l2, cfg.eta, trial, nullptr);
            if (std::isfinite(cand) && cand <= loss) {
                drop = loss - cand;
                params.swap(trial);
                loss = cand;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if (drop < 0.0) break;
        prejudice_objective_grad(Z, ds.labels, ds.protected_flags, ds.weights, cfg.l2, cfg.eta,
                                 params, &grad);
    }
    if (!std::isfinite(loss)) throw DataError("prejudice: divergence");
    model.coefficients.assign(params.begin(), params.begin() + static_cast<long>(d));
    model.intercept = params[d];
    return model;
}

// ---------------------------------------------------------------------------
// Linear constraint moments shared by the reductions

namespace detail {

struct MomentSet {
    // gap_j(h) = sum_i coeff[j][i] * h_i + offset_j(h-independent parts are
    // folded into coeff against the error term); here every gap is linear
    // with zero offset except error-rate gaps which carry a constant.
    std::vector<std::vector<double>> coeff;  // per moment, per instance
    std::vector<double> offset;              // constants (from the 1-h of misclassifying positives)
    std::vector<std::string> names;
};

// Builds the signed-moment coefficients for one constraint family over a
// training set. Every family is expressed as gap_j(h) linear in the
// prediction vector h.
inline MomentSet build_moments(const TabularDataset& ds, ConstraintKind kind, double ratio_bound) {
    const std::size_t n = ds.size();
    double wtot = 0, wg[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        wtot += ds.weights[i];
        wg[ds.protected_flags[i]] += ds.weights[i];
    }

    MomentSet ms;
    auto add_event_moment = [&](const std::vector<char>& in_event, const std::string& name) {
        double we = 0, weg[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_event[i]) continue;
            we += ds.weights[i];
            weg[ds.protected_flags[i]] += ds.weights[i];
        }
        if (we <= 0 || weg[0] <= 0 || weg[1] <= 0)
            throw DataError("reduction: a (group, event) cell is empty");
        for (int g = 0; g < 2; ++g) {
            std::vector<double> c(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (!in_event[i]) continue;
                const double base = ds.weights[i] / we;
                const double grp = ds.protected_flags[i] == g ? ds.weights[i] / weg[g] : 0.0;
                c[i] = grp - base;  // E[h | event, group g] - E[h | event]
            }
            ms.coeff.push_back(std::move(c));
            ms.offset.push_back(0.0);
            ms.names.push_back(name + "/g" + std::to_string(g));
        }
    };

    std::vector<char> all(n, 1), pos(n), neg(n);
    for (std::size_t i = 0; i < n; ++i) {
        pos[i] = ds.labels[i] == 1;
        neg[i] = ds.labels[i] == 0;
    }

    switch (kind) {
        case ConstraintKind::demographic_parity:
            add_event_moment(all, "acc");
            break;
        case ConstraintKind::equalized_odds:
            add_event_moment(pos, "tpr");
            add_event_moment(neg, "fpr");
            break;
        case ConstraintKind::tpr_difference:
            add_event_moment(pos, "tpr");
            break;
        case ConstraintKind::error_rate_ratio: {
            // err_g - r * err, linear in h:
            //   err = sum_i (w_i/W) [h_i (1 - 2 y_i) + y_i]
            for (int g = 0; g < 2; ++g) {
                std::vector<double> c(n, 0.0);
                double offset = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double flip = 1.0 - 2.0 * ds.labels[i];
                    const double grp = ds.protected_flags[i] == g ? ds.weights[i] / wg[g] : 0.0;
                    const double base = ds.weights[i] / wtot;
                    c[i] = flip * (grp - ratio_bound * base);
                    offset += ds.labels[i] * (grp - ratio_bound * base);
                }
                ms.coeff.push_back(std::move(c));
                ms.offset.push_back(offset);
                ms.names.push_back("err/g" + std::to_string(g));
            }
            break;
        }
        case ConstraintKind::bounded_group_loss:
            throw std::invalid_argument("expgrad: bounded group loss belongs to grid search");
    }
    return ms;
}

inline std::vector<double> moment_gaps(const MomentSet& ms, const std::vector<double>& h) {
    std::vector<double> gaps(ms.coeff.size(), 0.0);
    for (std::size_t j = 0; j < ms.coeff.size(); ++j) {
        double s = ms.offset[j];
        const auto& c = ms.coeff[j];
        for (std::size_t i = 0; i < h.size(); ++i) s += c[i] * h[i];
        gaps[j] = s;
    }
    return gaps;
}

// Constant classifier emitting the given side regardless of features.
inline LogisticModel constant_model(std::size_t d, int favorable) {
    LogisticModel m;
    m.coefficients.assign(d, 0.0);
    m.intercept = favorable ? 30.0 : -30.0;
    m.feature_means.assign(d, 0.0);
    m.feature_stds.assign(d, 1.0);
    m.converged = true;
    return m;
}

// Cost-sensitive best response: fit a weighted logistic on targets that flag
// which side lowers the Lagrangian for each instance.
inline LogisticModel best_response(const TabularDataset& ds, const std::vector<double>& delta,
                                   const TrainConfig& oracle_cfg) {
    const std::size_t n = ds.size();
    TabularDataset repriced = ds;
    bool has0 = false, has1 = false;
    for (std::size_t i = 0; i < n; ++i) {
        repriced.labels[i] = delta[i] < 0 ? 1 : 0;
        repriced.weights[i] = std::max(std::fabs(delta[i]), 1e-12);
        (repriced.labels[i] ? has1 : has0) = true;
    }
    if (!has0 || !has1) return constant_model(ds.dim(), has1 ? 1 : 0);
    return fit(repriced, oracle_cfg);
}

}  // namespace detail

// Largest signed moment gap of a prediction vector under a constraint
// family; the quantity the reductions drive below eps.
inline double constraint_violation(const TabularDataset& ds, const std::vector<double>& predictions,
                                   ConstraintKind kind, double ratio_bound = 1.0) {
    const auto ms = detail::build_moments(ds, kind, ratio_bound);
    double v = 0;
    for (double g : detail::moment_gaps(ms, predictions)) v = std::max(v, std::fabs(g));
    return v;
}

// ---------------------------------------------------------------------------
// Exponentiated gradient reduction

struct RandomizedClassifier {
    struct Member {
        LogisticModel model;
        double probability = 0.0;
    };
    std::vector<Member> members;

    void validate() const {
        double s = 0;
        for (const auto& m : members) {
            if (m.probability < 0) throw DataError("RandomizedClassifier: negative probability");
            s += m.probability;
        }
        if (std::fabs(s - 1.0) > 1e-9) throw DataError("RandomizedClassifier: probabilities must sum to 1");
    }

    // Expected prediction of the mixture (each member votes its 0.5-threshold
    // label). Clamped: accumulated member probabilities can land a hair
    // outside [0,1].
    std::vector<double> predict_expected(const TabularDataset& ds) const {
        std::vector<double> out(ds.size(), 0.0);
        for (const auto& m : members) {
            const auto proba = predict_proba(m.model, ds);
            for (std::size_t i = 0; i < ds.size(); ++i)
                out[i] += m.probability * (proba[i] >= 0.5 ? 1.0 : 0.0);
        }
        for (double& v : out) v = std::min(std::max(v, 0.0), 1.0);
        return out;
    }
};

struct ExpgradConfig {
    ConstraintKind constraint = ConstraintKind::demographic_parity;
    double eps = 0.02;
    std::size_t max_iter = 50;
    double eg_learning_rate = 2.0;  // multiplicative-weights step
    double multiplier_bound = 1.0;  // cap on the multiplier simplex scale
    double ratio_bound = 1.0;       // only for error_rate_ratio
    std::uint64_t seed = 0;
    TrainConfig oracle{.l2 = 1e-3, .learning_rate = 0.0, .max_iter = 1000, .tol = 1e-5, .seed = 0};

    void validate() const {
        if (!(eps > 0)) throw std::invalid_argument("expgrad: eps must be > 0");
        if (constraint == ConstraintKind::bounded_group_loss)
            throw std::invalid_argument("expgrad: unsupported constraint");
        if (max_iter < 1) throw std::invalid_argument("expgrad: max_iter must be >= 1");
    }
};

inline RandomizedClassifier expgrad_fit(const TabularDataset& ds, const ExpgradConfig& cfg) {
    cfg.validate();
    const std::size_t n = ds.size();
    const auto ms = detail::build_moments(ds, cfg.constraint, cfg.ratio_bound);
    const std::size_t m2 = 2 * ms.coeff.size();  // +/- side per moment

    double wtot = 0;
    for (double w : ds.weights) wtot += w;

    std::vector<double> theta(m2, 0.0);
    std::vector<LogisticModel> plays;
    std::vector<double> mix_pred(n, 0.0);  // running sum of member hard predictions

    auto signed_gap = [&](const std::vector<double>& gaps, std::size_t j2) {
        return j2 % 2 == 0 ? gaps[j2 / 2] : -gaps[j2 / 2];
    };

    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        // multipliers: lambda = B * softmax(theta with a unit slack coordinate);
        // first round plays the unconstrained classifier
        std::vector<double> lambda(m2, 0.0);
        if (t > 0) {
            double tmax = 0;
            for (double th : theta) tmax = std::max(tmax, th);
            double denom = std::exp(-tmax);  // slack coordinate at theta = 0
            for (double th : theta) denom += std::exp(th - tmax);
            for (std::size_t j = 0; j < m2; ++j)
                lambda[j] = cfg.multiplier_bound * std::exp(theta[j] - tmax) / denom;
        }

        // per-instance Lagrangian cost difference for predicting 1 vs 0,
        // scaled by total weight so the lambda = 0 case is the plain fit
        std::vector<double> delta(n);
        for (std::size_t i = 0; i < n; ++i)
            delta[i] = ds.weights[i] * (1.0 - 2.0 * ds.labels[i]);
        for (std::size_t j2 = 0; j2 < m2; ++j2) {
            if (lambda[j2] == 0.0) continue;
            const double sgn = j2 % 2 == 0 ? 1.0 : -1.0;
            const auto& c = ms.coeff[j2 / 2];
            for (std::size_t i = 0; i < n; ++i) delta[i] += lambda[j2] * sgn * c[i] * wtot;
        }

        LogisticModel h = detail::best_response(ds, delta, cfg.oracle);
        const auto proba = predict_proba(h, ds);
        std::vector<double> pred(n);
        for (std::size_t i = 0; i < n; ++i) pred[i] = proba[i] >= 0.5 ? 1.0 : 0.0;
        plays.push_back(std::move(h));
        for (std::size_t i = 0; i < n; ++i) mix_pred[i] += pred[i];

        const auto gaps = detail::moment_gaps(ms, pred);
        for (std::size_t j2 = 0; j2 < m2; ++j2) {
            theta[j2] += cfg.eg_learning_rate * (signed_gap(gaps, j2) - cfg.eps);
            if (!std::isfinite(theta[j2])) throw DataError("expgrad: non-finite multipliers");
        }

        // stop when the averaged play already meets the constraints
        std::vector<double> avg(n);
        const double inv_t = 1.0 / static_cast<double>(plays.size());
        for (std::size_t i = 0; i < n; ++i) avg[i] = mix_pred[i] * inv_t;
        const auto mix_gaps = detail::moment_gaps(ms, avg);
        double worst = 0;
        for (double g : mix_gaps) worst = std::max(worst, std::fabs(g));
        if (worst <= cfg.eps) break;
    }

    RandomizedClassifier rc;
    const double p = 1.0 / static_cast<double>(plays.size());
    for (auto& h : plays) rc.members.push_back({std::move(h), p});
    rc.validate();
    return rc;
}

// ---------------------------------------------------------------------------
// Grid search reduction

struct GridSearchConfig {
    ConstraintKind constraint = ConstraintKind::demographic_parity;
    std::size_t grid_size = 31;
    double lambda_max = 0.15;            // multipliers span [-lambda_max, lambda_max]
    double selection_threshold = 0.07;   // feasibility cut on the training violation
    double error_tie_tolerance = 0.01;   // errors this close count as tied; ties
                                         // resolve to the weakest multiplier
    double loss_ceiling = 0.65;          // bounded group loss ceiling (log-loss)
    TrainConfig oracle{.l2 = 1e-3, .learning_rate = 0.0, .max_iter = 1000, .tol = 1e-5, .seed = 0};

    void validate() const {
        if (grid_size < 2) throw std::invalid_argument("grid_search: grid size must be >= 2");
        if (!(lambda_max > 0)) throw std::invalid_argument("grid_search: lambda_max must be > 0");
        if (constraint != ConstraintKind::demographic_parity &&
            constraint != ConstraintKind::bounded_group_loss)
            throw std::invalid_argument("grid_search: constraint must be demographic parity or bounded group loss");
    }
};

struct GridPoint {
    double multiplier = 0;
    double error = 0;      // weighted 0/1 training error
    double violation = 0;  // constraint violation on training data
    LogisticModel model;
};

struct GridSearchResult {
    LogisticModel best;
    double best_multiplier = 0;
    bool feasible = false;   // some grid point met the constraint threshold
    std::vector<GridPoint> trace;
};

inline GridSearchResult grid_search_fit(const TabularDataset& ds, const GridSearchConfig& cfg) {
    cfg.validate();
    const std::size_t n = ds.size();
    double wtot = 0, wg[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        wtot += ds.weights[i];
        wg[ds.protected_flags[i]] += ds.weights[i];
    }
    if (wg[0] <= 0 || wg[1] <= 0) throw DataError("grid_search: empty protected group");

    GridSearchResult result;
    for (std::size_t gidx = 0; gidx < cfg.grid_size; ++gidx) {
        const double mu = -cfg.lambda_max +
                          2.0 * cfg.lambda_max * static_cast<double>(gidx) /
                              static_cast<double>(cfg.grid_size - 1);
        LogisticModel model;
        if (cfg.constraint == ConstraintKind::demographic_parity) {
            // Lagrangian err + mu * (acc_unpriv - acc_priv), via the
            // cost-sensitive reduction
            std::vector<double> delta(n);
            for (std::size_t i = 0; i < n; ++i) {
                const int g = ds.protected_flags[i];
                const double parity = g == 0 ? wtot / wg[0] : -wtot / wg[1];
                delta[i] = ds.weights[i] * ((1.0 - 2.0 * ds.labels[i]) + mu * parity);
            }
            model = detail::best_response(ds, delta, cfg.oracle);
        } else {
            // bounded group loss: upweight one group's examples
            TabularDataset boosted = ds;
            const int target = mu > 0 ? 1 : 0;
            for (std::size_t i = 0; i < n; ++i)
                if (boosted.protected_flags[i] == target)
                    boosted.weights[i] *= 1.0 + std::fabs(mu);
            model = fit(boosted, cfg.oracle);
        }

        const auto proba = predict_proba(model, ds);
        GridPoint point;
        point.multiplier = mu;
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int pred = proba[i] >= 0.5 ? 1 : 0;
            if (pred != ds.labels[i]) err += ds.weights[i];
        }
        point.error = err / wtot;

        if (cfg.constraint == ConstraintKind::demographic_parity) {
            double acc[2] = {0, 0};
            for (std::size_t i = 0; i < n; ++i)
                if (proba[i] >= 0.5) acc[ds.protected_flags[i]] += ds.weights[i];
            point.violation = std::fabs(acc[0] / wg[0] - acc[1] / wg[1]);
        } else {
            double loss_g[2] = {0, 0};
            for (std::size_t i = 0; i < n; ++i) {
                const double p = proba[i];
                const double ll = -(ds.labels[i] * std::log(p) + (1 - ds.labels[i]) * std::log(1 - p));
                loss_g[ds.protected_flags[i]] += ds.weights[i] * ll;
            }
            point.violation = std::max(loss_g[0] / wg[0], loss_g[1] / wg[1]) - cfg.loss_ceiling;
        }
        point.model = std::move(model);
        result.trace.push_back(std::move(point));
    }

    const double cut = cfg.constraint == ConstraintKind::demographic_parity
                           ? cfg.selection_threshold
                           : 0.0;
    double min_err = 1e300;
    for (const auto& pt : result.trace)
        if (pt.violation <= cut) {
            result.feasible = true;
            min_err = std::min(min_err, pt.error);
        }
    if (result.feasible) {
        // minimum error wins; near-ties go to the weakest multiplier
        const GridPoint* chosen = nullptr;
        for (const auto& pt : result.trace) {
            if (pt.violation > cut || pt.error > min_err + cfg.error_tie_tolerance) continue;
            if (!chosen || std::fabs(pt.multiplier) < std::fabs(chosen->multiplier)) chosen = &pt;
        }
        result.best = chosen->model;
        result.best_multiplier = chosen->multiplier;
    } else {
        double best_violation = 1e300;
        for (const auto& pt : result.trace)
            if (pt.violation < best_violation) {
                best_violation = pt.violation;
                result.best = pt.model;
                result.best_multiplier = pt.multiplier;
            }
    }
    return result;
}

}  // namespace faircredit

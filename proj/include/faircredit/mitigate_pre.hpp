#pragma once

// Pre-processing bias mitigation: transforms applied to the training data
// before any classifier sees it.
//
//  - reweighing: per (group x class) instance weights equalizing the joint
//    distribution to the product of its marginals
//  - learning fair representations: prototype-based encoding balancing
//    group membership probabilities
//  - disparate impact remover: rank-preserving quantile repair of numeric
//    features toward the cross-group median distribution

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "faircredit/classifier.hpp"
#include "faircredit/core.hpp"
#include "faircredit/dataset.hpp"

namespace faircredit {

// ---------------------------------------------------------------------------
// Reweighing

struct ReweighingMap {
    // weight[group][class]; group 0 = unprivileged, class 1 = favorable
    double weight[2][2] = {{1.0, 1.0}, {1.0, 1.0}};
};

inline ReweighingMap reweighing_map(const TabularDataset& ds) {
    double cell[2][2] = {{0, 0}, {0, 0}};
    double group[2] = {0, 0}, cls[2] = {0, 0}, total = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const int g = ds.protected_flags[i], c = ds.labels[i];
        const double w = ds.weights[i];
        cell[g][c] += w;
        group[g] += w;
        cls[c] += w;
        total += w;
    }
    ReweighingMap map;
    for (int g = 0; g < 2; ++g)
        for (int c = 0; c < 2; ++c) {
            if (cell[g][c] <= 0.0)
                throw DataError("reweigh: empty (group, class) cell");
            map.weight[g][c] = (group[g] * cls[c]) / (total * cell[g][c]);
        }
    return map;
}

inline TabularDataset reweigh(const TabularDataset& ds, ReweighingMap* map_out = nullptr) {
    const ReweighingMap map = reweighing_map(ds);
    if (map_out) *map_out = map;
    TabularDataset out = ds;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.weights[i] *= map.weight[out.protected_flags[i]][out.labels[i]];
    return out;
}

// ---------------------------------------------------------------------------
// Learning fair representations

struct LfrConfig {
    std::size_t k = 10;          // prototype count
    double Az = 50.0;            // group-parity loss weight
    double Ax = 0.01;            // reconstruction loss weight
    double Ay = 1.0;             // label-prediction loss weight
    double threshold = 0.5;      // relabeling threshold on the prototype predictor
    std::uint64_t seed = 1;
    std::size_t max_iter = 500;
    double tol = 1e-7;           // relative loss-change stopping

    void validate() const {
        if (k < 2) throw std::invalid_argument("lfr: k must be >= 2");
        if (Az < 0 || Ax < 0 || Ay < 0) throw std::invalid_argument("lfr: loss weights must be >= 0");
        if (!(threshold > 0 && threshold < 1)) throw std::invalid_argument("lfr: threshold must be in (0,1)");
    }
};

struct LfrModel {
    Matrix prototypes;                  // k x d, standardized space
    std::vector<double> proto_logits;   // w_k = sigmoid(logit_k)
    std::vector<double> feature_means;
    std::vector<double> feature_stds;
    LfrConfig config;
    double loss_total = 0, loss_z = 0, loss_x = 0, loss_y = 0;
    std::size_t iterations = 0;

    std::size_t k() const { return prototypes.rows(); }
    std::size_t dim() const { return prototypes.cols(); }
};

namespace detail {

struct LfrWorkspace {
    Matrix Z;                 // standardized features, n x d
    std::vector<int> labels;
    std::vector<int> groups;
    double n_group[2] = {0, 0};
};

// Loss and gradient at params = [prototypes (k*d), logits (k)].
inline double lfr_loss_grad(const LfrWorkspace& ws, const LfrConfig& cfg,
                            const std::vector<double>& params, std::vector<double>* grad,
                            double* lz_out = nullptr, double* lx_out = nullptr, double* ly_out = nullptr) {
    const std::size_t n = ws.Z.rows(), d = ws.Z.cols(), k = cfg.k;
    const double inv_n = 1.0 / static_cast<double>(n);
    const double* V = params.data();            // k x d row-major
    const double* A = params.data() + k * d;    // logits
    if (grad) grad->assign(params.size(), 0.0);

    std::vector<double> w(k);
    for (std::size_t p = 0; p < k; ++p) w[p] = sigmoid(A[p]);

    Matrix M(n, k);             // memberships
    std::vector<double> mean_m(2 * k, 0.0);  // per-group mean membership
    std::vector<double> xhat(d);
    double lx = 0, ly = 0;

    // forward: memberships, reconstruction and prediction losses
    std::vector<double> dist(k);
    std::vector<double> g_row(k);
    Matrix G(n, k);             // dL/dM
    std::vector<double> err_n(n);  // d(ly_i)/d(yhat_i) * Ay / n
    Matrix E(n, d);             // reconstruction residuals
    for (std::size_t i = 0; i < n; ++i) {
        const double* zi = ws.Z.row(i);
        double dmin = 1e300;
        for (std::size_t p = 0; p < k; ++p) {
            double s = 0;
            const double* vp = V + p * d;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = zi[j] - vp[j];
                s += diff * diff;
            }
            dist[p] = s;
            dmin = std::min(dmin, s);
        }
        double norm = 0;
        for (std::size_t p = 0; p < k; ++p) {
            const double e = std::exp(-(dist[p] - dmin));
            M(i, p) = e;
            norm += e;
        }
        double yhat = 0;
        for (std::size_t p = 0; p < k; ++p) {
            M(i, p) /= norm;
            yhat += M(i, p) * w[p];
            mean_m[static_cast<std::size_t>(ws.groups[i]) * k + p] += M(i, p);
        }
        for (std::size_t j = 0; j < d; ++j) {
            double r = 0;
            for (std::size_t p = 0; p < k; ++p) r += M(i, p) * V[p * d + j];
            const double e = r - zi[j];
            E(i, j) = e;
            lx += e * e;
        }
        const double yc = std::min(std::max(yhat, 1e-9), 1.0 - 1e-9);
        ly += -(ws.labels[i] * std::log(yc) + (1 - ws.labels[i]) * std::log(1.0 - yc));
        err_n[i] = (yc - ws.labels[i]) / (yc * (1.0 - yc));
    }
    lx *= inv_n;
    ly *= inv_n;

    double lz = 0;
    std::vector<double> sign_k(k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
        for (int g = 0; g < 2; ++g) mean_m[static_cast<std::size_t>(g) * k + p] /= ws.n_group[g];
        const double gap = mean_m[p] - mean_m[k + p];  // group0 mean - group1 mean
        lz += std::fabs(gap);
        sign_k[p] = gap > 0 ? 1.0 : (gap < 0 ? -1.0 : 0.0);
    }

    const double total = cfg.Az * lz + cfg.Ax * lx + cfg.Ay * ly;
    if (lz_out) *lz_out = lz;
    if (lx_out) *lx_out = lx;
    if (ly_out) *ly_out = ly;
    if (!grad) return total;

    double* gV = grad->data();
    double* gA = grad->data() + k * d;
    for (std::size_t i = 0; i < n; ++i) {
        const double* zi = ws.Z.row(i);
        const int gi = ws.groups[i];
        const double zsign = gi == 0 ? 1.0 : -1.0;
        // dL/dM for this row
        double dot = 0;
        for (std::size_t p = 0; p < k; ++p) {
            double gm = cfg.Ay * inv_n * err_n[i] * w[p];
            double rec = 0;
            const double* vp = V + p * d;
            for (std::size_t j = 0; j < d; ++j) rec += E(i, j) * vp[j];
            gm += cfg.Ax * 2.0 * inv_n * rec;
            gm += cfg.Az * sign_k[p] * zsign / ws.n_group[gi];
            g_row[p] = gm;
            dot += gm * M(i, p);
        }
        // back through softmax over negative squared distances, then to prototypes
        for (std::size_t p = 0; p < k; ++p) {
            const double dl_dd = -M(i, p) * (g_row[p] - dot);
            const double* vp = V + p * d;
            double* gvp = gV + p * d;
            const double mAx = cfg.Ax * 2.0 * inv_n * M(i, p);
            for (std::size_t j = 0; j < d; ++j) {
                gvp[j] += dl_dd * 2.0 * (vp[j] - zi[j]);  // distance term
                gvp[j] += mAx * E(i, j);                  // direct reconstruction term
            }
            gA[p] += cfg.Ay * inv_n * err_n[i] * M(i, p) * w[p] * (1.0 - w[p]);
        }
    }
    return total;
}

}  // namespace detail

inline LfrModel lfr_fit(const TabularDataset& ds, const LfrConfig& cfg,
                        std::vector<double>* loss_trace = nullptr) {
    cfg.validate();
    const std::size_t n = ds.size(), d = ds.dim(), k = cfg.k;
    if (n < k) throw DataError("lfr: fewer instances than prototypes");

    LfrModel model;
    model.config = cfg;
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

    detail::LfrWorkspace ws;
    ws.Z = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            ws.Z(i, j) = (ds.X(i, j) - model.feature_means[j]) / model.feature_stds[j];
    ws.labels = ds.labels;
    ws.groups = ds.protected_flags;
    for (int g : ds.protected_flags) ws.n_group[g] += 1.0;
    if (ws.n_group[0] == 0 || ws.n_group[1] == 0) throw DataError("lfr: empty protected group");

    // init: prototypes drawn from training rows, mild logit spread
    Rng rng(cfg.seed);
    std::vector<double> params(k * d + k);
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    rng.shuffle(rows);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t j = 0; j < d; ++j) params[p * d + j] = ws.Z(rows[p % n], j);
        params[k * d + p] = rng.uniform(-0.5, 0.5);
    }

    // gradient descent with backtracking halving; loss never increases
    std::vector<double> grad, trial(params.size());
    double step = 0.1;
    double loss = detail::lfr_loss_grad(ws, cfg, params, &grad);
    if (!std::isfinite(loss)) throw DataError("lfr: optimizer divergence");
    if (loss_trace) loss_trace->push_back(loss);
    std::size_t it = 0;
    for (; it < cfg.max_iter; ++it) {
        double drop = -1.0;
        for (int half = 0; half < 40; ++half) {
            for (std::size_t j = 0; j < params.size(); ++j) trial[j] = params[j] - step * grad[j];
            const double cand = detail::lfr_loss_grad(ws, cfg, trial, nullptr);
            if (std::isfinite(cand) && cand <= loss) {
                drop = loss - cand;
                params.swap(trial);
                loss = cand;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if (drop < 0.0) break;  // no descent at the smallest step
        if (loss_trace) loss_trace->push_back(loss);
        if (drop < cfg.tol * std::max(1.0, std::fabs(loss))) {
            ++it;
            break;
        }
        detail::lfr_loss_grad(ws, cfg, params, &grad);
    }
    model.loss_total =
        detail::lfr_loss_grad(ws, cfg, params, nullptr, &model.loss_z, &model.loss_x, &model.loss_y);
    model.iterations = it;

    model.prototypes = Matrix(k, d);
    model.proto_logits.resize(k);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t j = 0; j < d; ++j) model.prototypes(p, j) = params[p * d + j];
        model.proto_logits[p] = params[k * d + p];
    }
    return model;
}

// Membership matrix (rows sum to 1) of instances against fitted prototypes.
inline Matrix lfr_memberships(const LfrModel& model, const TabularDataset& ds) {
    const std::size_t n = ds.size(), d = ds.dim(), k = model.k();
    if (d != model.dim()) throw DataError("lfr_memberships: dimension mismatch");
    Matrix M(n, k);
    std::vector<double> dist(k);
    for (std::size_t i = 0; i < n; ++i) {
        double dmin = 1e300;
        for (std::size_t p = 0; p < k; ++p) {
            double s = 0;
            for (std::size_t j = 0; j < d; ++j) {
                const double z = (ds.X(i, j) - model.feature_means[j]) / model.feature_stds[j];
                const double diff = z - model.prototypes(p, j);
                s += diff * diff;
            }
            dist[p] = s;
            dmin = std::min(dmin, s);
        }
        double norm = 0;
        for (std::size_t p = 0; p < k; ++p) {
            M(i, p) = std::exp(-(dist[p] - dmin));
            norm += M(i, p);
        }
        for (std::size_t p = 0; p < k; ++p) M(i, p) /= norm;
    }
    return M;
}

// Replace features by the membership-weighted prototype reconstruction.
// With relabel set, labels are replaced by thresholding the prototype
// predictor (training-set usage); evaluation labels must stay untouched.
inline TabularDataset lfr_transform(const LfrModel& model, const TabularDataset& ds, bool relabel = false) {
    const std::size_t n = ds.size(), d = ds.dim(), k = model.k();
    if (d != model.dim()) throw DataError("lfr_transform: dimension mismatch");
    const Matrix M = lfr_memberships(model, ds);
    TabularDataset out = ds;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double z = 0;
            for (std::size_t p = 0; p < k; ++p) z += M(i, p) * model.prototypes(p, j);
            out.X(i, j) = z * model.feature_stds[j] + model.feature_means[j];
        }
        if (relabel) {
            double yhat = 0;
            for (std::size_t p = 0; p < k; ++p) yhat += M(i, p) * sigmoid(model.proto_logits[p]);
            out.labels[i] = yhat >= model.config.threshold ? 1 : 0;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Disparate impact remover

struct RepairPlan {
    double lambda = 1.0;
    struct FeatureMap {
        std::size_t column = 0;
        std::vector<double> sorted[2];  // per-group sorted source values
    };
    std::vector<FeatureMap> features;
};

namespace detail {

// mid-distribution CDF: (count_less + 0.5 count_equal) / n
inline double mid_cdf(const std::vector<double>& sorted, double v) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), v);
    const double less = static_cast<double>(lo - sorted.begin());
    const double equal = static_cast<double>(hi - lo);
    return (less + 0.5 * equal) / static_cast<double>(sorted.size());
}

// quantile function through points ((j + 0.5)/n, x_(j)), linear between,
// clamped at the ends
inline double quantile_at(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    const double u = p * static_cast<double>(n) - 0.5;
    if (u <= 0.0) return sorted.front();
    if (u >= static_cast<double>(n - 1)) return sorted.back();
    const auto j = static_cast<std::size_t>(u);
    const double frac = u - static_cast<double>(j);
    return sorted[j] + frac * (sorted[j + 1] - sorted[j]);
}

}  // namespace detail

inline RepairPlan fit_repair(const TabularDataset& ds, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw DataError("dir_repair: lambda outside [0,1]");
    RepairPlan plan;
    plan.lambda = lambda;
    for (std::size_t j = 0; j < ds.dim(); ++j) {
        if (ds.feature_kinds[j] != FeatureKind::numeric) continue;
        RepairPlan::FeatureMap fm;
        fm.column = j;
        for (std::size_t i = 0; i < ds.size(); ++i)
            fm.sorted[ds.protected_flags[i]].push_back(ds.X(i, j));
        if (fm.sorted[0].empty() || fm.sorted[1].empty())
            throw DataError("dir_repair: empty protected group");
        std::sort(fm.sorted[0].begin(), fm.sorted[0].end());
        std::sort(fm.sorted[1].begin(), fm.sorted[1].end());
        plan.features.push_back(std::move(fm));
    }
    return plan;
}

inline TabularDataset apply_repair(const RepairPlan& plan, const TabularDataset& ds) {
    TabularDataset out = ds;
    if (plan.lambda == 0.0) return out;
    for (const auto& fm : plan.features) {
        if (fm.column >= ds.dim()) throw DataError("dir_repair: column out of range");
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const int g = ds.protected_flags[i];
            const double v = ds.X(i, fm.column);
            const double q = detail::mid_cdf(fm.sorted[g], v);
            const double target =
                0.5 * (detail::quantile_at(fm.sorted[0], q) + detail::quantile_at(fm.sorted[1], q));
            out.X(i, fm.column) = (1.0 - plan.lambda) * v + plan.lambda * target;
        }
    }
    return out;
}

// Fit-and-apply on one dataset: the paper's per-dataset repair.
inline TabularDataset dir_repair(const TabularDataset& ds, double lambda) {
    return apply_repair(fit_repair(ds, lambda), ds);
}

}  // namespace faircredit

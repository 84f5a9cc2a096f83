#pragma once

// Weighted binary logistic regression. Batch gradient descent with a fixed
// step (auto-sized from a Lipschitz bound when not given), z-score
// standardization fitted on training data only, instance weights honoured in
// the loss. Serves as the baseline classifier and as the cost-sensitive
// oracle inside the reduction-based in-processing methods.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "faircredit/core.hpp"
#include "faircredit/dataset.hpp"

namespace faircredit {

struct TrainConfig {
    double l2 = 1e-3;            // L2 strength on coefficients (not intercept)
    double learning_rate = 0.0;  // 0 = derive from a Lipschitz bound
    std::size_t max_iter = 2000;
    double tol = 1e-6;           // stop when the gradient sup-norm drops below
    std::uint64_t seed = 0;      // reserved; the solver itself is deterministic

    void validate() const {
        if (l2 < 0) throw std::invalid_argument("TrainConfig: l2 must be >= 0");
        if (learning_rate < 0) throw std::invalid_argument("TrainConfig: learning rate must be > 0");
        if (max_iter < 1) throw std::invalid_argument("TrainConfig: max_iter must be >= 1");
        if (!(tol > 0)) throw std::invalid_argument("TrainConfig: tol must be > 0");
    }
};

struct LogisticModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    std::vector<double> feature_means;
    std::vector<double> feature_stds;
    TrainConfig config;
    bool converged = false;
    std::size_t iterations = 0;

    std::size_t dim() const { return coefficients.size(); }
};

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace detail {

inline double softplus(double z) {
    // log(1 + e^z), stable for large |z|
    return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

}  // namespace detail

// Weighted, L2-regularized negative log-likelihood and its gradient at
// params = [coefficients..., intercept], averaged over instance count.
// Exposed so tests can check the analytic gradient against finite differences.
inline double weighted_nll_grad(const Matrix& X, const std::vector<int>& y,
                                const std::vector<double>& w, double l2,
                                const std::vector<double>& params,
                                std::vector<double>* grad_out) {
    const std::size_t n = X.rows(), d = X.cols();
    if (params.size() != d + 1) throw std::invalid_argument("weighted_nll_grad: bad parameter size");
    const double inv_n = 1.0 / static_cast<double>(n);
    double loss = 0.0;
    if (grad_out) grad_out->assign(d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = X.row(i);
        double z = params[d];
        for (std::size_t j = 0; j < d; ++j) z += params[j] * xi[j];
        loss += w[i] * (detail::softplus(z) - y[i] * z);
        if (grad_out) {
            const double r = w[i] * (sigmoid(z) - y[i]);
            for (std::size_t j = 0; j < d; ++j) (*grad_out)[j] += r * xi[j];
            (*grad_out)[d] += r;
        }
    }
    loss *= inv_n;
    for (std::size_t j = 0; j < d; ++j) loss += 0.5 * l2 * params[j] * params[j];
    if (grad_out) {
        for (std::size_t j = 0; j <= d; ++j) (*grad_out)[j] *= inv_n;
        for (std::size_t j = 0; j < d; ++j) (*grad_out)[j] += l2 * params[j];
    }
    return loss;
}

namespace detail {

// Largest eigenvalue of [X 1]^T diag(w) [X 1] / n by power iteration.
inline double weighted_gram_lmax(const Matrix& X, const std::vector<double>& w) {
    const std::size_t n = X.rows(), d = X.cols();
    std::vector<double> v(d + 1, 1.0 / std::sqrt(static_cast<double>(d + 1)));
    std::vector<double> u(d + 1, 0.0);
    double lambda = 0.0;
    for (int it = 0; it < 60; ++it) {
        std::fill(u.begin(), u.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = X.row(i);
            double s = v[d];
            for (std::size_t j = 0; j < d; ++j) s += xi[j] * v[j];
            s *= w[i];
            for (std::size_t j = 0; j < d; ++j) u[j] += s * xi[j];
            u[d] += s;
        }
        double norm = 0.0;
        for (double x : u) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-30) return 0.0;
        lambda = norm / static_cast<double>(n);
        for (std::size_t j = 0; j <= d; ++j) v[j] = u[j] / norm;
    }
    return lambda;
}

}  // namespace detail

inline LogisticModel fit(const TabularDataset& ds, const TrainConfig& cfg,
                         std::vector<double>* loss_trace = nullptr) {
    cfg.validate();
    const std::size_t n = ds.size(), d = ds.dim();
    if (n == 0 || d == 0) throw DataError("fit: empty dataset");
    bool has0 = false, has1 = false;
    for (int y : ds.labels) (y ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError("fit: degenerate labels");

    LogisticModel model;
    model.config = cfg;
    model.feature_means.resize(d);
    model.feature_stds.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += ds.X(i, j);
        m /= static_cast<double>(n);
        double s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dv = ds.X(i, j) - m;
            s2 += dv * dv;
        }
        const double s = std::sqrt(s2 / static_cast<double>(n));
        model.feature_means[j] = m;
        model.feature_stds[j] = s > 1e-12 ? s : 1.0;
    }

    Matrix Z(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            Z(i, j) = (ds.X(i, j) - model.feature_means[j]) / model.feature_stds[j];

    double lr = cfg.learning_rate;
    if (lr == 0.0) {
        const double lmax = detail::weighted_gram_lmax(Z, ds.weights);
        const double lipschitz = 0.25 * lmax + cfg.l2;
        lr = lipschitz > 0 ? 1.0 / lipschitz : 1.0;
    }

    std::vector<double> params(d + 1, 0.0);
    std::vector<double> grad;
    for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        const double loss = weighted_nll_grad(Z, ds.labels, ds.weights, cfg.l2, params, &grad);
        if (loss_trace) loss_trace->push_back(loss);
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::fabs(g));
        model.iterations = it;
        if (gmax < cfg.tol) {
            model.converged = true;
            break;
        }
        for (std::size_t j = 0; j <= d; ++j) params[j] -= lr * grad[j];
    }
    if (!model.converged) model.iterations = cfg.max_iter;

    model.coefficients.assign(params.begin(), params.begin() + static_cast<long>(d));
    model.intercept = params[d];
    for (double c : model.coefficients)
        if (!std::isfinite(c)) throw DataError("fit: non-finite coefficients");
    return model;
}

inline std::vector<double> predict_proba(const LogisticModel& model, const TabularDataset& ds) {
    const std::size_t d = ds.dim();
    if (d != model.dim()) throw DataError("predict_proba: feature dimension mismatch");
    std::vector<double> p(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        double z = model.intercept;
        for (std::size_t j = 0; j < d; ++j)
            z += model.coefficients[j] * (ds.X(i, j) - model.feature_means[j]) / model.feature_stds[j];
        double q = sigmoid(z);
        // keep strictly inside (0,1)
        q = std::min(std::max(q, 1e-15), 1.0 - 1e-15);
        p[i] = q;
    }
    return p;
}

// Favorable iff probability >= threshold (ties go to favorable).
inline std::vector<int> labels_from_proba(const std::vector<double>& proba, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("predict_label: threshold must be in (0,1)");
    std::vector<int> out(proba.size());
    for (std::size_t i = 0; i < proba.size(); ++i) out[i] = proba[i] >= threshold ? 1 : 0;
    return out;
}

inline std::vector<int> predict_label(const LogisticModel& model, const TabularDataset& ds, double threshold = 0.5) {
    return labels_from_proba(predict_proba(model, ds), threshold);
}

// --------------------------------------------------------------------------
// JSON export / import

inline nlohmann::json model_to_json(const LogisticModel& m) {
    return nlohmann::json{
        {"coefficients", m.coefficients},
        {"intercept", m.intercept},
        {"feature_means", m.feature_means},
        {"feature_stds", m.feature_stds},
        {"config",
         {{"l2", m.config.l2},
          {"learning_rate", m.config.learning_rate},
          {"max_iter", m.config.max_iter},
          {"tol", m.config.tol},
          {"seed", m.config.seed}}},
        {"converged", m.converged},
        {"iterations", m.iterations}};
}

inline LogisticModel model_from_json(const nlohmann::json& j) {
    LogisticModel m;
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    m.feature_means = j.at("feature_means").get<std::vector<double>>();
    m.feature_stds = j.at("feature_stds").get<std::vector<double>>();
    const auto& c = j.at("config");
    m.config.l2 = c.at("l2").get<double>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.max_iter = c.at("max_iter").get<std::size_t>();
    m.config.tol = c.at("tol").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.converged = j.at("converged").get<bool>();
    m.iterations = j.at("iterations").get<std::size_t>();
    if (m.feature_means.size() != m.coefficients.size() || m.feature_stds.size() != m.coefficients.size())
        throw DataError("model_from_json: inconsistent dimensions");
    return m;
}

}  // namespace faircredit

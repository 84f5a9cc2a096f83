#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "faircredit/mitigate_pre.hpp"
#include "synthetic.hpp"

using namespace faircredit;
using Catch::Approx;

namespace {

TabularDataset hand_reweigh_case() {
    // 10 rows: protected group of 4 with 2 favorable, unprotected 6 with 4
    TabularDataset ds;
    ds.X = Matrix(10, 1);
    ds.labels = {1, 1, 0, 0, 1, 1, 1, 1, 0, 0};
    ds.protected_flags = {0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
    ds.weights.assign(10, 1.0);
    ds.feature_names = {"x"};
    ds.feature_kinds = {FeatureKind::numeric};
    ds.source_indices.resize(10);
    for (std::size_t i = 0; i < 10; ++i) {
        ds.source_indices[i] = i;
        ds.X(i, 0) = static_cast<double>(i);
    }
    return ds;
}

double weighted_favorable_rate(const TabularDataset& ds, int group) {
    double mass = 0, fav = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.protected_flags[i] != group) continue;
        mass += ds.weights[i];
        fav += ds.weights[i] * ds.labels[i];
    }
    return fav / mass;
}

}  // namespace

TEST_CASE("reweighing") {
    SECTION("independent group and class leave weights at one") {
        TabularDataset ds = hand_reweigh_case();
        // 2x2 balanced: both groups half favorable
        ds.labels = {1, 1, 0, 0, 1, 1, 1, 0, 0, 0};
        auto out = reweigh(ds);
        for (double w : out.weights) REQUIRE(w == Approx(1.0).margin(1e-12));
    }
    SECTION("hand-computed cell weight") {
        auto ds = hand_reweigh_case();
        ReweighingMap map;
        auto out = reweigh(ds, &map);
        // P(prot)=0.4, P(fav)=0.6, P(prot & fav)=0.2 -> 0.4*0.6/0.2 = 1.2
        REQUIRE(map.weight[0][1] == Approx(1.2).margin(1e-12));
        REQUIRE(out.weights[0] == Approx(1.2).margin(1e-12));
    }
    SECTION("weighted favorable rates equalize exactly") {
        auto ds = hand_reweigh_case();
        auto out = reweigh(ds);
        REQUIRE(weighted_favorable_rate(out, 0) ==
                Approx(weighted_favorable_rate(out, 1)).margin(1e-12));
        double mass = 0;
        for (double w : out.weights) mass += w;
        REQUIRE(mass == Approx(static_cast<double>(out.size())).margin(1e-9));
    }
    SECTION("also exact on a large biased sample") {
        faircredit::testing::BiasedGaussianSpec spec;
        spec.n = 1500;
        auto ds = faircredit::testing::biased_gaussian(spec);
        auto out = reweigh(ds);
        REQUIRE(weighted_favorable_rate(out, 0) ==
                Approx(weighted_favorable_rate(out, 1)).margin(1e-12));
    }
    SECTION("features, labels and flags untouched") {
        auto ds = hand_reweigh_case();
        auto out = reweigh(ds);
        REQUIRE(out.X.data() == ds.X.data());
        REQUIRE(out.labels == ds.labels);
        REQUIRE(out.protected_flags == ds.protected_flags);
    }
    SECTION("empty cell rejected") {
        auto ds = hand_reweigh_case();
        ds.labels = {0, 0, 0, 0, 1, 1, 1, 1, 0, 0};  // protected group has no favorable
        REQUIRE_THROWS_WITH(reweigh(ds), Catch::Matchers::ContainsSubstring("empty"));
    }
}

TEST_CASE("learning fair representations") {
    faircredit::testing::BiasedGaussianSpec spec;
    spec.n = 240;
    spec.noise_dims = 1;
    auto ds = faircredit::testing::biased_gaussian(spec);

    SECTION("memberships are a probability distribution") {
        LfrConfig cfg;
        cfg.k = 5;
        cfg.max_iter = 60;
        auto model = lfr_fit(ds, cfg);
        auto M = lfr_memberships(model, ds);
        for (std::size_t i = 0; i < M.rows(); ++i) {
            double sum = 0;
            for (std::size_t p = 0; p < M.cols(); ++p) {
                REQUIRE(M(i, p) >= 0.0);
                sum += M(i, p);
            }
            REQUIRE(sum == Approx(1.0).margin(1e-9));
        }
    }
    SECTION("dominant parity weight drives the group gap near zero") {
        LfrConfig cfg;
        cfg.k = 6;
        cfg.Az = 1.0;
        cfg.Ax = 0.0;
        cfg.Ay = 0.0;
        cfg.max_iter = 400;
        auto model = lfr_fit(ds, cfg);
        REQUIRE(model.loss_z < 0.02);
    }
    SECTION("k = n with dominant reconstruction memorizes the data") {
        faircredit::testing::BiasedGaussianSpec small;
        small.n = 25;
        small.noise_dims = 0;
        auto tiny = faircredit::testing::biased_gaussian(small);
        LfrConfig cfg;
        cfg.k = tiny.size();
        cfg.Az = 0.0;
        cfg.Ax = 1.0;
        cfg.Ay = 0.0;
        cfg.max_iter = 800;
        auto model = lfr_fit(tiny, cfg);
        REQUIRE(model.loss_x < 0.05);
    }
    SECTION("total loss is non-increasing over iterations") {
        LfrConfig cfg;
        cfg.k = 5;
        cfg.max_iter = 120;
        std::vector<double> trace;
        lfr_fit(ds, cfg, &trace);
        REQUIRE(trace.size() > 2);
        for (std::size_t i = 1; i < trace.size(); ++i) REQUIRE(trace[i] <= trace[i - 1] + 1e-12);
    }
    SECTION("analytic gradient matches finite differences") {
        faircredit::testing::BiasedGaussianSpec small;
        small.n = 30;
        small.noise_dims = 0;
        auto tiny = faircredit::testing::biased_gaussian(small);
        LfrConfig cfg;
        cfg.k = 3;
        detail::LfrWorkspace ws;
        const std::size_t d = tiny.dim();
        ws.Z = tiny.X;
        ws.labels = tiny.labels;
        ws.groups = tiny.protected_flags;
        for (int g : tiny.protected_flags) ws.n_group[g] += 1.0;

        Rng rng(5);
        std::vector<double> params(cfg.k * d + cfg.k);
        for (double& v : params) v = rng.uniform(-1.0, 1.0);
        std::vector<double> grad;
        detail::lfr_loss_grad(ws, cfg, params, &grad);
        const double h = 1e-6;
        for (std::size_t j = 0; j < params.size(); ++j) {
            auto plus = params, minus = params;
            plus[j] += h;
            minus[j] -= h;
            const double fd = (detail::lfr_loss_grad(ws, cfg, plus, nullptr) -
                               detail::lfr_loss_grad(ws, cfg, minus, nullptr)) /
                              (2 * h);
            REQUIRE(grad[j] == Approx(fd).epsilon(1e-4).margin(1e-7));
        }
    }
    SECTION("transform reconstructs a prototype exactly in the sharp limit") {
        LfrModel model;
        model.config.k = 2;
        model.prototypes = Matrix(2, 2);
        model.prototypes(0, 0) = -8;
        model.prototypes(0, 1) = -8;
        model.prototypes(1, 0) = 8;
        model.prototypes(1, 1) = 8;
        model.proto_logits = {0.0, 0.0};
        model.feature_means = {0.0, 0.0};
        model.feature_stds = {1.0, 1.0};
        TabularDataset pt;
        pt.X = Matrix(1, 2);
        pt.X(0, 0) = 8;
        pt.X(0, 1) = 8;
        pt.labels = {1};
        pt.protected_flags = {0};
        pt.weights = {1};
        pt.feature_names = {"a", "b"};
        pt.feature_kinds = {FeatureKind::numeric, FeatureKind::numeric};
        pt.source_indices = {0};
        auto out = lfr_transform(model, pt);
        REQUIRE(out.X(0, 0) == Approx(8.0).margin(1e-9));
        REQUIRE(out.X(0, 1) == Approx(8.0).margin(1e-9));
    }
    SECTION("reconstructions stay in the prototype hull per coordinate") {
        LfrConfig cfg;
        cfg.k = 4;
        cfg.max_iter = 80;
        auto model = lfr_fit(ds, cfg);
        auto out = lfr_transform(model, ds);
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            double lo = 1e300, hi = -1e300;
            for (std::size_t p = 0; p < cfg.k; ++p) {
                const double v = model.prototypes(p, j) * model.feature_stds[j] + model.feature_means[j];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            for (std::size_t i = 0; i < out.size(); ++i) {
                REQUIRE(out.X(i, j) >= lo - 1e-9);
                REQUIRE(out.X(i, j) <= hi + 1e-9);
            }
        }
    }
    SECTION("labels and protected flags survive; relabel touches labels only") {
        LfrConfig cfg;
        cfg.k = 4;
        cfg.max_iter = 40;
        auto model = lfr_fit(ds, cfg);
        auto plain = lfr_transform(model, ds, false);
        REQUIRE(plain.labels == ds.labels);
        REQUIRE(plain.protected_flags == ds.protected_flags);
        auto relabeled = lfr_transform(model, ds, true);
        REQUIRE(relabeled.protected_flags == ds.protected_flags);
        REQUIRE(relabeled.X.data() == plain.X.data());
    }
}

TEST_CASE("disparate impact remover") {
    SECTION("lambda zero is the identity, bit for bit") {
        faircredit::testing::BiasedGaussianSpec spec;
        spec.n = 200;
        auto ds = faircredit::testing::biased_gaussian(spec);
        auto out = dir_repair(ds, 0.0);
        REQUIRE(out.X.data() == ds.X.data());
    }
    SECTION("full repair maps the hand case onto the median distribution") {
        TabularDataset ds;
        ds.X = Matrix(6, 1);
        const double va[] = {1, 2, 3}, vb[] = {3, 4, 5};
        for (int i = 0; i < 3; ++i) {
            ds.X(i, 0) = va[i];
            ds.X(3 + i, 0) = vb[i];
        }
        ds.labels = {0, 1, 0, 1, 0, 1};
        ds.protected_flags = {0, 0, 0, 1, 1, 1};
        ds.weights.assign(6, 1.0);
        ds.feature_names = {"x"};
        ds.feature_kinds = {FeatureKind::numeric};
        ds.source_indices = {0, 1, 2, 3, 4, 5};
        auto out = dir_repair(ds, 1.0);
        REQUIRE(out.X(0, 0) == Approx(2.0).margin(1e-12));
        REQUIRE(out.X(1, 0) == Approx(3.0).margin(1e-12));
        REQUIRE(out.X(2, 0) == Approx(4.0).margin(1e-12));
        REQUIRE(out.X(3, 0) == Approx(2.0).margin(1e-12));
        REQUIRE(out.X(4, 0) == Approx(3.0).margin(1e-12));
        REQUIRE(out.X(5, 0) == Approx(4.0).margin(1e-12));
    }
    SECTION("full repair equalizes group distributions within quantization error") {
        faircredit::testing::BiasedGaussianSpec spec;
        spec.n = 800;
        spec.group_shift = 1.5;
        auto ds = faircredit::testing::biased_gaussian(spec);
        auto out = dir_repair(ds, 1.0);
        // two-sample max CDF gap on the first (shifted) feature
        std::vector<double> a, b;
        for (std::size_t i = 0; i < out.size(); ++i)
            (out.protected_flags[i] == 0 ? a : b).push_back(out.X(i, 0));
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        double gap = 0;
        for (double q = 0.02; q < 1.0; q += 0.02) {
            const double xa = a[static_cast<std::size_t>(q * (a.size() - 1))];
            const double xb = b[static_cast<std::size_t>(q * (b.size() - 1))];
            gap = std::max(gap, std::fabs(xa - xb));
        }
        // the raw shift is ~1.5 sigma; repaired quantiles should coincide
        REQUIRE(gap < 0.15);
    }
    SECTION("per-coordinate movement is monotone in lambda") {
        faircredit::testing::BiasedGaussianSpec spec;
        spec.n = 150;
        auto ds = faircredit::testing::biased_gaussian(spec);
        auto full = dir_repair(ds, 1.0);  // lambda = 1 lands exactly on the target
        std::vector<double> prev(ds.size(), 1e300);
        for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            auto out = dir_repair(ds, lambda);
            for (std::size_t i = 0; i < ds.size(); ++i) {
                const double dist = std::fabs(out.X(i, 0) - full.X(i, 0));
                REQUIRE(dist <= prev[i] + 1e-9);
                prev[i] = dist;
            }
        }
    }
    SECTION("within-group ranking is preserved") {
        faircredit::testing::BiasedGaussianSpec spec;
        spec.n = 300;
        auto ds = faircredit::testing::biased_gaussian(spec);
        auto out = dir_repair(ds, 0.7);
        for (int g = 0; g < 2; ++g) {
            std::vector<std::pair<double, double>> pairs;  // (before, after)
            for (std::size_t i = 0; i < ds.size(); ++i)
                if (ds.protected_flags[i] == g) pairs.push_back({ds.X(i, 0), out.X(i, 0)});
            std::sort(pairs.begin(), pairs.end());
            for (std::size_t i = 1; i < pairs.size(); ++i)
                REQUIRE(pairs[i].second >= pairs[i - 1].second - 1e-12);
        }
    }
    SECTION("protected flag, labels and indicator columns stay put") {
        faircredit::testing::BiasedGaussianSpec spec;
        spec.n = 100;
        auto ds = faircredit::testing::biased_gaussian(spec);
        ds.feature_kinds[1] = FeatureKind::onehot;
        ds.feature_kinds[2] = FeatureKind::protected_flag;
        auto out = dir_repair(ds, 1.0);
        REQUIRE(out.labels == ds.labels);
        REQUIRE(out.protected_flags == ds.protected_flags);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            REQUIRE(out.X(i, 1) == ds.X(i, 1));
            REQUIRE(out.X(i, 2) == ds.X(i, 2));
        }
    }
    SECTION("lambda outside the unit interval rejected") {
        faircredit::testing::BiasedGaussianSpec spec;
        spec.n = 50;
        auto ds = faircredit::testing::biased_gaussian(spec);
        REQUIRE_THROWS_AS(dir_repair(ds, 1.5), DataError);
        REQUIRE_THROWS_AS(dir_repair(ds, -0.5), DataError);
    }
    SECTION("a plan fitted on one set applies to another") {
        faircredit::testing::BiasedGaussianSpec spec;
        spec.n = 400;
        auto ds = faircredit::testing::biased_gaussian(spec);
        spec.seed = 99;
        auto other = faircredit::testing::biased_gaussian(spec);
        auto plan = fit_repair(ds, 1.0);
        auto out = apply_repair(plan, other);
        REQUIRE(out.size() == other.size());
        for (double v : out.X.data()) REQUIRE(std::isfinite(v));
    }
}

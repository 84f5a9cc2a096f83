#pragma once

// Synthetic datasets for tests: a biased Gaussian credit-like set with a
// controllable group/label structure, a consumer-loans-shaped CSV matching
// schemas/consumer_loans.schema, and random confusion tables for metric
// property tests.

#include <string>

#include "faircredit/dataset.hpp"
#include "faircredit/metrics.hpp"

namespace faircredit::testing {

struct BiasedGaussianSpec {
    std::size_t n = 500;
    std::uint64_t seed = 7;
    double group0_fraction = 0.3;   // unprivileged share
    double base_rate0 = 0.45;      // P(favorable | unprivileged)
    double base_rate1 = 0.72;      // P(favorable | privileged)
    double group_shift = 0.6;      // group signal leaking into features
    std::size_t noise_dims = 3;
};

// Features carry label signal plus a group-correlated shift, so an
// unconstrained classifier picks up the bias.
TabularDataset biased_gaussian(const BiasedGaussianSpec& spec = {});

// CSV text shaped like the consumer-loans file (Table-6 style columns,
// including drop-listed ID/Birthplace/Profession and scattered missing
// cells). Favorable outcome is Default flag == 0.
std::string consumer_like_csv(std::size_t n, std::uint64_t seed);

ConfusionByGroup random_confusion(Rng& rng, double max_cell = 200.0);

}  // namespace faircredit::testing

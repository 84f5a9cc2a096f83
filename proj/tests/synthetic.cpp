#include "synthetic.hpp"

#include <cmath>
#include <sstream>

#include "faircredit/csv.hpp"

namespace faircredit::testing {

namespace {

double gaussian(Rng& rng) {
    // Box-Muller
    const double u1 = std::max(rng.uniform01(), 1e-12);
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

TabularDataset biased_gaussian(const BiasedGaussianSpec& spec) {
    Rng rng(spec.seed);
    const std::size_t d = 2 + spec.noise_dims;
    TabularDataset ds;
    ds.X = Matrix(spec.n, d);
    ds.labels.resize(spec.n);
    ds.protected_flags.resize(spec.n);
    ds.weights.assign(spec.n, 1.0);
    ds.source_indices.resize(spec.n);
    for (std::size_t j = 0; j < d; ++j) {
        ds.feature_names.push_back("f" + std::to_string(j));
        ds.feature_kinds.push_back(FeatureKind::numeric);
    }
    for (std::size_t i = 0; i < spec.n; ++i) {
        const int g = rng.uniform01() < spec.group0_fraction ? 0 : 1;
        const double base = g == 0 ? spec.base_rate0 : spec.base_rate1;
        const int y = rng.uniform01() < base ? 1 : 0;
        ds.protected_flags[i] = g;
        ds.labels[i] = y;
        ds.source_indices[i] = i;
        ds.X(i, 0) = 1.2 * y + spec.group_shift * g + gaussian(rng);
        ds.X(i, 1) = 0.8 * y - 0.2 * g + gaussian(rng);
        for (std::size_t j = 2; j < d; ++j) ds.X(i, j) = gaussian(rng);
    }
    ds.validate();
    return ds;
}

std::string consumer_like_csv(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const char* products[] = {"personal", "car", "appliance", "renovation", "travel", "medical"};
    const char* areas[] = {"urban", "rural", "suburban", "metro"};
    const char* residences[] = {"owner", "rented", "family", "mortgage", "employer"};
    const char* educations[] = {"primary", "secondary", "vocational", "highschool", "college",
                                "bachelor", "master", "phd", "postdoc", "other"};
    const char* maritals[] = {"single", "married", "divorced", "widowed"};
    const char* legal_forms[] = {"SRL", "SA", "PFA", "II", "IF", "ONG", "SNC", "SCS",
                                 "SCA", "RA", "OC1", "OC2", "OC3", "GIE", "PUB"};
    const char* sectors[] = {"agriculture", "mining", "manufacturing", "energy", "water",
                             "construction", "retail", "transport", "hospitality", "it",
                             "finance", "realestate", "science", "admin", "public",
                             "education", "health", "arts"};
    const char* sizes[] = {"1", "2-5", "6-10", "11-50", "51-100", "101-250", "251-500",
                           "501-1000", "1000+"};

    std::ostringstream out;
    out << csv_row({"ID", "Product", "Age", "Area", "Residential Status", "Education",
                    "Marital status", "Household members", "No. of dependents", "Income",
                    "Work seniority", "Business age", "Legal form", "Economic sector",
                    "Employees no", "Length relationship", "Debit card", "Current account",
                    "Savings account", "Salary account", "Foreign account", "Deposit",
                    "Pension funds", "Finalized loan", "Birthplace", "Profession",
                    "Default flag"});
    for (std::size_t i = 0; i < n; ++i) {
        const bool young = rng.uniform01() < 0.10;
        const int age = young ? 18 + static_cast<int>(rng.below(8))
                              : 26 + static_cast<int>(rng.below(44));
        const double income = 2000 + rng.uniform01() * 8000 + (young ? -800 : 400);
        const double seniority = young ? rng.uniform01() * 4 : rng.uniform01() * 25;
        // default risk skewed against the young cohort
        const double z = -2.6 + 1.6 * young + (income < 2600 ? 0.8 : 0.0) +
                         (seniority < 2 ? 0.6 : 0.0) + 0.4 * gaussian(rng);
        const int default_flag = rng.uniform01() < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0;
        auto maybe_missing = [&](const std::string& v, double p = 0.03) {
            return rng.uniform01() < p ? std::string("") : v;
        };
        std::vector<std::string> row = {
            std::to_string(100000 + i),
            products[rng.below(6)],
            std::to_string(age),
            areas[rng.below(4)],
            maybe_missing(residences[rng.below(5)]),
            maybe_missing(educations[rng.below(10)]),
            maritals[rng.below(4)],
            std::to_string(1 + rng.below(6)),
            std::to_string(rng.below(4)),
            maybe_missing(std::to_string(static_cast<int>(income)), 0.05),
            std::to_string(static_cast<int>(seniority)),
            std::to_string(1 + rng.below(30)),
            legal_forms[rng.below(15)],
            sectors[rng.below(18)],
            sizes[rng.below(9)],
            std::to_string(rng.below(20)),
            rng.uniform01() < 0.6 ? "1" : "0",
            rng.uniform01() < 0.7 ? "1" : "0",
            rng.uniform01() < 0.3 ? "1" : "0",
            rng.uniform01() < 0.5 ? "1" : "0",
            rng.uniform01() < 0.1 ? "1" : "0",
            rng.uniform01() < 0.2 ? "1" : "0",
            rng.uniform01() < 0.25 ? "1" : "0",
            rng.uniform01() < 0.4 ? "1" : "0",
            "city" + std::to_string(rng.below(40)),
            "job" + std::to_string(rng.below(200)),
            std::to_string(default_flag),
        };
        out << csv_row(row);
    }
    return out.str();
}

ConfusionByGroup random_confusion(Rng& rng, double max_cell) {
    ConfusionByGroup c;
    for (int g = 0; g < 2; ++g) {
        c.group[g].tp = 1.0 + rng.below(static_cast<std::uint64_t>(max_cell));
        c.group[g].fp = 1.0 + rng.below(static_cast<std::uint64_t>(max_cell));
        c.group[g].tn = 1.0 + rng.below(static_cast<std::uint64_t>(max_cell));
        c.group[g].fn = 1.0 + rng.below(static_cast<std::uint64_t>(max_cell));
    }
    return c;
}

}  // namespace faircredit::testing

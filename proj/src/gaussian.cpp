#include "sscd/gaussian.hpp"

#include <algorithm>

#include "sscd/error.hpp"

namespace sscd {

GaussianSummary fit_gaussian(const SiblingSet& siblings) {
    const std::size_t n = siblings.size();
    if (n == 0) {
        throw UnscorableError("'" + siblings.lemma_key() + "' has no occurrences in corpus '" +
                              siblings.corpus_id() + "'");
    }
    const std::size_t d = siblings.dim();
    const auto values = siblings.values();

    GaussianSummary g;
    g.mean.resize(d);
    g.var.assign(d, kVarianceFloor);

    std::vector<double> column(n);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = values[i * d + j];
        std::sort(column.begin(), column.end());

        double sum = 0.0;
        for (double x : column) sum += x;
        const double mu = sum / double(n);
        g.mean[j] = mu;

        if (n >= 2) {
            double ss = 0.0;
            for (double x : column) ss += (x - mu) * (x - mu);
            g.var[j] = std::max(ss / double(n - 1), kVarianceFloor);
        }
    }
    return g;
}

}  // namespace sscd

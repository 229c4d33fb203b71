#include "sscd/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sscd/error.hpp"

namespace sscd {

namespace {

constexpr std::array<std::pair<MetricName, std::string_view>, 10> kMetricNames = {{
    {MetricName::kl_12, "kl12"},
    {MetricName::kl_21, "kl21"},
    {MetricName::jeffreys, "jeffreys"},
    {MetricName::braycurtis, "braycurtis"},
    {MetricName::canberra, "canberra"},
    {MetricName::chebyshev, "chebyshev"},
    {MetricName::cityblock, "cityblock"},
    {MetricName::correlation, "correlation"},
    {MetricName::cosine, "cosine"},
    {MetricName::euclidean, "euclidean"},
}};

void check_dims(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

void check_gaussians(const GaussianSummary& g1, const GaussianSummary& g2) {
    check_dims(g1.dim(), g2.dim());
    for (std::size_t i = 0; i < g1.dim(); ++i) {
        if (!(g1.var[i] > 0.0) || !(g2.var[i] > 0.0)) {
            throw std::invalid_argument("Gaussian variances must be positive");
        }
    }
}

double braycurtis(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::abs(a[i] - b[i]);
        den += std::abs(a[i] + b[i]);
    }
    if (den == 0.0) throw DegenerateInputError("braycurtis", "sum |u + v| is zero");
    return num / den;
}

double canberra(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double den = std::abs(a[i]) + std::abs(b[i]);
        if (den == 0.0) {
            throw DegenerateInputError("canberra", "|u_i| + |v_i| is zero at index " + std::to_string(i));
        }
        sum += std::abs(a[i] - b[i]) / den;
    }
    return sum;
}

double chebyshev(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double cityblock(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum);
}

double cosine_of(std::span<const double> a, std::span<const double> b, double mean_a, double mean_b,
                 const char* metric) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a[i] - mean_a;
        const double y = b[i] - mean_b;
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0.0 || nb == 0.0) throw DegenerateInputError(metric, "zero-norm vector");
    const double sim = dot / std::sqrt(na * nb);
    // Rounding can push |sim| a hair past 1.
    return 1.0 - std::clamp(sim, -1.0, 1.0);
}

double cosine(std::span<const double> a, std::span<const double> b) {
    return cosine_of(a, b, 0.0, 0.0, "cosine");
}

double correlation(std::span<const double> a, std::span<const double> b) {
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= double(a.size());
    mb /= double(b.size());
    return cosine_of(a, b, ma, mb, "correlation");
}

using DistanceFn = double (*)(std::span<const double>, std::span<const double>);

DistanceFn distance_fn(Distance d) {
    switch (d) {
        case Distance::braycurtis: return braycurtis;
        case Distance::canberra: return canberra;
        case Distance::chebyshev: return chebyshev;
        case Distance::cityblock: return cityblock;
        case Distance::correlation: return correlation;
        case Distance::cosine: return cosine;
        case Distance::euclidean: return euclidean;
    }
    throw std::invalid_argument("unknown distance");
}

void sample_gaussian(const GaussianSummary& g, std::size_t n, RngStream& rng, std::vector<double>& out) {
    const std::size_t d = g.dim();
    out.resize(n * d);
    std::vector<double> sd(d);
    for (std::size_t j = 0; j < d; ++j) sd[j] = std::sqrt(g.var[j]);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) out[i * d + j] = g.mean[j] + sd[j] * normal(rng);
    }
}

}  // namespace

// ---- names -----------------------------------------------------------------

bool is_divergence(MetricName name) noexcept {
    return name == MetricName::kl_12 || name == MetricName::kl_21 || name == MetricName::jeffreys;
}

Distance to_distance(MetricName name) {
    switch (name) {
        case MetricName::braycurtis: return Distance::braycurtis;
        case MetricName::canberra: return Distance::canberra;
        case MetricName::chebyshev: return Distance::chebyshev;
        case MetricName::cityblock: return Distance::cityblock;
        case MetricName::correlation: return Distance::correlation;
        case MetricName::cosine: return Distance::cosine;
        case MetricName::euclidean: return Distance::euclidean;
        default: break;
    }
    throw std::invalid_argument(std::string(metric_name_string(name)) + " is not a vector distance");
}

MetricName to_metric_name(Distance d) noexcept {
    switch (d) {
        case Distance::braycurtis: return MetricName::braycurtis;
        case Distance::canberra: return MetricName::canberra;
        case Distance::chebyshev: return MetricName::chebyshev;
        case Distance::cityblock: return MetricName::cityblock;
        case Distance::correlation: return MetricName::correlation;
        case Distance::cosine: return MetricName::cosine;
        case Distance::euclidean: return MetricName::euclidean;
    }
    return MetricName::euclidean;
}

std::string_view metric_name_string(MetricName name) noexcept {
    for (const auto& [n, s] : kMetricNames) {
        if (n == name) return s;
    }
    return "?";
}

std::string_view distance_string(Distance d) noexcept { return metric_name_string(to_metric_name(d)); }

std::string_view family_string(MetricFamily f) noexcept {
    switch (f) {
        case MetricFamily::divergence: return "div";
        case MetricFamily::mean_distance: return "mean";
        case MetricFamily::dscd: return "dscd";
    }
    return "?";
}

MetricName parse_metric_name(std::string_view s) {
    for (const auto& [n, str] : kMetricNames) {
        if (str == s) return n;
    }
    if (s == "kl_12") return MetricName::kl_12;
    if (s == "kl_21") return MetricName::kl_21;
    throw std::invalid_argument("unknown metric '" + std::string(s) + "'");
}

Distance parse_distance(std::string_view s) { return to_distance(parse_metric_name(s)); }

MetricFamily parse_family(std::string_view s) {
    if (s == "div" || s == "divergence") return MetricFamily::divergence;
    if (s == "mean" || s == "mean_distance") return MetricFamily::mean_distance;
    if (s == "dscd") return MetricFamily::dscd;
    throw std::invalid_argument("unknown metric family '" + std::string(s) + "'");
}

MetricFamily default_family(MetricName name) noexcept {
    return is_divergence(name) ? MetricFamily::divergence : MetricFamily::mean_distance;
}

void MetricSpec::validate() const {
    const bool div_name = is_divergence(name);
    if (div_name != (family == MetricFamily::divergence)) {
        throw std::invalid_argument("metric '" + std::string(metric_name_string(name)) +
                                    "' cannot be used with family '" + std::string(family_string(family)) +
                                    "'");
    }
    if (family == MetricFamily::dscd && dscd_samples < 1) {
        throw std::invalid_argument("dscd_samples must be >= 1");
    }
}

std::string MetricSpec::label() const {
    if (family == MetricFamily::divergence) return std::string(metric_name_string(name));
    return std::string(family_string(family)) + ":" + std::string(metric_name_string(name));
}

// ---- divergences -----------------------------------------------------------

double kl_divergence(const GaussianSummary& g1, const GaussianSummary& g2) {
    check_gaussians(g1, g2);
    double sum = 0.0;
    for (std::size_t i = 0; i < g1.dim(); ++i) {
        const double ratio = g1.var[i] / g2.var[i];
        const double diff = g2.mean[i] - g1.mean[i];
        sum += ratio - 1.0 - std::log(ratio) + diff * diff / g2.var[i];
    }
    // Each term is >= 0 analytically; clamp away rounding noise at equality.
    return std::max(0.5 * sum, 0.0);
}

double jeffreys_divergence(const GaussianSummary& g1, const GaussianSummary& g2) {
    check_gaussians(g1, g2);
    double sum = 0.0;
    for (std::size_t i = 0; i < g1.dim(); ++i) {
        const double diff = g2.mean[i] - g1.mean[i];
        const double sq = diff * diff;
        sum += (g1.var[i] / g2.var[i] + g2.var[i] / g1.var[i]) - 2.0 + (sq / g2.var[i] + sq / g1.var[i]);
    }
    return std::max(0.25 * sum, 0.0);
}

// ---- distances -------------------------------------------------------------

double vector_distance(Distance name, std::span<const double> v1, std::span<const double> v2) {
    check_dims(v1.size(), v2.size());
    if (v1.empty()) throw std::invalid_argument("vector_distance needs at least one dimension");
    return distance_fn(name)(v1, v2);
}

double dscd_distance(Distance name, const GaussianSummary& g1, const GaussianSummary& g2,
                     std::size_t n_samples, RngStream& rng) {
    check_gaussians(g1, g2);
    if (n_samples < 1) throw std::invalid_argument("dscd_distance needs n_samples >= 1");
    const std::size_t d = g1.dim();
    std::vector<double> x, y;
    sample_gaussian(g1, n_samples, rng, x);
    sample_gaussian(g2, n_samples, rng, y);

    const DistanceFn fn = distance_fn(name);
    double total = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        std::span<const double> xi(x.data() + i * d, d);
        double row = 0.0;
        for (std::size_t j = 0; j < n_samples; ++j) row += fn(xi, std::span<const double>(y.data() + j * d, d));
        total += row;
    }
    return total / (double(n_samples) * double(n_samples));
}

double score_gaussians(const MetricSpec& spec, const GaussianSummary& g1, const GaussianSummary& g2,
                       RngStream& rng) {
    spec.validate();
    switch (spec.family) {
        case MetricFamily::divergence:
            switch (spec.name) {
                case MetricName::kl_12: return kl_divergence(g1, g2);
                case MetricName::kl_21: return kl_divergence(g2, g1);
                default: return jeffreys_divergence(g1, g2);
            }
        case MetricFamily::mean_distance:
            return vector_distance(to_distance(spec.name), g1.mean, g2.mean);
        case MetricFamily::dscd:
            return dscd_distance(to_distance(spec.name), g1, g2, spec.dscd_samples, rng);
    }
    throw std::invalid_argument("unknown metric family");
}

double score_pair(const MetricSpec& spec, const SiblingSet& s1, const SiblingSet& s2, RngStream& rng) {
    const GaussianSummary g1 = fit_gaussian(s1);
    const GaussianSummary g2 = fit_gaussian(s2);
    return score_gaussians(spec, g1, g2, rng);
}

}  // namespace sscd

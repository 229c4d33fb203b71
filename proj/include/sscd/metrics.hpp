#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "sscd/corpus.hpp"
#include "sscd/gaussian.hpp"
#include "sscd/rng.hpp"

namespace sscd {

enum class MetricFamily { divergence, mean_distance, dscd };

enum class MetricName {
    kl_12,
    kl_21,
    jeffreys,
    braycurtis,
    canberra,
    chebyshev,
    cityblock,
    correlation,
    cosine,
    euclidean,
};

/// The seven vector distances.
enum class Distance { braycurtis, canberra, chebyshev, cityblock, correlation, cosine, euclidean };

inline constexpr std::size_t kDefaultDscdSamples = 100;

struct MetricSpec {
    MetricFamily family = MetricFamily::divergence;
    MetricName name = MetricName::kl_12;
    std::size_t dscd_samples = kDefaultDscdSamples;

    /// Throws std::invalid_argument when family and name do not go together.
    void validate() const;
    /// "kl12", "mean:cosine", "dscd:chebyshev", ...
    std::string label() const;

    bool operator==(const MetricSpec&) const = default;
};

bool is_divergence(MetricName name) noexcept;
Distance to_distance(MetricName name);
MetricName to_metric_name(Distance d) noexcept;

std::string_view metric_name_string(MetricName name) noexcept;
std::string_view distance_string(Distance d) noexcept;
std::string_view family_string(MetricFamily f) noexcept;
MetricName parse_metric_name(std::string_view s);
Distance parse_distance(std::string_view s);
MetricFamily parse_family(std::string_view s);
/// Family implied by a bare metric name: divergences -> divergence,
/// distances -> mean_distance.
MetricFamily default_family(MetricName name) noexcept;

/// KL(g1 || g2) for diagonal Gaussians.
double kl_divergence(const GaussianSummary& g1, const GaussianSummary& g2);
/// Jeffrey's divergence, 1/2 KL(g1||g2) + 1/2 KL(g2||g1), evaluated in its
/// symmetric direct form. jeffreys_divergence(a, b) == jeffreys_divergence(b, a)
/// bit-for-bit.
double jeffreys_divergence(const GaussianSummary& g1, const GaussianSummary& g2);

/// Distances between two equal-length vectors. correlation and cosine are
/// 1 - similarity. Undefined cases (zero norm, zero denominator) throw
/// DegenerateInputError.
double vector_distance(Distance name, std::span<const double> v1, std::span<const double> v2);

/// Mean distance over all n_samples^2 cross pairs of vectors drawn from the
/// two Gaussians.
double dscd_distance(Distance name, const GaussianSummary& g1, const GaussianSummary& g2,
                     std::size_t n_samples, RngStream& rng);

double score_gaussians(const MetricSpec& spec, const GaussianSummary& g1, const GaussianSummary& g2,
                       RngStream& rng);

/// d(D1, D2): fit both sets, then dispatch on the metric family. Only the
/// dscd family draws from rng.
double score_pair(const MetricSpec& spec, const SiblingSet& s1, const SiblingSet& s2, RngStream& rng);

}  // namespace sscd

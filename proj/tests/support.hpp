#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sscd/corpus.hpp"

namespace sscd::testing {

inline SiblingSet random_set(std::mt19937_64& rng, std::size_t n, std::uint32_t dim, double mean = 0.0,
                             double sd = 1.0, std::string lemma = "w", std::string corpus = "c") {
    std::normal_distribution<double> normal(mean, sd);
    std::vector<float> values(n * dim);
    for (auto& v : values) v = static_cast<float>(normal(rng));
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(corpus + ":" + std::to_string(i));
    return SiblingSet(std::move(lemma), std::move(corpus), dim, std::move(values), std::move(ids));
}

inline SiblingSet make_set(std::uint32_t dim, std::vector<float> values, std::string lemma = "w",
                           std::string corpus = "c") {
    const std::size_t n = values.size() / dim;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(corpus + ":" + std::to_string(i));
    return SiblingSet(std::move(lemma), std::move(corpus), dim, std::move(values), std::move(ids));
}

/// Rows of a set as vectors, sorted lexicographically.
inline std::vector<std::vector<float>> sorted_rows(const SiblingSet& s) {
    std::vector<std::vector<float>> rows;
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto r = s.row(i);
        rows.emplace_back(r.begin(), r.end());
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

/// Average rank by counting: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> brute_force_ranks(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) {
        double less = 0, equal = 0;
        for (double y : v) {
            less += y < x;
            equal += y == x;
        }
        out.push_back(1.0 + less + (equal - 1.0) / 2.0);
    }
    return out;
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("sscd-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace sscd::testing

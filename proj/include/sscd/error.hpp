#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sscd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the byte offset where parsing failed and,
/// when the failure is tied to a vector row, the row index.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::uint64_t offset,
                std::optional<std::uint64_t> row = std::nullopt)
        : Error(what), offset_(offset), row_(row) {}

    std::uint64_t offset() const noexcept { return offset_; }
    std::optional<std::uint64_t> row() const noexcept { return row_; }

private:
    std::uint64_t offset_;
    std::optional<std::uint64_t> row_;
};

/// Well-formed but inconsistent data (manifest mismatch, duplicate gold word).
class DataError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A word cannot be scored, typically because one corpus has no occurrences.
class UnscorableError : public Error {
public:
    using Error::Error;
};

/// A distance is mathematically undefined for the given vectors.
class DegenerateInputError : public Error {
public:
    DegenerateInputError(std::string metric, const std::string& what)
        : Error(metric + ": " + what), metric_(std::move(metric)) {}

    const std::string& metric() const noexcept { return metric_; }

private:
    std::string metric_;
};

}  // namespace sscd

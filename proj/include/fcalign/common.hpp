#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcalign {

enum class ErrorCode {
    InvalidArgument,
    EmptyAfterFiltering,
    InconsistentTimeGrid,
    ZeroVariance,
    ZeroNorm,
    NonPositiveVariance,
    StepTooLarge,
    InvalidCombination,
    LengthMismatch,
    SingleCluster,
    DegenerateSampling,
    ParseError,
    SchemaError,
    NonPositiveValue,
    IoError,
};

// Process exit status for an error, grouped by family:
// 2 input/format, 3 data validation, 4 numerical, 5 configuration.
int exit_code_for(ErrorCode code);

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Dense row-major square matrix.
template <typename T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    const T* row(std::size_t i) const noexcept { return data_.data() + i * n_; }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

using RealMatrix = SquareMatrix<double>;
using IntMatrix = SquareMatrix<int>;

}  // namespace fcalign

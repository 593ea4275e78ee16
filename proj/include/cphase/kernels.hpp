#pragma once

// Data-parallel inner loops. Each kernel has a serial reference version and an
// OpenMP version with identical per-element summation order, so both produce
// bit-identical results for any thread count; tests hold them to that.

#include <complex>
#include <cstddef>
#include <span>

#include <omp.h>

namespace cphase::kernels {

/// workers == 1 selects the serial reference kernels, 0 the OpenMP default
/// team size, anything larger an explicit team size.
struct ExecPolicy {
    int workers = 0;
    bool serial() const { return workers == 1; }
    int threads() const { return workers > 0 ? workers : omp_get_max_threads(); }
};

namespace serial {

/// out[m] = sum_i weighted_left[i] * right(targets[m] - points[i])
template <class Right>
void pair_convolution(std::span<const double> targets, std::span<const double> points,
                      std::span<const std::complex<double>> weighted_left, const Right& right,
                      std::span<std::complex<double>> out) {
    for (std::size_t m = 0; m < targets.size(); ++m) {
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t i = 0; i < points.size(); ++i) sum += weighted_left[i] * right(targets[m] - points[i]);
        out[m] = sum;
    }
}

/// out[r * cols + c] = cell(r, c)
template <class Cell>
void fill_matrix(std::size_t rows, std::size_t cols, const Cell& cell, std::span<std::complex<double>> out) {
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = cell(r, c);
}

/// task(i) for i in [0, n); tasks must write disjoint outputs.
template <class Task> void for_each_index(std::size_t n, const Task& task) {
    for (std::size_t i = 0; i < n; ++i) task(i);
}

} // namespace serial

namespace omp {

template <class Right>
void pair_convolution(std::span<const double> targets, std::span<const double> points,
                      std::span<const std::complex<double>> weighted_left, const Right& right,
                      std::span<std::complex<double>> out, int threads) {
    const auto n = static_cast<std::ptrdiff_t>(targets.size());
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::ptrdiff_t m = 0; m < n; ++m) {
        std::complex<double> sum{0.0, 0.0};
        const double target = targets[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < points.size(); ++i) sum += weighted_left[i] * right(target - points[i]);
        out[static_cast<std::size_t>(m)] = sum;
    }
}

template <class Cell>
void fill_matrix(std::size_t rows, std::size_t cols, const Cell& cell, std::span<std::complex<double>> out,
                 int threads) {
    const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        const auto row = static_cast<std::size_t>(r);
        for (std::size_t c = 0; c < cols; ++c) out[row * cols + c] = cell(row, c);
    }
}

template <class Task> void for_each_index(std::size_t n, const Task& task, int threads) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < count; ++i) task(static_cast<std::size_t>(i));
}

} // namespace omp

template <class Right>
void pair_convolution(std::span<const double> targets, std::span<const double> points,
                      std::span<const std::complex<double>> weighted_left, const Right& right,
                      std::span<std::complex<double>> out, ExecPolicy policy) {
    if (policy.serial())
        serial::pair_convolution(targets, points, weighted_left, right, out);
    else
        omp::pair_convolution(targets, points, weighted_left, right, out, policy.threads());
}

template <class Cell>
void fill_matrix(std::size_t rows, std::size_t cols, const Cell& cell, std::span<std::complex<double>> out,
                 ExecPolicy policy) {
    if (policy.serial())
        serial::fill_matrix(rows, cols, cell, out);
    else
        omp::fill_matrix(rows, cols, cell, out, policy.threads());
}

template <class Task> void for_each_index(std::size_t n, const Task& task, ExecPolicy policy) {
    if (policy.serial())
        serial::for_each_index(n, task);
    else
        omp::for_each_index(n, task, policy.threads());
}

} // namespace cphase::kernels

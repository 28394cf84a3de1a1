#pragma once

// FFTW plans for the three staggered layouts of an n x n grid. Plans are
// created once per n (under a global lock, since the FFTW planner is not
// thread-safe) and executed on per-call buffers.

#include "chs/grid.hpp"

#include <fftw3.h>

#include <cstddef>
#include <memory>

namespace chs::detail {

class FftwBuffer {
public:
    explicit FftwBuffer(std::size_t size);
    ~FftwBuffer();
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    double* data() noexcept { return data_; }
    double& operator[](std::size_t k) noexcept { return data_[k]; }

private:
    double* data_;
};

class FastTransforms {
public:
    explicit FastTransforms(int n);
    ~FastTransforms();
    FastTransforms(const FastTransforms&) = delete;
    FastTransforms& operator=(const FastTransforms&) = delete;

    int n() const noexcept { return n_; }

    // Cell layout: buffer[j * n + i], i, j = 0..n-1. Cosine transforms in both directions.
    void cell_forward(double* buf) const { fftw_execute_r2r(cell_fwd_, buf, buf); }
    void cell_inverse(double* buf) const { fftw_execute_r2r(cell_inv_, buf, buf); }

    // x-face layout: buffer[j * (n-1) + (a-1)], a = 1..n-1. Sine in x, cosine in y.
    void facex_forward(double* buf) const { fftw_execute_r2r(facex_fwd_, buf, buf); }
    void facex_inverse(double* buf) const { fftw_execute_r2r(facex_inv_, buf, buf); }

    // y-face layout: buffer[(b-1) * n + i], b = 1..n-1. Cosine in x, sine in y.
    void facey_forward(double* buf) const { fftw_execute_r2r(facey_fwd_, buf, buf); }
    void facey_inverse(double* buf) const { fftw_execute_r2r(facey_inv_, buf, buf); }

    /// Forward followed by inverse multiplies by this factor.
    double normalization() const noexcept { return 4.0 * n_ * n_; }

private:
    int n_;
    fftw_plan cell_fwd_ = nullptr;
    fftw_plan cell_inv_ = nullptr;
    fftw_plan facex_fwd_ = nullptr;
    fftw_plan facex_inv_ = nullptr;
    fftw_plan facey_fwd_ = nullptr;
    fftw_plan facey_inv_ = nullptr;
};

/// Shared, lazily created transforms for grid size n.
const FastTransforms& transforms_for(int n);

}  // namespace chs::detail

#include "fast_transforms.hpp"

#include <map>
#include <mutex>
#include <new>

namespace chs::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

FftwBuffer::FftwBuffer(std::size_t size)
    : data_(static_cast<double*>(fftw_malloc(sizeof(double) * (size > 0 ? size : 1)))) {
    if (data_ == nullptr) throw std::bad_alloc();
}

FftwBuffer::~FftwBuffer() { fftw_free(data_); }

FastTransforms::FastTransforms(int n) : n_(n) {
    const int m = n - 1;
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    const std::size_t faces = static_cast<std::size_t>(n) * m;
    FftwBuffer cell(cells);
    FftwBuffer face(faces);
    const unsigned flags = FFTW_ESTIMATE;

    std::lock_guard<std::mutex> lock(planner_mutex());
    // fftw_plan_r2r_2d(n0, n1, ...) transforms a row-major n0 x n1 array; the
    // first dimension is y (slow), the second x (fast).
    cell_fwd_ = fftw_plan_r2r_2d(n, n, cell.data(), cell.data(), FFTW_REDFT10, FFTW_REDFT10, flags);
    cell_inv_ = fftw_plan_r2r_2d(n, n, cell.data(), cell.data(), FFTW_REDFT01, FFTW_REDFT01, flags);
    facex_fwd_ = fftw_plan_r2r_2d(n, m, face.data(), face.data(), FFTW_REDFT10, FFTW_RODFT00, flags);
    facex_inv_ = fftw_plan_r2r_2d(n, m, face.data(), face.data(), FFTW_REDFT01, FFTW_RODFT00, flags);
    facey_fwd_ = fftw_plan_r2r_2d(m, n, face.data(), face.data(), FFTW_RODFT00, FFTW_REDFT10, flags);
    facey_inv_ = fftw_plan_r2r_2d(m, n, face.data(), face.data(), FFTW_RODFT00, FFTW_REDFT01, flags);
}

FastTransforms::~FastTransforms() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (fftw_plan p : {cell_fwd_, cell_inv_, facex_fwd_, facex_inv_, facey_fwd_, facey_inv_}) {
        if (p != nullptr) fftw_destroy_plan(p);
    }
}

const FastTransforms& transforms_for(int n) {
    // The planner lock must outlive the cache, whose destructor takes it.
    static std::mutex& planner = planner_mutex();
    (void)planner;
    static std::mutex cache_mutex;
    static std::map<int, std::unique_ptr<FastTransforms>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FastTransforms>(n);
    return *slot;
}

}  // namespace chs::detail

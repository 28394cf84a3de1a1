#include "chs/grid.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chs {

GridSpec::GridSpec(int n, double length) : n_(n), length_(length) {
    if (n < 2) {
        throw std::invalid_argument("GridSpec: n must be >= 2, got " + std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("GridSpec: length must be positive and finite");
    }
}

// ---------------------------------------------------------------------------
// CellField

CellField::CellField(const GridSpec& grid, double value)
    : grid_(grid),
      data_(static_cast<std::size_t>(grid.n() + 2) * static_cast<std::size_t>(grid.n() + 2),
            value) {}

void CellField::fill_interior(double value) {
    const int n = grid_.n();
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            (*this)(i, j) = value;
        }
    }
}

CellField& CellField::operator+=(const CellField& other) {
    assert(other.grid_ == grid_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

CellField& CellField::operator-=(const CellField& other) {
    assert(other.grid_ == grid_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

CellField& CellField::operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
}

void CellField::axpy(double a, const CellField& x) {
    assert(x.grid_ == grid_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += a * x.data_[k];
}

CellField operator+(CellField a, const CellField& b) { return a += b; }
CellField operator-(CellField a, const CellField& b) { return a -= b; }
CellField operator*(double s, CellField a) { return a *= s; }

// ---------------------------------------------------------------------------
// MacVector

MacVector::MacVector(const GridSpec& grid, double value)
    : grid_(grid),
      fx_(static_cast<std::size_t>(grid.n() + 1) * static_cast<std::size_t>(grid.n() + 2), value),
      fy_(static_cast<std::size_t>(grid.n() + 2) * static_cast<std::size_t>(grid.n() + 1), value) {}

MacVector& MacVector::operator+=(const MacVector& other) {
    assert(other.grid_ == grid_);
    for (std::size_t k = 0; k < fx_.size(); ++k) fx_[k] += other.fx_[k];
    for (std::size_t k = 0; k < fy_.size(); ++k) fy_[k] += other.fy_[k];
    return *this;
}

MacVector& MacVector::operator-=(const MacVector& other) {
    assert(other.grid_ == grid_);
    for (std::size_t k = 0; k < fx_.size(); ++k) fx_[k] -= other.fx_[k];
    for (std::size_t k = 0; k < fy_.size(); ++k) fy_[k] -= other.fy_[k];
    return *this;
}

MacVector& MacVector::operator*=(double a) {
    for (double& v : fx_) v *= a;
    for (double& v : fy_) v *= a;
    return *this;
}

void MacVector::axpy(double a, const MacVector& v) {
    assert(v.grid_ == grid_);
    for (std::size_t k = 0; k < fx_.size(); ++k) fx_[k] += a * v.fx_[k];
    for (std::size_t k = 0; k < fy_.size(); ++k) fy_[k] += a * v.fy_[k];
}

MacVector operator+(MacVector a, const MacVector& b) { return a += b; }
MacVector operator-(MacVector a, const MacVector& b) { return a -= b; }
MacVector operator*(double s, MacVector a) { return a *= s; }

// ---------------------------------------------------------------------------
// Boundary conditions

void fill_neumann_ghost_inplace(CellField& f) {
    const int n = f.n();
    for (int j = 1; j <= n; ++j) {
        f(0, j) = f(1, j);
        f(n + 1, j) = f(n, j);
    }
    for (int i = 1; i <= n; ++i) {
        f(i, 0) = f(i, 1);
        f(i, n + 1) = f(i, n);
    }
    // Corners are never read by the 5-point stencils; keep them deterministic.
    f(0, 0) = f(1, 1);
    f(n + 1, 0) = f(n, 1);
    f(0, n + 1) = f(1, n);
    f(n + 1, n + 1) = f(n, n);
}

CellField fill_neumann_ghost(CellField f) {
    fill_neumann_ghost_inplace(f);
    return f;
}

void fill_no_penetration_inplace(MacVector& v) {
    const int n = v.n();
    for (int j = 0; j <= n + 1; ++j) {
        v.x(0, j) = 0.0;
        v.x(n, j) = 0.0;
    }
    for (int i = 0; i <= n + 1; ++i) {
        v.y(i, 0) = 0.0;
        v.y(i, n) = 0.0;
    }
}

MacVector fill_no_penetration(MacVector v) {
    fill_no_penetration_inplace(v);
    return v;
}

void fill_free_slip_inplace(MacVector& v) {
    const int n = v.n();
    for (int a = 0; a <= n; ++a) {
        v.x(a, 0) = v.x(a, 1);
        v.x(a, n + 1) = v.x(a, n);
    }
    for (int b = 0; b <= n; ++b) {
        v.y(0, b) = v.y(1, b);
        v.y(n + 1, b) = v.y(n, b);
    }
}

MacVector fill_free_slip(MacVector v) {
    fill_free_slip_inplace(v);
    return v;
}

void fill_velocity_inplace(MacVector& v) {
    fill_no_penetration_inplace(v);
    fill_free_slip_inplace(v);
}

}  // namespace chs

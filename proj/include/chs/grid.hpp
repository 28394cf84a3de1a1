#pragma once

// Uniform square MAC grid on (0, L)^2 with N x N cells.
//
// Index conventions (x index first):
//   cell (i, j), i, j = 0..n+1       center ((i - 1/2) h, (j - 1/2) h); 0 and n+1 are ghosts
//   x-face (a, j), a = 0..n, j = 0..n+1   position (a h, (j - 1/2) h); j = 0, n+1 are ghosts
//   y-face (i, b), i = 0..n+1, b = 0..n   position ((i - 1/2) h, b h); i = 0, n+1 are ghosts
// so the x-face "i + 1/2" of cell i has a = i.

#include <cstddef>
#include <vector>

namespace chs {

class GridSpec {
public:
    GridSpec(int n, double length = 1.0);

    int n() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double h() const noexcept { return length_ / n_; }
    double area() const noexcept { return length_ * length_; }

    /// Cell-center coordinate of cell index i (1-based interior).
    double center(int i) const noexcept { return (i - 0.5) * h(); }

    bool operator==(const GridSpec& other) const noexcept = default;

private:
    int n_;
    double length_;
};

class CellField {
public:
    explicit CellField(const GridSpec& grid, double value = 0.0);

    const GridSpec& grid() const noexcept { return grid_; }
    int n() const noexcept { return grid_.n(); }

    double& operator()(int i, int j) noexcept { return data_[index(i, j)]; }
    double operator()(int i, int j) const noexcept { return data_[index(i, j)]; }

    std::vector<double>& raw() noexcept { return data_; }
    const std::vector<double>& raw() const noexcept { return data_; }

    /// Sets every interior cell; ghosts are left untouched.
    void fill_interior(double value);

    CellField& operator+=(const CellField& other);
    CellField& operator-=(const CellField& other);
    CellField& operator*=(double a);
    /// this += a * x over interior and ghosts.
    void axpy(double a, const CellField& x);

private:
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.n() + 2) +
               static_cast<std::size_t>(i);
    }

    GridSpec grid_;
    std::vector<double> data_;
};

CellField operator+(CellField a, const CellField& b);
CellField operator-(CellField a, const CellField& b);
CellField operator*(double s, CellField a);

class MacVector {
public:
    explicit MacVector(const GridSpec& grid, double value = 0.0);

    const GridSpec& grid() const noexcept { return grid_; }
    int n() const noexcept { return grid_.n(); }

    double& x(int a, int j) noexcept { return fx_[x_index(a, j)]; }
    double x(int a, int j) const noexcept { return fx_[x_index(a, j)]; }
    double& y(int i, int b) noexcept { return fy_[y_index(i, b)]; }
    double y(int i, int b) const noexcept { return fy_[y_index(i, b)]; }

    std::vector<double>& raw_x() noexcept { return fx_; }
    const std::vector<double>& raw_x() const noexcept { return fx_; }
    std::vector<double>& raw_y() noexcept { return fy_; }
    const std::vector<double>& raw_y() const noexcept { return fy_; }

    MacVector& operator+=(const MacVector& other);
    MacVector& operator-=(const MacVector& other);
    MacVector& operator*=(double a);
    void axpy(double a, const MacVector& v);

private:
    // fx is (n+1) x (n+2), fy is (n+2) x (n+1); first index fastest.
    std::size_t x_index(int a, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.n() + 1) +
               static_cast<std::size_t>(a);
    }
    std::size_t y_index(int i, int b) const noexcept {
        return static_cast<std::size_t>(b) * static_cast<std::size_t>(grid_.n() + 2) +
               static_cast<std::size_t>(i);
    }

    GridSpec grid_;
    std::vector<double> fx_;
    std::vector<double> fy_;
};

MacVector operator+(MacVector a, const MacVector& b);
MacVector operator-(MacVector a, const MacVector& b);
MacVector operator*(double s, MacVector a);

// Ghost fills. Each copies its argument, fills, and returns; the in-place
// variants are what the stencil code uses internally.

/// Homogeneous Neumann: every ghost cell equals its adjacent interior cell.
CellField fill_neumann_ghost(CellField f);
void fill_neumann_ghost_inplace(CellField& f);

/// Zeroes the normal component on the four boundary faces.
MacVector fill_no_penetration(MacVector v);
void fill_no_penetration_inplace(MacVector& v);

/// Tangential ghosts mirror the first interior row/column.
MacVector fill_free_slip(MacVector v);
void fill_free_slip_inplace(MacVector& v);

/// Both velocity fills, no-penetration first.
void fill_velocity_inplace(MacVector& v);

}  // namespace chs

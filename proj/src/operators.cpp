#include "chs/operators.hpp"

#include "chs/linsolve.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace chs {

void SolverSettings::validate() const {
    if (!(cg_rel_tol > 0.0) || !(newton_tol > 0.0) || !(safeguard_delta > 0.0)) {
        throw std::invalid_argument("SolverSettings: tolerances must be positive");
    }
    if (cg_max_iter < 0 || newton_max_iter < 1) {
        throw std::invalid_argument("SolverSettings: iteration caps must be >= 1");
    }
    if (safeguard_delta >= 0.5) {
        throw std::invalid_argument("SolverSettings: safeguard_delta must be < 0.5");
    }
}

MacVector grad(const CellField& phi) {
    const int n = phi.n();
    const double inv_h = 1.0 / phi.grid().h();
    MacVector g(phi.grid());
    for (int j = 1; j <= n; ++j) {
        for (int a = 0; a <= n; ++a) {
            g.x(a, j) = (phi(a + 1, j) - phi(a, j)) * inv_h;
        }
    }
    for (int b = 0; b <= n; ++b) {
        for (int i = 1; i <= n; ++i) {
            g.y(i, b) = (phi(i, b + 1) - phi(i, b)) * inv_h;
        }
    }
    return g;
}

CellField div(const MacVector& v) {
    const int n = v.n();
    const double inv_h = 1.0 / v.grid().h();
    CellField d(v.grid());
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            d(i, j) = (v.x(i, j) - v.x(i - 1, j) + v.y(i, j) - v.y(i, j - 1)) * inv_h;
        }
    }
    return d;
}

MacVector avg_to_faces(const CellField& phi) {
    const int n = phi.n();
    MacVector g(phi.grid());
    for (int j = 1; j <= n; ++j) {
        for (int a = 0; a <= n; ++a) {
            g.x(a, j) = 0.5 * (phi(a + 1, j) + phi(a, j));
        }
    }
    for (int b = 0; b <= n; ++b) {
        for (int i = 1; i <= n; ++i) {
            g.y(i, b) = 0.5 * (phi(i, b + 1) + phi(i, b));
        }
    }
    return g;
}

CellField laplacian_cell(const CellField& phi) {
    const int n = phi.n();
    const double inv_h2 = 1.0 / (phi.grid().h() * phi.grid().h());
    CellField lap(phi.grid());
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            lap(i, j) = (phi(i + 1, j) + phi(i - 1, j) + phi(i, j + 1) + phi(i, j - 1) -
                         4.0 * phi(i, j)) *
                        inv_h2;
        }
    }
    return lap;
}

MacVector laplacian_face(const MacVector& v) {
    const int n = v.n();
    const double inv_h2 = 1.0 / (v.grid().h() * v.grid().h());
    MacVector lap(v.grid());
    for (int j = 1; j <= n; ++j) {
        for (int a = 1; a < n; ++a) {
            lap.x(a, j) = (v.x(a + 1, j) + v.x(a - 1, j) + v.x(a, j + 1) + v.x(a, j - 1) -
                           4.0 * v.x(a, j)) *
                          inv_h2;
        }
    }
    for (int b = 1; b < n; ++b) {
        for (int i = 1; i <= n; ++i) {
            lap.y(i, b) = (v.y(i + 1, b) + v.y(i - 1, b) + v.y(i, b + 1) + v.y(i, b - 1) -
                           4.0 * v.y(i, b)) *
                          inv_h2;
        }
    }
    return lap;
}

MacVector multiply(const MacVector& a, const MacVector& b) {
    assert(a.grid() == b.grid());
    MacVector out(a.grid());
    auto& ox = out.raw_x();
    auto& oy = out.raw_y();
    for (std::size_t k = 0; k < ox.size(); ++k) ox[k] = a.raw_x()[k] * b.raw_x()[k];
    for (std::size_t k = 0; k < oy.size(); ++k) oy[k] = a.raw_y()[k] * b.raw_y()[k];
    return out;
}

double inner_cell(const CellField& a, const CellField& b) {
    assert(a.grid() == b.grid());
    const int n = a.n();
    long double sum = 0.0L;
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            sum += static_cast<long double>(a(i, j)) * b(i, j);
        }
    }
    const double h = a.grid().h();
    return static_cast<double>(sum * h * h);
}

double inner_face(const MacVector& f, const MacVector& g) {
    assert(f.grid() == g.grid());
    const int n = f.n();
    long double interior = 0.0L;
    long double boundary = 0.0L;
    for (int j = 1; j <= n; ++j) {
        for (int a = 1; a < n; ++a) interior += static_cast<long double>(f.x(a, j)) * g.x(a, j);
        boundary += static_cast<long double>(f.x(0, j)) * g.x(0, j);
        boundary += static_cast<long double>(f.x(n, j)) * g.x(n, j);
    }
    for (int i = 1; i <= n; ++i) {
        for (int b = 1; b < n; ++b) interior += static_cast<long double>(f.y(i, b)) * g.y(i, b);
        boundary += static_cast<long double>(f.y(i, 0)) * g.y(i, 0);
        boundary += static_cast<long double>(f.y(i, n)) * g.y(i, n);
    }
    const double h = f.grid().h();
    return static_cast<double>((interior + 0.5L * boundary) * h * h);
}

namespace {

void check_p(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm: p must be >= 1");
}

}  // namespace

double norm(const CellField& phi, double p) {
    check_p(p);
    const int n = phi.n();
    if (std::isinf(p)) return max_abs(phi);
    if (p == 2.0) return std::sqrt(std::max(0.0, inner_cell(phi, phi)));
    long double sum = 0.0L;
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) sum += std::pow(std::abs(phi(i, j)), p);
    }
    const double h = phi.grid().h();
    return std::pow(static_cast<double>(sum * h * h), 1.0 / p);
}

double norm(const MacVector& f) { return std::sqrt(std::max(0.0, inner_face(f, f))); }

double grad_norm(const CellField& phi, double p) {
    check_p(p);
    const MacVector g = grad(phi);
    const int n = phi.n();
    if (std::isinf(p)) {
        double m = 0.0;
        for (int j = 1; j <= n; ++j)
            for (int a = 0; a <= n; ++a) m = std::max(m, std::abs(g.x(a, j)));
        for (int b = 0; b <= n; ++b)
            for (int i = 1; i <= n; ++i) m = std::max(m, std::abs(g.y(i, b)));
        return m;
    }
    if (p == 2.0) return norm(g);
    long double interior = 0.0L;
    long double boundary = 0.0L;
    for (int j = 1; j <= n; ++j) {
        for (int a = 1; a < n; ++a) interior += std::pow(std::abs(g.x(a, j)), p);
        boundary += std::pow(std::abs(g.x(0, j)), p) + std::pow(std::abs(g.x(n, j)), p);
    }
    for (int i = 1; i <= n; ++i) {
        for (int b = 1; b < n; ++b) interior += std::pow(std::abs(g.y(i, b)), p);
        boundary += std::pow(std::abs(g.y(i, 0)), p) + std::pow(std::abs(g.y(i, n)), p);
    }
    const double h = phi.grid().h();
    return std::pow(static_cast<double>((interior + 0.5L * boundary) * h * h), 1.0 / p);
}

double h1_norm(const CellField& phi) {
    const double a = norm(phi);
    const double b = grad_norm(phi);
    return std::sqrt(a * a + b * b);
}

double velocity_grad_norm_sq(const MacVector& v) {
    const int n = v.n();
    long double sum = 0.0L;
    // x-component: differences across cells in x, between interior rows in y.
    for (int j = 1; j <= n; ++j) {
        for (int a = 0; a < n; ++a) {
            const long double d = static_cast<long double>(v.x(a + 1, j)) - v.x(a, j);
            sum += d * d;
        }
    }
    for (int j = 1; j < n; ++j) {
        for (int a = 1; a < n; ++a) {
            const long double d = static_cast<long double>(v.x(a, j + 1)) - v.x(a, j);
            sum += d * d;
        }
    }
    // y-component, transposed.
    for (int b = 0; b < n; ++b) {
        for (int i = 1; i <= n; ++i) {
            const long double d = static_cast<long double>(v.y(i, b + 1)) - v.y(i, b);
            sum += d * d;
        }
    }
    for (int b = 1; b < n; ++b) {
        for (int i = 1; i < n; ++i) {
            const long double d = static_cast<long double>(v.y(i + 1, b)) - v.y(i, b);
            sum += d * d;
        }
    }
    return static_cast<double>(sum);
}

double max_abs(const CellField& phi) {
    const int n = phi.n();
    double m = 0.0;
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) m = std::max(m, std::abs(phi(i, j)));
    return m;
}

double max_value(const CellField& phi) {
    const int n = phi.n();
    double m = phi(1, 1);
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) m = std::max(m, phi(i, j));
    return m;
}

double min_value(const CellField& phi) {
    const int n = phi.n();
    double m = phi(1, 1);
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) m = std::min(m, phi(i, j));
    return m;
}

double mean(const CellField& phi) {
    const int n = phi.n();
    long double sum = 0.0L;
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) sum += phi(i, j);
    return static_cast<double>(sum / (static_cast<long double>(n) * n));
}

CellField subtract_mean(CellField phi) {
    const double m = mean(phi);
    const int n = phi.n();
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) phi(i, j) -= m;
    return phi;
}

double hm1_norm(const CellField& phi, const SolverSettings& settings) {
    const double l2 = norm(phi);
    if (std::abs(mean(phi)) > 1e-12 * std::max(l2, 1e-300) && l2 > 0.0) {
        throw std::invalid_argument("hm1_norm: argument must have zero mean");
    }
    if (l2 == 0.0) return 0.0;
    const CellField psi = inv_neg_laplacian(phi, settings);
    return std::sqrt(std::max(0.0, inner_cell(phi, psi)));
}

}  // namespace chs

#include "rpfcone/cheb.hpp"

#include <cmath>
#include <numbers>

#include "rpfcone/errors.hpp"

namespace rpfcone::cheb {

namespace {
constexpr double kPi = std::numbers::pi;

double theta_of(int n, int k) { return (2.0 * k + 1.0) * kPi / (2.0 * n); }
}  // namespace

std::vector<double> nodes01(int n) {
    if (n < 2) throw ValidationError("chebyshev grid needs at least 2 nodes");
    std::vector<double> x(n);
    // cos(theta) decreases in k; reverse so nodes are increasing.
    for (int k = 0; k < n; ++k) x[n - 1 - k] = 0.5 * (1.0 + std::cos(theta_of(n, k)));
    return x;
}

std::vector<double> bary_weights(int n) {
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) {
        double wk = std::sin(theta_of(n, k)) * ((k % 2 == 0) ? 1.0 : -1.0);
        w[n - 1 - k] = wk;
    }
    return w;
}

std::vector<double> quad_weights(int n) {
    // Fejer's first rule on [-1,1], halved for the map to [0,1].
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) {
        double th = theta_of(n, k);
        double s = 0.0;
        for (int m = 1; m <= n / 2; ++m) s += std::cos(2.0 * m * th) / (4.0 * m * m - 1.0);
        w[n - 1 - k] = (2.0 / n) * (1.0 - 2.0 * s) * 0.5;
    }
    return w;
}

Complex bary_eval(const std::vector<double>& nodes, const std::vector<double>& w,
                  const std::vector<Complex>& values, double x) {
    const std::size_t n = nodes.size();
    Complex num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double dx = x - nodes[j];
        if (dx == 0.0) return values[j];
        double c = w[j] / dx;
        num += c * values[j];
        den += c;
    }
    return num / den;
}

std::vector<Complex> coeffs(const std::vector<Complex>& values) {
    const int n = static_cast<int>(values.size());
    std::vector<Complex> c(n, 0.0);
    for (int m = 0; m < n; ++m) {
        Complex acc = 0.0;
        for (int k = 0; k < n; ++k) {
            // values are stored at increasing x; node n-1-k has angle theta_k.
            acc += values[n - 1 - k] * std::cos(m * theta_of(n, k));
        }
        c[m] = acc * ((m == 0 ? 1.0 : 2.0) / n);
    }
    return c;
}

std::vector<Complex> derivative_coeffs(const std::vector<Complex>& c) {
    const int n = static_cast<int>(c.size());
    std::vector<Complex> d(n, 0.0);
    if (n >= 2) {
        d[n - 2] = 2.0 * (n - 1.0) * c[n - 1];
        for (int k = n - 3; k >= 0; --k) d[k] = d[k + 2] + 2.0 * (k + 1.0) * c[k + 1];
        d[0] *= 0.5;
    }
    for (auto& v : d) v *= 2.0;  // dt/dx for t = 2x - 1
    return d;
}

Complex clenshaw(const std::vector<Complex>& c, double x) {
    const double t = 2.0 * x - 1.0;
    Complex b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        Complex b0 = 2.0 * t * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

std::vector<std::vector<double>> derivative_rows(int n, double x0, int max_order) {
    std::vector<std::vector<double>> rows(max_order + 1, std::vector<double>(n, 0.0));
    std::vector<Complex> e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        auto c = coeffs(e);
        rows[0][j] = clenshaw(c, x0).real();
        for (int m = 1; m <= max_order; ++m) {
            c = derivative_coeffs(c);
            rows[m][j] = clenshaw(c, x0).real();
        }
        e[j] = 0.0;
    }
    return rows;
}

Complex hurwitz_zeta(Complex kappa, double a) {
    if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");
    if (kappa.real() <= 1.0) throw DomainError("hurwitz_zeta: requires Re(kappa) > 1");
    // Push `a` high enough for the Euler-Maclaurin expansion.
    Complex head = 0.0;
    while (a < 64.0) {
        head += std::pow(Complex(a), -kappa);
        a += 1.0;
    }
    const Complex k = kappa;
    const Complex am = std::pow(Complex(a), -k);
    Complex tail = a * am / (k - 1.0) + 0.5 * am;
    Complex term = k * am / a / 12.0;
    tail += term;
    term = k * (k + 1.0) * (k + 2.0) * am / (a * a * a) / 720.0;
    tail -= term;
    term = k * (k + 1.0) * (k + 2.0) * (k + 3.0) * (k + 4.0) * am / std::pow(a, 5) / 30240.0;
    tail += term;
    return head + tail;
}

}  // namespace rpfcone::cheb

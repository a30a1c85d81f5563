#include "bcdcp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "bcdcp/errors.hpp"

namespace bcdcp::num {

namespace {

// Gauss-Kronrod 15-point nodes/weights with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double a, b, value, error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double result_g = fc * kWg[3];
    double result_k = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x);
        double f2 = f(c + x);
        result_k += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
    }
    result_k *= h;
    result_g *= h;
    double err = std::abs(result_k - result_g);
    // standard QUADPACK-style error sharpening
    if (err > 0.0) err = std::pow(200.0 * err, 1.5);
    return {a, b, result_k, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0, true};
    std::vector<std::pair<Segment, int>> heap;  // segment + depth
    heap.push_back({gk15(f, a, b), 0});
    double total_err = heap[0].first.error;
    for (int iter = 0; iter < (1 << 16); ++iter) {
        if (total_err <= abs_tol) break;
        auto worst = std::max_element(heap.begin(), heap.end(),
                                      [](const auto& l, const auto& r) {
                                          return l.first.error < r.first.error;
                                      });
        if (worst->second >= max_depth) break;
        Segment seg = worst->first;
        int depth = worst->second + 1;
        heap.erase(worst);
        double mid = 0.5 * (seg.a + seg.b);
        heap.push_back({gk15(f, seg.a, mid), depth});
        heap.push_back({gk15(f, mid, seg.b), depth});
        total_err = 0.0;
        for (const auto& [s, d] : heap) total_err += s.error;
    }
    double total = 0.0;
    total_err = 0.0;
    for (const auto& [s, d] : heap) {
        total += s.value;
        total_err += s.error;
    }
    return {total, total_err, total_err <= abs_tol};
}

QuadResult integrate_half_line(const std::function<double(double)>& f,
                               double abs_tol, int max_depth) {
    auto g = [&f](double s) {
        double om = 1.0 - s;
        double x = s / om;
        double fx = f(x);
        if (fx == 0.0) return 0.0;  // avoid 0 * inf at the mapped endpoint
        return fx / (om * om);
    };
    return integrate(g, 0.0, 1.0, abs_tol, max_depth);
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, const char* what) {
    QuadResult r = integrate(f, a, b, abs_tol);
    if (!r.converged) throw NumericError(what, r.error);
    return r.value;
}

double integrate_half_line_or_throw(const std::function<double(double)>& f,
                                    double abs_tol, const char* what) {
    QuadResult r = integrate_half_line(f, abs_tol);
    if (!r.converged) throw NumericError(what, r.error);
    return r.value;
}

const GlRule& gauss_legendre(int n) {
    static std::map<int, GlRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GlRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.w[i] = w;
        rule.x[n - 1 - i] = x;
        rule.w[n - 1 - i] = w;
    }
    auto [pos, inserted] = cache.emplace(n, std::move(rule));
    return pos->second;
}

PanelRule graded_unit_rule(int nodes_per_panel, int geo_levels, int mid_panels) {
    const GlRule& gl = gauss_legendre(nodes_per_panel);
    std::vector<double> edges;
    edges.push_back(0.0);
    for (int i = 0; i < geo_levels - 1; ++i)
        edges.push_back(std::ldexp(1.0, -(geo_levels - i)));   // 2^-geo .. 1/4
    for (int i = 0; i <= mid_panels; ++i)
        edges.push_back(0.25 + 0.5 * i / mid_panels);
    for (int i = geo_levels - 2; i >= 0; --i)
        edges.push_back(1.0 - std::ldexp(1.0, -(geo_levels - i)));
    edges.push_back(1.0);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    PanelRule rule;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        for (int j = 0; j < nodes_per_panel; ++j) {
            rule.x.push_back(0.5 * (b - a) * gl.x[j] + 0.5 * (a + b));
            rule.w.push_back(0.5 * (b - a) * gl.w[j]);
        }
    }
    return rule;
}

double brent(const std::function<double(double)>& f, double a, double b,
             double tol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw DomainError("brent: root not bracketed");
    if (std::abs(fa) < std::abs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa, d = b - a, s = b, fs = fb;
    bool mflag = true;
    for (int i = 0; i < max_iter && fb != 0.0 && std::abs(b - a) > tol; ++i) {
        if (fa != fc && fb != fc) {
            s = a * fb * fc / ((fa - fb) * (fa - fc)) +
                b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }
        double lo = 0.25 * (3.0 * a + b);
        bool cond = !((s > lo && s < b) || (s < lo && s > b)) ||
                    (mflag && std::abs(s - b) >= 0.5 * std::abs(b - c)) ||
                    (!mflag && std::abs(s - b) >= 0.5 * std::abs(c - d)) ||
                    (mflag && std::abs(b - c) < tol) ||
                    (!mflag && std::abs(c - d) < tol);
        if (cond) {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if (fa * fs < 0.0) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::abs(fa) < std::abs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
    }
    return b;
}

Chebyshev::Chebyshev(const std::function<double(double)>& f, double a, double b, int n)
    : a_(a), b_(b), coef_(n) {
    std::vector<double> fv(n);
    for (int k = 0; k < n; ++k) {
        double theta = M_PI * (k + 0.5) / n;
        double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
        fv[k] = f(x);
    }
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += fv[k] * std::cos(M_PI * j * (k + 0.5) / n);
        coef_[j] = 2.0 * s / n;
    }
}

double Chebyshev::operator()(double x) const {
    double t = (2.0 * x - a_ - b_) / (b_ - a_);
    double d = 0.0, dd = 0.0;
    for (int j = static_cast<int>(coef_.size()) - 1; j >= 1; --j) {
        double sv = d;
        d = 2.0 * t * d - dd + coef_[j];
        dd = sv;
    }
    return t * d - dd + 0.5 * coef_[0];
}

}  // namespace bcdcp::num

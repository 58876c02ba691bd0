#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "crtc/errors.hpp"

namespace crtc {

using Complex = std::complex<double>;

// Coefficients this far below the largest one (relatively) are treated as zero
// when normalizing a polynomial.
inline constexpr double kCoeffStripTol = 1e-12;

// Roots closer than kClusterTolFactor * (1 + max |root|) are merged into one
// root with summed multiplicity.
inline constexpr double kClusterTolFactor = 1e-6;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Univariate polynomial over C, coefficients ascending by power.  Always kept
// normalized: the leading coefficient is nonzero unless the polynomial is
// identically zero (empty coefficient list, degree() == -1).
class Poly {
public:
    Poly() = default;

    Poly(std::initializer_list<Complex> ascending)
        : coeffs_(ascending) { strip(); }

    explicit Poly(std::vector<Complex> ascending)
        : coeffs_(std::move(ascending)) { strip(); }

    static Poly constant(Complex c) { return Poly({c}); }

    static Poly monomial(int power, Complex c = 1.0) {
        std::vector<Complex> v(static_cast<size_t>(power) + 1, 0.0);
        v.back() = c;
        return Poly(std::move(v));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    const std::vector<Complex>& coeffs() const { return coeffs_; }

    Complex coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
        return coeffs_[static_cast<size_t>(k)];
    }

    Complex leading() const { return coeffs_.empty() ? Complex(0.0) : coeffs_.back(); }

    double max_abs_coeff() const {
        double m = 0.0;
        for (Complex c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    Complex operator()(Complex x) const {
        Complex acc = 0.0;
        for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    // Value and derivative in one Horner pass.
    std::pair<Complex, Complex> eval_with_derivative(Complex x) const {
        Complex v = 0.0, dv = 0.0;
        for (size_t i = coeffs_.size(); i-- > 0;) {
            dv = dv * x + v;
            v = v * x + coeffs_[i];
        }
        return {v, dv};
    }

    // sum |c_k| |x|^k — the natural backward-error scale of an evaluation.
    double eval_scale(double ax) const {
        double acc = 0.0;
        for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * ax + std::abs(coeffs_[i]);
        return acc;
    }

    Poly derivative() const {
        if (coeffs_.size() <= 1) return Poly();
        std::vector<Complex> d(coeffs_.size() - 1);
        for (size_t k = 1; k < coeffs_.size(); ++k)
            d[k - 1] = coeffs_[k] * static_cast<double>(k);
        return Poly(std::move(d));
    }

    // w^target_degree * p(1/w).  Requires target_degree >= degree().
    Poly reversed(int target_degree) const {
        std::vector<Complex> r(static_cast<size_t>(target_degree) + 1, 0.0);
        for (size_t k = 0; k < coeffs_.size(); ++k)
            r[static_cast<size_t>(target_degree) - k] = coeffs_[k];
        return Poly(std::move(r));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return Poly(std::move(c));
    }

    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
        return Poly(std::move(c));
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            for (size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Poly(std::move(c));
    }

    friend Poly operator*(Complex s, const Poly& a) {
        std::vector<Complex> c(a.coeffs_);
        for (Complex& v : c) v *= s;
        return Poly(std::move(c));
    }

    friend Poly operator-(const Poly& a) { return Complex(-1.0) * a; }

    bool identical(const Poly& other) const { return coeffs_ == other.coeffs_; }

private:
    void strip() {
        double m = max_abs_coeff();
        double tol = kCoeffStripTol * m;
        while (!coeffs_.empty() && std::abs(coeffs_.back()) <= tol)
            coeffs_.pop_back();
    }

    std::vector<Complex> coeffs_;
};

inline Poly normalize(std::vector<Complex> ascending) { return Poly(std::move(ascending)); }

enum class ArithOp { add, sub, mul };

inline Poly arith(const Poly& p, const Poly& q, ArithOp op) {
    switch (op) {
        case ArithOp::add: return p + q;
        case ArithOp::sub: return p - q;
        case ArithOp::mul: return p * q;
    }
    return Poly();
}

inline Poly pow(const Poly& p, int e) {
    Poly acc = Poly::constant(1.0);
    for (int i = 0; i < e; ++i) acc = acc * p;
    return acc;
}

// ---------------------------------------------------------------------------
// Root sets

struct RootEntry {
    Complex value;
    int multiplicity = 1;
};

struct RootSet {
    std::vector<RootEntry> roots;
    int degree_deficit = 0;  // roots at infinity relative to the intended degree

    int finite_multiplicity() const {
        int s = 0;
        for (const RootEntry& r : roots) s += r.multiplicity;
        return s;
    }

    int total_multiplicity() const { return finite_multiplicity() + degree_deficit; }

    std::vector<Complex> values_with_multiplicity() const {
        std::vector<Complex> v;
        for (const RootEntry& r : roots)
            for (int i = 0; i < r.multiplicity; ++i) v.push_back(r.value);
        return v;
    }
};

struct SolveOptions {
    double tol = 1e-12;   // residual target, relative to the evaluation scale
    int max_iter = 500;
    uint32_t seed = 0;    // perturbs the starting circle
};

namespace detail {

// Ehrlich-Aberth simultaneous iteration from a circle of initial guesses.
// Returns degree() raw (unclustered) roots.
inline std::vector<Complex> aberth(const Poly& p, const SolveOptions& opt) {
    const int d = p.degree();
    std::vector<Complex> z(static_cast<size_t>(d));

    double ratio = 0.0;
    for (int i = 0; i < d; ++i)
        ratio = std::max(ratio, std::abs(p.coeff(i) / p.leading()));
    const double radius = 1.0 + ratio;

    // A deterministic angular offset avoids symmetry stalls; the seed shifts it.
    const double offset = 0.3799 + 1e-3 * static_cast<double>(opt.seed % 9973);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < d; ++i) {
        double th = 2.0 * pi * (static_cast<double>(i) + offset) / static_cast<double>(d) + offset;
        z[static_cast<size_t>(i)] = radius * Complex(std::cos(th), std::sin(th));
    }

    std::vector<bool> done(static_cast<size_t>(d), false);
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        int remaining = 0;
        for (int i = 0; i < d; ++i) {
            if (done[static_cast<size_t>(i)]) continue;
            Complex zi = z[static_cast<size_t>(i)];
            auto [v, dv] = p.eval_with_derivative(zi);
            if (std::abs(v) <= opt.tol * p.eval_scale(std::abs(zi))) {
                done[static_cast<size_t>(i)] = true;
                continue;
            }
            ++remaining;
            Complex sum = 0.0;
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                Complex diff = zi - z[static_cast<size_t>(j)];
                if (std::abs(diff) < 1e-300) diff = Complex(1e-300, 0.0);
                sum += 1.0 / diff;
            }
            Complex w;
            if (std::abs(dv) < 1e-300) {
                w = Complex(1e-6, 1e-6) * (1.0 + std::abs(zi));
            } else {
                Complex nr = v / dv;
                Complex denom = 1.0 - nr * sum;
                w = (std::abs(denom) < 1e-300) ? nr : nr / denom;
            }
            if (!is_finite(w)) w = Complex(1e-6, -1e-6) * (1.0 + std::abs(zi));
            z[static_cast<size_t>(i)] = zi - w;
        }
        if (remaining == 0) return z;
    }

    for (int i = 0; i < d; ++i) {
        Complex zi = z[static_cast<size_t>(i)];
        if (std::abs(p(zi)) > opt.tol * p.eval_scale(std::abs(zi)))
            throw NonConvergence("all_roots: iteration cap hit before residual target");
    }
    return z;
}

// Newton refinement of a candidate k-fold root via the (k-1)-th derivative,
// which has a simple zero there.  Validates that p and its first k-1
// derivatives genuinely vanish at the refined point (up to the backward-error
// scale); a cluster of distinct roots fails this and is left alone.
inline bool refine_cluster_center(const Poly& p, Complex& center, int k, double spread) {
    Poly g = p;
    for (int i = 1; i < k; ++i) g = g.derivative();
    Complex z = center;
    for (int it = 0; it < 40; ++it) {
        auto [v, dv] = g.eval_with_derivative(z);
        if (std::abs(dv) < 1e-300) return false;
        Complex step = v / dv;
        z -= step;
        if (!is_finite(z)) return false;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    if (std::abs(z - center) > 4.0 * spread + 1e-12) return false;
    Poly q = p;
    for (int j = 0; j < k; ++j) {
        if (std::abs(q(z)) > 3e-11 * q.eval_scale(std::abs(z)) + 1e-290) return false;
        q = q.derivative();
    }
    center = z;
    return true;
}

// Single-linkage components of a point set at the given radius.
inline std::vector<std::vector<Complex>> link_clusters(const std::vector<Complex>& pts,
                                                       double radius) {
    const size_t m = pts.size();
    std::vector<size_t> parent(m);
    std::iota(parent.begin(), parent.end(), size_t{0});
    auto find = [&](size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            if (std::abs(pts[i] - pts[j]) <= radius) parent[find(i)] = find(j);
    std::vector<std::vector<Complex>> out;
    std::vector<int> slot(m, -1);
    for (size_t i = 0; i < m; ++i) {
        size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[slot[r]].push_back(pts[i]);
    }
    return out;
}

// Detected clusters are either genuine multiple roots (collapsed to a refined
// center) or incidental near-groups (split at half radius and retried).
inline void resolve_cluster(const Poly& p, const std::vector<Complex>& cluster, double radius,
                            std::vector<Complex>& out) {
    const int k = static_cast<int>(cluster.size());
    if (k == 1) {
        out.push_back(cluster.front());
        return;
    }
    Complex center = 0.0;
    double spread = 0.0;
    for (Complex z : cluster) center += z;
    center /= static_cast<double>(k);
    for (Complex z : cluster) spread = std::max(spread, std::abs(z - center));
    Complex refined = center;
    if (refine_cluster_center(p, refined, k, std::max(spread, radius))) {
        for (int i = 0; i < k; ++i) out.push_back(refined);
        return;
    }
    if (radius < 1e-14) {
        for (Complex z : cluster) out.push_back(z);
        return;
    }
    auto subs = link_clusters(cluster, 0.4 * radius);
    if (subs.size() == 1) {
        for (Complex z : cluster) out.push_back(z);
        return;
    }
    for (const auto& sub : subs) resolve_cluster(p, sub, 0.4 * radius, out);
}

}  // namespace detail

// All complex roots of p with multiplicities recovered by clustering.
// degree_deficit is always 0 here; level-set style callers overwrite it when
// the defining polynomial dropped degree.
inline RootSet all_roots(const Poly& p, const SolveOptions& opt = {}) {
    if (p.is_zero())
        throw ValidationError("all_roots: zero polynomial has no root set");

    // Exact zeros at the origin are factored out up front.
    std::vector<Complex> work = p.coeffs();
    int zeros_at_origin = 0;
    while (work.size() > 1 && std::abs(work.front()) == 0.0) {
        work.erase(work.begin());
        ++zeros_at_origin;
    }
    Poly reduced{std::vector<Complex>(work)};

    std::vector<Complex> raw;
    if (reduced.degree() > 0) raw = detail::aberth(reduced, opt);
    for (int i = 0; i < zeros_at_origin; ++i) raw.push_back(0.0);

    RootSet out;
    if (raw.empty()) return out;

    double maxmag = 0.0;
    for (Complex r : raw) maxmag = std::max(maxmag, std::abs(r));
    const double rho = kClusterTolFactor * (1.0 + maxmag);

    // Phase 1: multiple roots come out of the iteration as loose clusters
    // (a k-fold root spreads like eps^{1/k}); detect wide, then collapse each
    // genuine cluster onto its refined center.
    const double detect = std::max(rho, 2e-3 * (1.0 + maxmag));
    std::vector<Complex> resolved;
    for (const auto& cl : detail::link_clusters(raw, detect))
        detail::resolve_cluster(p, cl, detect, resolved);

    // Isolated roots get two plain Newton steps.
    for (size_t zi = 0; zi < resolved.size(); ++zi) {
        Complex& z = resolved[zi];
        bool alone = true;
        for (size_t wi = 0; wi < resolved.size(); ++wi)
            if (wi != zi && std::abs(resolved[wi] - z) <= rho) alone = false;
        if (!alone) continue;
        Complex zz = z;
        for (int it = 0; it < 2; ++it) {
            auto [v, dv] = p.eval_with_derivative(zz);
            if (std::abs(dv) < 1e-300) break;
            Complex zn = zz - v / dv;
            if (!is_finite(zn)) break;
            zz = zn;
        }
        if (std::abs(zz - z) <= 2.0 * rho) z = zz;
    }

    // Phase 2: the contract merge at the clustering tolerance.
    for (const auto& cl : detail::link_clusters(resolved, rho)) {
        Complex center = 0.0;
        for (Complex z : cl) center += z;
        center /= static_cast<double>(cl.size());
        out.roots.push_back({center, static_cast<int>(cl.size())});
    }

    std::sort(out.roots.begin(), out.roots.end(), [](const RootEntry& a, const RootEntry& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

// Roots of p that are also roots of q, within the coincidence tolerance.
inline std::vector<Complex> common_roots(const Poly& p, const Poly& q,
                                         const SolveOptions& opt = {}) {
    if (p.is_zero() || q.is_zero())
        throw ValidationError("common_roots: zero polynomial input");
    if (p.degree() == 0 || q.degree() == 0) return {};
    RootSet rp = all_roots(p, opt);
    RootSet rq = all_roots(q, opt);
    std::vector<Complex> out;
    for (const RootEntry& a : rp.roots) {
        for (const RootEntry& b : rq.roots) {
            double tol = kClusterTolFactor * (1.0 + std::max(std::abs(a.value), std::abs(b.value)));
            if (std::abs(a.value - b.value) <= tol) {
                out.push_back(a.value);
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rational maps

struct RationalMap {
    Poly num;
    Poly den;

    Complex operator()(Complex x) const { return num(x) / den(x); }
};

inline RationalMap make_rational(Poly num, Poly den, bool check_reduced = true) {
    if (den.is_zero())
        throw ValidationError("RationalMap: denominator is identically zero");
    if (check_reduced && !num.is_zero() && num.degree() > 0 && den.degree() > 0) {
        if (!common_roots(num, den).empty())
            throw ValidationError("RationalMap: numerator and denominator share a root");
    }
    return RationalMap{std::move(num), std::move(den)};
}

// num' den - num den': roots are the finite critical points of num/den.
inline Poly rational_derivative_numerator(const RationalMap& f) {
    return f.num.derivative() * f.den - f.num * f.den.derivative();
}

// prod (x - r_i)^{m_i}, scaled by lead — the reconstruction oracle for tests.
inline Poly poly_from_roots(const RootSet& rs, Complex lead = 1.0) {
    Poly acc = Poly::constant(lead);
    for (const RootEntry& r : rs.roots)
        for (int i = 0; i < r.multiplicity; ++i)
            acc = acc * Poly{-r.value, 1.0};
    return acc;
}

}  // namespace crtc

#pragma once

#include <cmath>

namespace semidens {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// Probabilists' Hermite polynomial He_k (He_2(z) = z^2 - 1) via the
// three-term recurrence He_{k+1}(z) = z He_k(z) - k He_{k-1}(z).
inline double hermite_he(int k, double z) {
    if (k == 0) return 1.0;
    double prev = 1.0;
    double cur = z;
    for (int j = 1; j < k; ++j) {
        const double next = z * cur - j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Standard normal density and its derivatives of any order,
// d^p/dz^p phi(z) = (-1)^p He_p(z) phi(z).
inline double gauss_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

inline double gauss_pdf_deriv(int p, double z) {
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite_he(p, z) * gauss_pdf(z);
}

enum class KernelFamily { Gaussian };

// Symmetric smoothing kernel with derivative evaluation and the scalar
// moment functionals mu_{l,G} = int z^l G(z) dz and their two-factor
// analogues. Immutable; safe for concurrent reads.
class Kernel {
public:
    explicit Kernel(KernelFamily family = KernelFamily::Gaussian,
                    int max_derivative_order = 9);

    KernelFamily family() const { return family_; }
    int max_derivative_order() const { return max_order_; }

    // d^p/dz^p of the kernel density. Throws unsupported_order_error when
    // p is negative or exceeds max_derivative_order.
    double evaluate(int p, double z) const;

    // mu_{l, K^(p1) K^(p2)} = int z^l K^(p1)(z) K^(p2)(z) dz
    double moment(int ell, int p1, int p2) const;

    // mu_{l, K^(p)} = int z^l K^(p)(z) dz
    double moment(int ell, int p) const;

    // Shorthands used all over the bias/bandwidth formulas.
    double mu2() const { return moment(2, 0); }          // second moment, = 1
    double roughness(int p = 0) const { return moment(0, p, p); }  // R(K^(p))

private:
    void check_order(int p) const;

    KernelFamily family_;
    int max_order_;
};

}  // namespace semidens

#pragma once

#include <cmath>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

namespace nosetori {

/// Finite sum  sum_k c_k x^k  with integer (possibly negative) powers.
/// Derivatives are exact, taken term by term.
template <typename Scalar>
class LaurentPolynomial {
public:
    using Term = std::pair<int, Scalar>;

    LaurentPolynomial() = default;
    LaurentPolynomial(std::initializer_list<Term> terms) { for (auto [k, c] : terms) add(k, c); }
    explicit LaurentPolynomial(const std::vector<Term>& terms) { for (auto [k, c] : terms) add(k, c); }
    explicit LaurentPolynomial(const std::map<int, Scalar>& terms) { for (auto [k, c] : terms) add(k, c); }

    static LaurentPolynomial constant(Scalar c) { return LaurentPolynomial{{0, c}}; }

    void add(int power, Scalar coeff) {
        if (coeff == Scalar(0)) return;
        coeffs_[power] += coeff;
        if (coeffs_[power] == Scalar(0)) coeffs_.erase(power);
    }

    Scalar operator()(Scalar x) const { return derivative(x, 0); }

    /// n-th derivative at x, n in {0, 1, 2}.
    Scalar derivative(Scalar x, int n) const {
        Scalar acc(0);
        for (const auto& [k, c] : coeffs_) {
            Scalar factor(1);
            for (int j = 0; j < n; ++j) factor *= Scalar(k - j);
            if (factor == Scalar(0)) continue;
            acc += c * factor * ipow(x, k - n);
        }
        return acc;
    }

    bool is_constant() const { return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0); }
    bool empty() const { return coeffs_.empty(); }

    std::vector<Term> terms() const { return {coeffs_.begin(), coeffs_.end()}; }

    friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

private:
    static Scalar ipow(Scalar x, int k) {
        using std::pow;
        if (k == 0) return Scalar(1);
        if (k < 0) return Scalar(1) / ipow(x, -k);
        Scalar result(1);
        Scalar base = x;
        for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
            if (e & 1u) result *= base;
            base *= base;
        }
        return result;
    }

    std::map<int, Scalar> coeffs_;
};

}  // namespace nosetori

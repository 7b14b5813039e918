// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpcevm/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mpcevm
{
/// 2^61 - 5793. Prime, congruent to 3 mod 4, and 2p+1 is prime as well, so the
/// commitment group of order p lives inside Z*_{2p+1} with native 128-bit products.
inline constexpr std::uint64_t default_prime = 2305843009213688159ULL;

struct InverseOfZero : std::domain_error
{
    InverseOfZero() : std::domain_error{"inverse of zero"} {}
};

struct DuplicateAbscissa : std::invalid_argument
{
    DuplicateAbscissa() : std::invalid_argument{"duplicate interpolation abscissa"} {}
};

struct FieldMismatch : std::logic_error
{
    FieldMismatch() : std::logic_error{"operands belong to different fields"} {}
};

constexpr std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

constexpr std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept
{
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp != 0)
    {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n) noexcept;

/// Residue modulo a prime. The modulus travels with the value so that
/// arithmetic stays self-contained; mixing moduli throws FieldMismatch.
class FieldElement
{
public:
    constexpr FieldElement() noexcept = default;
    constexpr FieldElement(std::uint64_t value, std::uint64_t modulus) noexcept
      : value_{value % modulus}, modulus_{modulus}
    {}

    static constexpr FieldElement zero(std::uint64_t modulus = default_prime) noexcept
    {
        return {0, modulus};
    }
    static constexpr FieldElement one(std::uint64_t modulus = default_prime) noexcept
    {
        return {1, modulus};
    }
    /// Maps a signed integer into the field (negative values wrap to p - |v|).
    static FieldElement from_signed(std::int64_t v, std::uint64_t modulus = default_prime) noexcept;

    constexpr std::uint64_t value() const noexcept { return value_; }
    constexpr std::uint64_t modulus() const noexcept { return modulus_; }
    constexpr bool is_zero() const noexcept { return value_ == 0; }

    FieldElement& operator+=(const FieldElement& o)
    {
        check(o);
        const std::uint64_t s = value_ + o.value_;  // both < 2^63, no overflow
        value_ = s >= modulus_ ? s - modulus_ : s;
        return *this;
    }
    FieldElement& operator-=(const FieldElement& o)
    {
        check(o);
        value_ = value_ >= o.value_ ? value_ - o.value_ : value_ + modulus_ - o.value_;
        return *this;
    }
    FieldElement& operator*=(const FieldElement& o)
    {
        check(o);
        value_ = mulmod(value_, o.value_, modulus_);
        return *this;
    }

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    FieldElement operator-() const noexcept
    {
        return {value_ == 0 ? 0 : modulus_ - value_, modulus_};
    }

    friend constexpr bool operator==(const FieldElement&, const FieldElement&) noexcept = default;

    FieldElement pow(std::uint64_t exp) const noexcept
    {
        return {powmod(value_, exp, modulus_), modulus_};
    }
    /// Multiplicative inverse; throws InverseOfZero for 0.
    FieldElement inv() const;

    /// Some square root if one exists (Tonelli-Shanks); the returned root is
    /// a deterministic function of the input.
    std::optional<FieldElement> sqrt() const;

private:
    void check(const FieldElement& o) const
    {
        if (modulus_ != o.modulus_)
            throw FieldMismatch{};
    }

    std::uint64_t value_ = 0;
    std::uint64_t modulus_ = default_prime;
};

enum class FieldOp
{
    add,
    sub,
    mul,
    inv,
    neg,
};

/// Dispatching form of the basic operations; `b` is ignored for inv and neg.
FieldElement field_arith(FieldOp op, const FieldElement& a, const FieldElement& b = {});

FieldElement random_element(Rng& rng, std::uint64_t modulus);

/// Coefficients low degree first, trailing zeros stripped (the zero polynomial is empty).
class Polynomial
{
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<FieldElement> coefficients);

    const std::vector<FieldElement>& coefficients() const noexcept { return coefficients_; }
    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

    FieldElement operator()(const FieldElement& x) const { return eval(x); }
    FieldElement eval(const FieldElement& x) const;

private:
    std::vector<FieldElement> coefficients_;
};

FieldElement poly_eval(const Polynomial& f, const FieldElement& x);

/// Constant term `secret`, remaining `degree` coefficients drawn from `rng`.
Polynomial random_polynomial(const FieldElement& secret, unsigned degree, Rng& rng);

/// Weights w_i with sum(w_i * y_i) equal to the interpolant's value at `at`.
std::vector<FieldElement> lagrange_coefficients(
    std::span<const FieldElement> xs, const FieldElement& at);

struct Point
{
    FieldElement x;
    FieldElement y;
};

FieldElement lagrange_interpolate(std::span<const Point> points, const FieldElement& at);
}  // namespace mpcevm

// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/field.hpp"

#include <array>

namespace mpcevm
{
bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2)
        return false;
    for (const std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
    {
        if (n % small == 0)
            return n == small;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0)
    {
        d >>= 1;
        ++s;
    }
    // These bases are sufficient for every n < 2^64.
    constexpr std::array<std::uint64_t, 7> bases{2, 325, 9375, 28178, 450775, 9780504, 1795265022};
    for (const std::uint64_t a : bases)
    {
        std::uint64_t x = powmod(a, d, n);
        if (x == 0 || x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r)
        {
            x = mulmod(x, x, n);
            if (x == n - 1)
            {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

FieldElement FieldElement::from_signed(std::int64_t v, std::uint64_t modulus) noexcept
{
    if (v >= 0)
        return {static_cast<std::uint64_t>(v), modulus};
    const auto magnitude = static_cast<std::uint64_t>(-(v + 1)) + 1;
    return -FieldElement{magnitude, modulus};
}

FieldElement FieldElement::inv() const
{
    if (value_ == 0)
        throw InverseOfZero{};
    return pow(modulus_ - 2);
}

std::optional<FieldElement> FieldElement::sqrt() const
{
    if (value_ == 0)
        return *this;
    const std::uint64_t p = modulus_;
    if (p == 2)
        return *this;
    if (powmod(value_, (p - 1) / 2, p) != 1)
        return std::nullopt;
    if (p % 4 == 3)
        return FieldElement{powmod(value_, (p + 1) / 4, p), p};

    // Tonelli-Shanks
    std::uint64_t q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0)
    {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1)
        ++z;
    std::uint64_t m = s;
    std::uint64_t c = powmod(z, q, p);
    std::uint64_t t = powmod(value_, q, p);
    std::uint64_t r = powmod(value_, (q + 1) / 2, p);
    while (t != 1)
    {
        std::uint64_t i = 0;
        std::uint64_t t2 = t;
        while (t2 != 1)
        {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + 1 < m - i; ++j)
            b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return FieldElement{r, p};
}

FieldElement field_arith(FieldOp op, const FieldElement& a, const FieldElement& b)
{
    switch (op)
    {
    case FieldOp::add:
        return a + b;
    case FieldOp::sub:
        return a - b;
    case FieldOp::mul:
        return a * b;
    case FieldOp::inv:
        return a.inv();
    case FieldOp::neg:
        return -a;
    }
    throw std::invalid_argument{"unknown field operation"};
}

FieldElement random_element(Rng& rng, std::uint64_t modulus)
{
    return {rng.uniform_below(modulus), modulus};
}

Polynomial::Polynomial(std::vector<FieldElement> coefficients) : coefficients_{std::move(coefficients)}
{
    while (!coefficients_.empty() && coefficients_.back().is_zero())
        coefficients_.pop_back();
}

FieldElement Polynomial::eval(const FieldElement& x) const
{
    FieldElement acc = FieldElement::zero(x.modulus());
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

FieldElement poly_eval(const Polynomial& f, const FieldElement& x)
{
    return f.eval(x);
}

Polynomial random_polynomial(const FieldElement& secret, unsigned degree, Rng& rng)
{
    std::vector<FieldElement> coefficients;
    coefficients.reserve(degree + 1);
    coefficients.push_back(secret);
    for (unsigned i = 0; i < degree; ++i)
        coefficients.push_back(random_element(rng, secret.modulus()));
    return Polynomial{std::move(coefficients)};
}

std::vector<FieldElement> lagrange_coefficients(std::span<const FieldElement> xs, const FieldElement& at)
{
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (xs[i] == xs[j])
                throw DuplicateAbscissa{};

    std::vector<FieldElement> weights;
    weights.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        FieldElement num = FieldElement::one(at.modulus());
        FieldElement den = FieldElement::one(at.modulus());
        for (std::size_t j = 0; j < n; ++j)
        {
            if (j == i)
                continue;
            num *= at - xs[j];
            den *= xs[i] - xs[j];
        }
        weights.push_back(num * den.inv());
    }
    return weights;
}

FieldElement lagrange_interpolate(std::span<const Point> points, const FieldElement& at)
{
    if (points.empty())
        throw std::invalid_argument{"interpolation needs at least one point"};
    std::vector<FieldElement> xs;
    xs.reserve(points.size());
    for (const auto& pt : points)
        xs.push_back(pt.x);
    const auto weights = lagrange_coefficients(xs, at);
    FieldElement acc = FieldElement::zero(at.modulus());
    for (std::size_t i = 0; i < points.size(); ++i)
        acc += weights[i] * points[i].y;
    return acc;
}
}  // namespace mpcevm

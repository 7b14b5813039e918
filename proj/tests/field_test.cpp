// mpcevm: asynchronous MPC execution for a smart-contract VM
// Copyright 2026 The mpcevm Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mpcevm/field.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace mpcevm;

namespace
{
constexpr std::uint64_t small_p = 97;

FieldElement f97(std::uint64_t v)
{
    return {v, small_p};
}

// Oracle: schoolbook modular arithmetic on plain integers.
std::uint64_t naive_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    std::uint64_t acc = 0;
    for (std::uint64_t i = 0; i < b; ++i)
        acc = (acc + a) % m;
    return acc;
}

std::uint64_t naive_inv(std::uint64_t a, std::uint64_t m)
{
    for (std::uint64_t x = 1; x < m; ++x)
        if (a * x % m == 1)
            return x;
    return 0;
}
}  // namespace

TEST(field, small_prime_examples)
{
    EXPECT_EQ(field_arith(FieldOp::mul, f97(50), f97(2)).value(), 3u);
    EXPECT_EQ(field_arith(FieldOp::add, f97(96), f97(5)).value(), 4u);
    EXPECT_EQ(field_arith(FieldOp::sub, f97(3), f97(5)).value(), 95u);
    EXPECT_EQ(field_arith(FieldOp::neg, f97(1)).value(), 96u);
    EXPECT_EQ(field_arith(FieldOp::inv, f97(2)).value(), 49u);
}

TEST(field, matches_schoolbook_oracle)
{
    for (std::uint64_t a = 0; a < small_p; ++a)
    {
        for (std::uint64_t b = 0; b < small_p; b += 7)
        {
            EXPECT_EQ((f97(a) * f97(b)).value(), naive_mul(a, b, small_p));
            EXPECT_EQ((f97(a) + f97(b)).value(), (a + b) % small_p);
            EXPECT_EQ((f97(a) - f97(b)).value(), (a + small_p - b) % small_p);
        }
        if (a != 0)
            EXPECT_EQ(f97(a).inv().value(), naive_inv(a, small_p));
    }
}

TEST(field, inverse_of_zero_throws)
{
    EXPECT_THROW(f97(0).inv(), InverseOfZero);
    EXPECT_THROW(FieldElement::zero().inv(), InverseOfZero);
}

TEST(field, mixed_moduli_throw)
{
    EXPECT_THROW(f97(1) + FieldElement(1, default_prime), FieldMismatch);
}

TEST(field, default_prime_shape)
{
    EXPECT_TRUE(is_prime(default_prime));
    EXPECT_TRUE(is_prime(2 * default_prime + 1));
    EXPECT_EQ(default_prime % 4, 3u);
    // Comparison masking needs headroom above 2^(32 + 16 + 1).
    EXPECT_GT(default_prime, std::uint64_t{1} << 49);
}

TEST(field, is_prime_against_trial_division)
{
    for (std::uint64_t n = 0; n < 5000; ++n)
    {
        bool expect = n >= 2;
        for (std::uint64_t d = 2; d * d <= n && expect; ++d)
            expect = n % d != 0;
        EXPECT_EQ(is_prime(n), expect) << n;
    }
    EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    EXPECT_TRUE(is_prime(18446744073709551557ULL));
}

TEST(field, from_signed_wraps)
{
    EXPECT_EQ(FieldElement::from_signed(-1, small_p).value(), 96u);
    EXPECT_EQ(FieldElement::from_signed(-98, small_p).value(), 96u);
    EXPECT_EQ(FieldElement::from_signed(INT64_MIN).value(),
        (default_prime - (std::uint64_t{1} << 63) % default_prime) % default_prime);
}

TEST(field, sqrt_roundtrip)
{
    Rng rng{7};
    for (int i = 0; i < 200; ++i)
    {
        const auto x = random_element(rng, default_prime);
        const auto sq = x * x;
        const auto r = sq.sqrt();
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(*r * *r, sq);
    }
    // 5 is a non-residue mod 97 (97 = 2 mod 5).
    EXPECT_FALSE(f97(5).sqrt().has_value());
    // Tonelli-Shanks path: 17 = 1 mod 4.
    for (std::uint64_t a = 1; a < 17; ++a)
    {
        const FieldElement x{a, 17};
        const auto r = (x * x).sqrt();
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(*r * *r, x * x);
    }
}

TEST(field, line_through_two_points)
{
    const std::vector<Point> pts{{f97(1), f97(3)}, {f97(2), f97(5)}};
    EXPECT_EQ(lagrange_interpolate(pts, f97(0)).value(), 1u);
    EXPECT_EQ(lagrange_interpolate(pts, f97(3)).value(), 7u);
}

TEST(field, duplicate_abscissa_throws)
{
    const std::vector<Point> pts{{f97(1), f97(3)}, {f97(1), f97(5)}};
    EXPECT_THROW(lagrange_interpolate(pts, f97(0)), DuplicateAbscissa);
}

TEST(field, every_subset_recovers_secret)
{
    // n = 4, t = 1: all 6 pairs and all 4 triples must interpolate to the secret.
    Rng rng{11};
    const auto secret = f97(42);
    const auto f = random_polynomial(secret, 1, rng);
    std::vector<Point> all;
    for (std::uint64_t i = 1; i <= 4; ++i)
        all.push_back({f97(i), f(f97(i))});
    int checked = 0;
    for (unsigned mask = 0; mask < 16; ++mask)
    {
        if (__builtin_popcount(mask) < 2)
            continue;
        std::vector<Point> subset;
        for (unsigned i = 0; i < 4; ++i)
            if (mask & (1u << i))
                subset.push_back(all[i]);
        EXPECT_EQ(lagrange_interpolate(subset, f97(0)), secret);
        ++checked;
    }
    EXPECT_EQ(checked, 11);
}

TEST(field, polynomial_eval_matches_power_sum)
{
    Rng rng{3};
    for (int trial = 0; trial < 100; ++trial)
    {
        std::vector<FieldElement> c;
        for (int k = 0; k < 6; ++k)
            c.push_back(random_element(rng, default_prime));
        const Polynomial f{c};
        const auto x = random_element(rng, default_prime);
        // Oracle: sum c_k * x^k with independent powering.
        FieldElement expect = FieldElement::zero();
        for (std::size_t k = 0; k < c.size(); ++k)
            expect += c[k] * FieldElement{powmod(x.value(), k, default_prime), default_prime};
        EXPECT_EQ(f(x), expect);
    }
}

TEST(field, zero_polynomial_degree)
{
    EXPECT_EQ(Polynomial{}.degree(), -1);
    EXPECT_EQ(Polynomial({f97(0), f97(0)}).degree(), -1);
    EXPECT_EQ(Polynomial({f97(1), f97(0)}).degree(), 0);
}

#include "oracles.hpp"
#include "pip/polynomial.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pip;

namespace {

MultiPoly random_poly(std::mt19937_64& rng, int m, int n) { return MultiPoly(m, n, oracle::uniform(rng, count_total(m, n))); }

/// Direct sum of c_i * x^I_i using the brute-force enumeration.
double reference_value(const MultiPoly& q, const std::vector<double>& x) {
    const auto ref = oracle::brute_force_order(q.dimension(), q.degree_bound());
    double s = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) s += q[i] * oracle::monomial_value(ref[i], x);
    return s;
}

} // namespace

TEST(Evaluate, Examples) {
    const MultiPoly q(2, 1, std::vector<double>{1, 2, -1});
    EXPECT_DOUBLE_EQ(evaluate(q, std::vector<double>{1, 1}), 2.0);
    EXPECT_EQ(evaluate(MultiPoly(3, 4), std::vector<double>{0.3, 5, -2}), 0.0);
    const MultiPoly c = MultiPoly::monomial(MultiIndex{2, 1}, 1.0, 3);
    EXPECT_DOUBLE_EQ(evaluate(c, std::vector<double>{2, 3}), 12.0);
    EXPECT_THROW(evaluate(q, std::vector<double>{1, 1, 1}), DimensionError);
}

TEST(Evaluate, MatchesBruteForceSum) {
    std::mt19937_64 rng(7);
    for (int m = 1; m <= 4; ++m)
        for (int n = 0; n <= 5; ++n) {
            const auto q = random_poly(rng, m, n);
            const auto x = oracle::uniform(rng, static_cast<std::size_t>(m), -1.5, 1.5);
            EXPECT_NEAR(evaluate(q, x), reference_value(q, x), 1e-12 * (1 + std::abs(reference_value(q, x))));
        }
}

TEST(Arithmetic, AddExamples) {
    const auto x1 = MultiPoly::monomial(MultiIndex{1, 0});
    const auto x2 = MultiPoly::monomial(MultiIndex{0, 1});
    const auto s = add(x1, x2);
    EXPECT_EQ(std::vector<double>(s.coefficients().begin(), s.coefficients().end()), (std::vector<double>{0, 1, 1}));
    std::mt19937_64 rng(3);
    const auto q = random_poly(rng, 3, 3);
    const auto q0 = add(q, MultiPoly(3, 3));
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(q0[i], q[i]);
    auto a = MultiPoly::monomial(MultiIndex{2}, 1.0);
    a[0] = 1.0;
    const auto r = add(a, MultiPoly::monomial(MultiIndex{2}, -1.0));
    EXPECT_EQ(r.effective_degree(), 0);
    EXPECT_EQ(r[0], 1.0);
}

TEST(Arithmetic, AddAlignsDifferentBounds) {
    const MultiPoly lo(2, 1, std::vector<double>{1, 2, 3});
    const MultiPoly hi(2, 2, std::vector<double>{1, 1, 1, 1, 1, 1});
    const auto s = add(lo, hi);
    EXPECT_EQ(s.degree_bound(), 2);
    EXPECT_EQ(std::vector<double>(s.coefficients().begin(), s.coefficients().end()), (std::vector<double>{2, 3, 4, 1, 1, 1}));
    EXPECT_THROW(add(lo, MultiPoly(3, 1)), DimensionError);
}

TEST(Arithmetic, MulLinearExamples) {
    const auto x2 = MultiPoly::monomial(MultiIndex{0, 1});
    const MultiPoly l(2, 1, std::vector<double>{1, 1, 0});
    const auto p = mul_linear(x2, l);
    EXPECT_EQ(p.degree_bound(), 2);
    EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex{1, 1}), 1.0);
    EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex{0, 1}), 1.0);
    EXPECT_EQ(p.effective_degree(), 2);

    std::mt19937_64 rng(5);
    const auto q = random_poly(rng, 3, 3);
    const auto same = mul_linear(q, MultiPoly::constant(3, 1.0));
    EXPECT_EQ(same.degree_bound(), 3);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(same[i], q[i]);

    const MultiPoly a(1, 1, std::vector<double>{1, 1}), b(1, 1, std::vector<double>{1, -1});
    const auto d = mul_linear(a, b);
    EXPECT_EQ(std::vector<double>(d.coefficients().begin(), d.coefficients().end()), (std::vector<double>{1, 0, -1}));
}

TEST(Arithmetic, MulLinearRejectsNonLinearFactorAndCap) {
    const MultiPoly q(2, 2);
    EXPECT_THROW(mul_linear(q, MultiPoly::monomial(MultiIndex{2, 0})), DimensionError);
    EXPECT_THROW(mul_linear(q, MultiPoly::monomial(MultiIndex{1, 0}), 2), DimensionError);
}

TEST(Arithmetic, MulLinearVanishesOnTheRootSet) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + trial % 5;
        const auto q = random_poly(rng, m, 3);
        auto grad = oracle::uniform(rng, static_cast<std::size_t>(m));
        auto x = oracle::uniform(rng, static_cast<std::size_t>(m));
        // choose c0 so that l(x) = 0 exactly in the formula c0 = -<g, x>
        double gx = 0;
        for (int j = 0; j < m; ++j) gx += grad[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        const auto l = MultiPoly::linear(-gx, grad);
        const double v = evaluate(mul_linear(q, l), x);
        EXPECT_LE(std::abs(v), 1e-10 * (1 + std::abs(evaluate(q, x))));
    }
}

TEST(Arithmetic, OperationsCommuteWithEvaluation) {
    std::mt19937_64 rng(2024);
    for (int inst = 0; inst < 100; ++inst) {
        const int m = 1 + static_cast<int>(rng() % 6);
        const int n = static_cast<int>(rng() % 6) + 1;
        const auto q1 = random_poly(rng, m, n);
        const auto q2 = random_poly(rng, m, n - 1);
        const auto l = random_poly(rng, m, 1);
        std::vector<double> a(static_cast<std::size_t>(m * m));
        for (auto& v : a) v = std::uniform_real_distribution<double>(-1, 1)(rng);
        for (int j = 0; j < m; ++j) a[static_cast<std::size_t>(j * m + j)] += 2.0;
        const AffineMap t(m, a, oracle::uniform(rng, static_cast<std::size_t>(m)));
        const auto s = add(q1, q2);
        const auto p = mul_linear(q2, l);
        const auto c = compose_affine(q1, t);
        for (int k = 0; k < 20; ++k) {
            const auto x = oracle::uniform(rng, static_cast<std::size_t>(m));
            const double e_add = evaluate(q1, x) + evaluate(q2, x);
            const double e_mul = evaluate(q2, x) * evaluate(l, x);
            const double e_cmp = evaluate(q1, t.apply(x));
            EXPECT_NEAR(evaluate(s, x), e_add, 1e-10 * std::max(1.0, std::abs(e_add)));
            EXPECT_NEAR(evaluate(p, x), e_mul, 1e-10 * std::max(1.0, std::abs(e_mul)));
            EXPECT_NEAR(evaluate(c, x), e_cmp, 1e-10 * std::max(1.0, std::abs(e_cmp)));
        }
    }
}

TEST(Affine, ComposeExamples) {
    const auto x1 = MultiPoly::monomial(MultiIndex{1, 0});
    const auto shifted = compose_affine(x1, AffineMap::translation({1.0, 0.0}));
    EXPECT_DOUBLE_EQ(shifted[0], 1.0);
    EXPECT_DOUBLE_EQ(shifted[1], 1.0);
    EXPECT_DOUBLE_EQ(shifted[2], 0.0);

    std::mt19937_64 rng(9);
    const auto q = random_poly(rng, 3, 3);
    const auto same = compose_affine(q, AffineMap::identity(3));
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(same[i], q[i], 1e-15);

    const auto sq = MultiPoly::monomial(MultiIndex{2, 0});
    const auto swapped = compose_affine(sq, AffineMap(2, {0, 1, 1, 0}, {0, 0}));
    EXPECT_DOUBLE_EQ(swapped.coefficient(MultiIndex{0, 2}), 1.0);
    EXPECT_EQ(swapped.effective_degree(), 2);
    double others = 0;
    for (std::size_t i = 0; i < swapped.size(); ++i) others += std::abs(swapped[i]);
    EXPECT_DOUBLE_EQ(others, 1.0);
}

TEST(Affine, RankCheck) {
    EXPECT_THROW(AffineMap(2, {1, 2, 2, 4}, {0, 0}), DegenerateInputError);
    EXPECT_THROW(AffineMap(2, {1, 0, 0}, {0, 0}), DimensionError);
}

TEST(Embed, Examples) {
    const std::vector<double> c{0, 0, 1};
    const auto q = embed_univariate(c, std::vector<double>{1, 0}, std::vector<double>{0, 0});
    EXPECT_DOUBLE_EQ(q.coefficient(MultiIndex{2, 0}), 1.0);
    EXPECT_EQ(q.effective_degree(), 2);

    const auto r = embed_univariate(c, std::vector<double>{1}, std::vector<double>{1});
    EXPECT_EQ(std::vector<double>(r.coefficients().begin(), r.coefficients().end()), (std::vector<double>{1, -2, 1}));

    const double s = 1.0 / std::sqrt(2.0);
    const auto d = embed_univariate(std::vector<double>{0, 1}, std::vector<double>{s, s}, std::vector<double>{0, 0});
    EXPECT_NEAR(d[0], 0.0, 1e-16);
    EXPECT_NEAR(d[1], s, 1e-16);
    EXPECT_NEAR(d[2], s, 1e-16);
}

TEST(Embed, RejectsNonUnitDirection) {
    EXPECT_THROW(embed_univariate(std::vector<double>{1, 1}, std::vector<double>{1, 1}, std::vector<double>{0, 0}),
                 DegenerateInputError);
    EXPECT_THROW(embed_univariate(std::vector<double>{1, 1, 1}, std::vector<double>{1, 0}, std::vector<double>{0, 0}, 1),
                 DimensionError);
}

TEST(Embed, AxisDirectionReproducesCoefficients) {
    std::mt19937_64 rng(4);
    for (int j = 0; j < 3; ++j) {
        const auto c = oracle::uniform(rng, 6);
        std::vector<double> dir(3, 0.0), base = oracle::uniform(rng, 3);
        dir[static_cast<std::size_t>(j)] = 1.0;
        base[static_cast<std::size_t>(j)] = 0.0;
        const auto q = embed_univariate(c, dir, base);
        for (int i = 0; i <= 5; ++i) {
            std::vector<int> e(3, 0);
            e[static_cast<std::size_t>(j)] = i;
            EXPECT_EQ(q.coefficient(MultiIndex(e)), c[static_cast<std::size_t>(i)]);
        }
    }
}

TEST(Embed, AgreesAlongTheLine) {
    std::mt19937_64 rng(8);
    const auto c = oracle::uniform(rng, 7);
    auto dir = oracle::uniform(rng, 4);
    double nrm = 0;
    for (double v : dir) nrm += v * v;
    for (auto& v : dir) v /= std::sqrt(nrm);
    const auto base = oracle::uniform(rng, 4);
    const auto q = embed_univariate(c, dir, base);
    for (double s : {-1.3, -0.2, 0.0, 0.4, 1.7}) {
        std::vector<double> x(4);
        for (int k = 0; k < 4; ++k) x[static_cast<std::size_t>(k)] = s * dir[static_cast<std::size_t>(k)] + base[static_cast<std::size_t>(k)];
        double ref = 0;
        for (int i = 6; i >= 0; --i) ref = ref * s + c[static_cast<std::size_t>(i)];
        EXPECT_NEAR(evaluate(q, x), ref, 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST(MultiPolyType, DegreeBounds) {
    MultiPoly q(2, 3);
    EXPECT_EQ(q.effective_degree(), -1);
    q[4] = 1.0;
    EXPECT_EQ(q.effective_degree(), 2);
    EXPECT_EQ(q.with_degree_bound(2).size(), 6u);
    q[9] = 0.5;
    EXPECT_THROW(q.with_degree_bound(2), DimensionError);
    EXPECT_THROW(MultiPoly(2, 1, std::vector<double>{1, 2}), DimensionError);
}

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "floq/tower.hpp"
#include "oracles.hpp"

using namespace floq;

namespace {

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

/// Brute-force commutation test on the standard basis: for every level i,
/// the first i components of f(e_k) must match f_i applied to the first i
/// components of e_k.
bool commutes_with_truncations(const CMatrix& f, double tol) {
    const int n = f.rows();
    for (int i = 1; i <= n; ++i) {
        const CMatrix fi = f.leading(i);
        for (int k = 0; k < n; ++k) {
            std::vector<cplx> e(static_cast<std::size_t>(n));
            e[static_cast<std::size_t>(k)] = 1.0;
            const std::vector<cplx> fe = f.apply(e);
            std::vector<cplx> truncated(fe.begin(), fe.begin() + i);
            const std::vector<cplx> projected(e.begin(), e.begin() + i);
            const std::vector<cplx> fie = fi.apply(projected);
            for (int r = 0; r < i; ++r)
                if (std::abs(truncated[static_cast<std::size_t>(r)] -
                             fie[static_cast<std::size_t>(r)]) > tol)
                    return false;
        }
    }
    return true;
}

bool strict_upper_within(const CMatrix& f, double tol) {
    for (int r = 0; r < f.rows(); ++r)
        for (int c = r + 1; c < f.cols(); ++c)
            if (std::abs(f(r, c)) > tol) return false;
    return true;
}

}  // namespace

TEST_CASE("tower projections compose and are coordinate truncation") {
    Tower tower(5);
    REQUIRE(tower.depth() == 5);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<cplx> x(5);
        for (cplx& z : x) z = oracle::random_disk(rng, 3.0);

        // rho_{i,i} is the identity
        REQUIRE(tower.project(x, 5, 5) == x);

        // rho_{j,i} o rho_{k,j} = rho_{k,i}
        const auto via_j = tower.project(tower.project(x, 5, 3), 3, 2);
        REQUIRE(via_j == tower.project(x, 5, 2));
    }

    CHECK_THROWS_AS(Tower(0), RangeError);
    std::vector<cplx> x(3, 1.0);
    CHECK_THROWS_AS(tower.project(x, 3, 4), RangeError);
    CHECK_THROWS_AS(tower.project(x, 6, 2), RangeError);
    CHECK_THROWS_AS(tower.project(x, 4, 2), ShapeError);  // wrong length for level 4
}

TEST_CASE("seminorm values and range checks") {
    CHECK(seminorm({0.0, 0.0, 0.0}, 2) == 0.0);
    // |3+4i| by hand: sqrt(9 + 16) = 5
    CHECK(seminorm({cplx(3.0, 4.0), cplx(1.0, 0.0)}, 1) == Catch::Approx(5.0));
    CHECK(seminorm({cplx(1.0, 0.0), cplx(-7.0, 0.0)}, 2) == Catch::Approx(7.0));

    CHECK_THROWS_AS(seminorm({1.0, 2.0}, 0), RangeError);
    CHECK_THROWS_AS(seminorm({1.0, 2.0}, 3), RangeError);

    Seminorm p2{2};
    CHECK(p2({cplx(1.0, 0.0), cplx(-7.0, 0.0), cplx(100.0, 0.0)}) == Catch::Approx(7.0));
}

TEST_CASE("seminorm family properties on random vectors") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<cplx> x(6), y(6);
        for (int k = 0; k < 6; ++k) {
            x[static_cast<std::size_t>(k)] = oracle::random_disk(rng, 4.0);
            y[static_cast<std::size_t>(k)] = oracle::random_disk(rng, 4.0);
        }
        const cplx lambda = oracle::random_disk(rng, 2.0);

        double prev = 0.0;
        for (int i = 1; i <= 6; ++i) {
            const double pi_x = seminorm(x, i);
            CHECK(pi_x >= prev);  // monotone in the level
            prev = pi_x;

            std::vector<cplx> sum(6), scaled(6);
            for (int k = 0; k < 6; ++k) {
                sum[static_cast<std::size_t>(k)] =
                    x[static_cast<std::size_t>(k)] + y[static_cast<std::size_t>(k)];
                scaled[static_cast<std::size_t>(k)] = lambda * x[static_cast<std::size_t>(k)];
            }
            CHECK(seminorm(sum, i) <= pi_x + seminorm(y, i) + 1e-12);
            CHECK(seminorm(scaled, i) ==
                  Catch::Approx(std::abs(lambda) * pi_x).margin(1e-12));
        }
    }
}

TEST_CASE("nested matrix stores levels as principal blocks") {
    CMatrix m(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c <= r; ++c) m(r, c) = cplx(r + 1.0, c + 1.0);
    NestedMatrix nested(m);
    REQUIRE(nested.depth() == 3);
    CHECK(nested.level(3) == nested.top());
    CHECK(nested.level(1)(0, 0) == cplx(1.0, 1.0));
    CHECK(nested.level(2)(1, 0) == cplx(2.0, 1.0));

    CHECK_THROWS_AS(nested.level(0), RangeError);
    CHECK_THROWS_AS(nested.level(4), RangeError);
}

TEST_CASE("nested matrix pattern validation and structural zeroing") {
    CMatrix bad(2, 2);
    bad(0, 1) = 1e-6;
    CHECK_THROWS_AS(NestedMatrix(bad), ValidationError);

    CMatrix almost(2, 2);
    almost(0, 0) = 2.0;
    almost(1, 0) = 3.0;
    almost(1, 1) = 4.0;
    almost(0, 1) = 1e-14;  // integrator-level noise in a structural zero
    NestedMatrix cleaned(almost);
    CHECK(cleaned.top()(0, 1) == cplx(0.0, 0.0));  // stored as an exact zero

    CHECK_THROWS_AS(NestedMatrix(CMatrix(2, 3)), ShapeError);

    CMatrix singular(2, 2);
    singular(0, 0) = 1.0;
    singular(1, 1) = 1e-15;
    CHECK_THROWS_AS(InvertibleNestedMatrix(singular), ValidationError);
}

TEST_CASE("triangular solves reject near-singular pivots") {
    CMatrix l(2, 2);
    l(0, 0) = 1.0;
    l(1, 0) = 2.0;
    l(1, 1) = 1e-15;  // below the pivot floor
    CHECK_THROWS_AS(lower_triangular_inverse(l), ConditioningError);
    CHECK_THROWS_AS(solve_row_lower(l, {1.0, 1.0}), ConditioningError);

    l(1, 1) = 0.5;
    const CMatrix inv = lower_triangular_inverse(l);
    CHECK(max_abs_diff(l * inv, CMatrix::identity(2)) <= 1e-15);
    const auto y = solve_row_lower(l, {3.0, 1.0});  // y L = (3, 1)
    CHECK(std::abs(y[0] * l(0, 0) + y[1] * l(1, 0) - 3.0) <= 1e-15);
    CHECK(std::abs(y[1] * l(1, 1) - 1.0) <= 1e-15);
}

TEST_CASE("truncate returns the leading principal tower") {
    NestedMatrix id3(CMatrix::identity(3));
    CHECK(truncate(id3, 2) == NestedMatrix(CMatrix::identity(2)));
    CHECK(truncate(id3, 3) == id3);

    NestedMatrix m2(mat2(2.0, 0.0, 3.0, 4.0));
    const NestedMatrix m1 = truncate(m2, 1);
    REQUIRE(m1.depth() == 1);
    CHECK(m1.top()(0, 0) == cplx(2.0, 0.0));

    // direct index-comparison oracle on a random lower-triangular 4x4
    std::mt19937 rng(31);
    const CMatrix t4 = oracle::random_lower(rng, 4, 2.0);
    const NestedMatrix nested(t4);
    const NestedMatrix t3 = truncate(nested, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(t3.top()(r, c) == t4(r, c));

    CHECK_THROWS_AS(truncate(nested, 0), RangeError);
    CHECK_THROWS_AS(truncate(nested, 5), RangeError);
}

TEST_CASE("truncation functoriality is exact") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const NestedMatrix m(oracle::random_lower(rng, 6, 3.0));
        for (int j = 1; j <= 6; ++j)
            for (int i = 1; i <= j; ++i)
                CHECK(truncate(truncate(m, j), i) == truncate(m, i));
    }
}

TEST_CASE("is_projective_map basics") {
    CHECK(is_projective_map(CMatrix::identity(4), 1e-12));
    CHECK_FALSE(is_projective_map(mat2(1.0, 7.0, 5.0, 2.0), 1e-12));

    std::mt19937 rng(41);
    const CMatrix t5 = oracle::random_lower(rng, 5, 2.0);
    CHECK(is_projective_map(t5, 1e-12));
    CHECK(commutes_with_truncations(t5, 1e-12));  // brute-force basis oracle

    CHECK_THROWS_AS(is_projective_map(CMatrix(2, 3), 1e-12), ShapeError);
}

TEST_CASE("projectivity, basis commutation and the zero pattern coincide") {
    std::mt19937 rng(43);
    const double tol = 1e-12;
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_real_distribution<double> mag_exp(-15.0, -9.0);

    for (int trial = 0; trial < 200; ++trial) {
        CMatrix f(6, 6);
        switch (kind(rng)) {
            case 0:  // dense, essentially never projective
                f = oracle::random_dense(rng, 6, 2.0);
                break;
            case 1:  // exactly projective
                f = oracle::random_lower(rng, 6, 2.0);
                break;
            default: {  // lower triangular with one off-pattern entry near tol
                f = oracle::random_lower(rng, 6, 2.0);
                std::uniform_int_distribution<int> row(0, 4);
                const int r = row(rng);
                std::uniform_int_distribution<int> col(r + 1, 5);
                f(r, col(rng)) = std::pow(10.0, mag_exp(rng));
                break;
            }
        }
        const bool fast = is_projective_map(f, tol);
        CHECK(fast == commutes_with_truncations(f, tol));
        CHECK(fast == strict_upper_within(f, tol));
    }
}

TEST_CASE("projective maps are exactly the seminorm-bounded ones") {
    std::mt19937 rng(47);

    // bounded direction: row sums of the leading block dominate p_i(f u)
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix f = oracle::random_lower(rng, 5, 2.0);
        REQUIRE(is_projective_map(f, 1e-12));
        for (int i = 1; i <= 5; ++i) {
            double bound = 0.0;
            for (int r = 0; r < i; ++r) {
                double row = 0.0;
                for (int c = 0; c < i; ++c) row += std::abs(f(r, c));
                bound = std::max(bound, row);
            }
            for (int probe = 0; probe < 100; ++probe) {
                std::vector<cplx> u(5);
                for (cplx& z : u) z = oracle::random_disk(rng, 3.0);
                CHECK(seminorm(f.apply(u), i) <= bound * seminorm(u, i) * (1.0 + 1e-12));
            }
        }
    }

    // violating direction: an off-pattern entry defeats every candidate
    // bound along the scaled basis vector e_c, whose seminorm vanishes
    CMatrix f = oracle::random_lower(rng, 5, 2.0);
    f(1, 3) = 0.5;  // row 2, column 4
    REQUIRE_FALSE(is_projective_map(f, 1e-12));
    std::vector<cplx> u(5);
    u[3] = 1e6;  // scaled basis direction
    CHECK(seminorm(u, 2) == 0.0);
    CHECK(seminorm(f.apply(u), 2) > 0.0);  // no M_2 can bound this by 0
}

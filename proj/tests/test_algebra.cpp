#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "nag/extended.hpp"

using namespace nag;

TEST_SUITE("algebra") {
  TEST_CASE("lin_solve on a small real system") {
    CMatrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 3;
    auto x = lin_solve(a, {3, 5});
    CHECK(std::abs(x[0] - Complex(0.8, 0)) < 1e-15);
    CHECK(std::abs(x[1] - Complex(1.4, 0)) < 1e-15);
  }

  TEST_CASE("lin_solve residual on random complex matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 1 + trial % 6;
      CMatrix a = random_unit_matrix(n, n, rng);
      CVector b = random_unit_vector(n, rng);
      CVector x;
      try {
        x = lin_solve(a, b);
      } catch (const SingularMatrix&) {
        continue;
      }
      auto r = multiply(a, x);
      for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
      CHECK(norm_inf(r) <= 1e-10 * (1 + norm_inf(x)));
    }
  }

  TEST_CASE("lin_solve errors") {
    CMatrix s(2, 2);
    s(0, 0) = 1;
    s(0, 1) = 2;
    s(1, 0) = 2;
    s(1, 1) = 4;
    CHECK_THROWS_AS(lin_solve(s, {1, 1}), SingularMatrix);
    CHECK_THROWS_AS(lin_solve(CMatrix(2, 2), {1, 1}), SingularMatrix);
    CHECK_THROWS_AS(lin_solve(CMatrix(2, 3), {1, 1}), DimensionMismatch);
    CHECK_THROWS_AS(lin_solve(CMatrix::identity(2), {1, 1, 1}), DimensionMismatch);
  }

  TEST_CASE("adjoint solve") {
    Rng rng(3);
    CMatrix a = random_unit_matrix(4, 4, rng);
    CVector b = random_unit_vector(4, rng);
    LuDecomposition<Complex> lu(a);
    auto x = lu.solve_adjoint(b);
    for (std::size_t i = 0; i < 4; ++i) {
      Complex s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += std::conj(a(k, i)) * x[k];
      CHECK(std::abs(s - b[i]) < 1e-10);
    }
  }

  TEST_CASE("condition estimate closed forms") {
    CHECK(condition_estimate(CMatrix::identity(3)) == doctest::Approx(1.0));
    CMatrix d = CMatrix::identity(2);
    d(1, 1) = 1e-6;
    CHECK(condition_estimate(d) == doctest::Approx(1e6));
    // Jacobian of the circle pair at (1/2, √3/2): ‖J‖∞ = 1 + √3 and ‖J⁻¹‖∞ = 1.
    CMatrix j(2, 2);
    j(0, 0) = 1;
    j(0, 1) = std::sqrt(3.0);
    j(1, 0) = -1;
    j(1, 1) = std::sqrt(3.0);
    CHECK(condition_estimate(j) == doctest::Approx(1 + std::sqrt(3.0)));
    CHECK(std::isinf(condition_estimate(CMatrix(2, 2))));
  }

  TEST_CASE("condition estimate bounds the exact 1-norm product from below") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      CMatrix a = random_unit_matrix(3, 3, rng);
      // Exact ‖A⁻¹‖∞ via explicit inverse columns.
      CMatrix inv(3, 3);
      for (std::size_t c = 0; c < 3; ++c) {
        CVector e(3);
        e[c] = 1;
        auto col = lin_solve(a, e);
        for (std::size_t r = 0; r < 3; ++r) inv(r, c) = col[r];
      }
      double exact = norm_inf(a) * norm_inf(inv);
      double est = condition_estimate(a);
      CHECK(est <= exact * (1 + 1e-9));
      CHECK(est >= exact / 3.5);
    }
  }

  TEST_CASE("rng determinism and ranges") {
    Rng a(42), b(42), c(43);
    std::vector<std::uint64_t> sa, sb, sc;
    for (int i = 0; i < 100; ++i) {
      sa.push_back(a.next_u64());
      sb.push_back(b.next_u64());
      sc.push_back(c.next_u64());
    }
    CHECK(sa == sb);
    CHECK(sa != sc);
    Rng u(1);
    for (int i = 0; i < 1000; ++i) {
      double x = u.uniform();
      CHECK((x >= 0.0 && x < 1.0));
    }
    Rng f1(9), f2(9);
    CHECK(f1.fork().next_u64() == f2.fork().next_u64());
    CHECK(f1.next_u64() == f2.next_u64());
  }

  TEST_CASE("random unit draws have modulus one") {
    Rng rng(8);
    for (auto z : random_unit_vector(50, rng)) CHECK(std::abs(std::abs(z) - 1) < 1e-15);
    auto m = random_unit_matrix(3, 4, rng);
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 4);
    for (auto z : m.data()) CHECK(std::abs(std::abs(z) - 1) < 1e-15);
  }

  TEST_CASE("extended precision keeps thirty digits") {
    const std::string s = "0.866025403784438646763723170752";
    ExtReal x = parse_extended(s);
    CHECK(format_extended(x, 30) == "0.866025403784438646763723170752");
    CHECK(kExtendedPrecisionBits >= 106);
    ExtComplex z(x, ExtReal(-1));
    CHECK(to_hardware(z) == Complex(0.8660254037844386, -1));
  }

  TEST_CASE("extended LU solve") {
    DenseMatrix<ExtComplex> a(2, 2);
    a(0, 0) = ExtComplex(1);
    a(0, 1) = ExtComplex(1);
    a(1, 0) = ExtComplex(1);
    a(1, 1) = ExtComplex(-1);
    LuDecomposition<ExtComplex> lu(a, ExtReal(1e-30));
    std::vector<ExtComplex> b{ExtComplex(1), ExtComplex(0)};
    auto x = lu.solve(b);
    CHECK(abs(x[0] - ExtComplex(ExtReal(1) / 2)) < ExtReal(1e-45));
  }

  TEST_CASE("lin_solve hand examples") {
    CHECK(lin_solve(CMatrix::identity(2), {3, Complex(0, 4)}) == CVector{3, Complex(0, 4)});
    CMatrix d = CMatrix::identity(2);
    d(0, 0) = d(1, 1) = 2;
    CHECK(lin_solve(d, {2, 2}) == CVector{1, 1});
    CMatrix a(2, 2);
    a(0, 0) = a(0, 1) = a(1, 0) = 1;
    a(1, 1) = -1;
    auto x = lin_solve(a, {2, 0});
    CHECK(std::abs(x[0] - 1.0) < 1e-15);
    CHECK(std::abs(x[1] - 1.0) < 1e-15);
  }

  TEST_CASE("condition estimate is scale invariant") {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
      CMatrix a = random_unit_matrix(4, 4, rng);
      const Complex alpha = random_unit_complex(rng) * std::pow(10.0, trial % 7 - 3);
      CMatrix b = a;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) b(i, j) *= alpha;
      CHECK(condition_estimate(b) == doctest::Approx(condition_estimate(a)).epsilon(0.1));
    }
  }

  TEST_CASE("random unit complex has mean near zero") {
    Rng rng(1);
    Complex sum = 0;
    for (int i = 0; i < 10000; ++i) sum += random_unit_complex(rng);
    CHECK(std::abs(sum / 10000.0) < 0.05);
    Rng a(1), b(1);
    CHECK(random_unit_complex(a) == random_unit_complex(b));
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <random>

#include "timeop/matrix_io.hpp"
#include "timeop/operator_matrix.hpp"

using namespace timeop;
using Catch::Approx;

namespace {

SpectralFunction pl(double a, double lam, double b) {
  return SpectralFunction::power_law(a, lam, b);
}

Vector basis_vec(Eigen::Index M, Eigen::Index n) {
  Vector v = Vector::Zero(M);
  v[n] = 1.0;
  return v;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

SpectralFunction random_powerlaw(std::mt19937& rng) {
  std::uniform_real_distribution<double> lam(0.55, 2.5), c(0.5, 3.0);
  return SpectralFunction::power_law(c(rng), lam(rng), c(rng));
}

}  // namespace

TEST_CASE("diag_power values", "[operators]") {
  auto d1 = diag_power(pl(1, 1, 1), 3, 1.0);
  CHECK(d1.diagonal_entries()[0] == 1.0);
  CHECK(d1.diagonal_entries()[1] == 2.0);
  CHECK(d1.diagonal_entries()[2] == 3.0);

  auto d2 = diag_power(pl(1, 1, 1), 2, -1.0);
  CHECK(d2.diagonal_entries()[0] == 1.0);
  CHECK(d2.diagonal_entries()[1] == 0.5);

  auto d3 = diag_power(pl(1, 2, 1), 2, 2.0);
  CHECK(d3.diagonal_entries()[0] == 1.0);
  CHECK(d3.diagonal_entries()[1] == 4.0);

  // strictly increasing positive diagonal for p > 0
  auto d4 = diag_power(pl(1, 0.8, 1), 16, 1.0);
  for (int i = 1; i < 16; ++i)
    CHECK(d4.diagonal_entries()[i] > d4.diagonal_entries()[i - 1]);
}

TEST_CASE("shift truncations move basis vectors", "[operators]") {
  auto L = shift_matrix(3, 1, false);
  CHECK((L.apply(basis_vec(3, 1)) - basis_vec(3, 0)).norm() == 0.0);

  auto Lstar = shift_matrix(3, 1, true);
  CHECK(Lstar.apply(basis_vec(3, 2)).norm() == 0.0);  // overflow dropped

  auto Lstar2 = shift_matrix(4, 2, true);
  CHECK((Lstar2.apply(basis_vec(4, 0)) - basis_vec(4, 2)).norm() == 0.0);

  CHECK_THROWS_AS(shift_matrix(3, 3, false), std::invalid_argument);
}

TEST_CASE("time operator entries", "[operators]") {
  auto t = time_operator(pl(1, 1, 1), 2);
  CHECK(t.entry(0, 0) == Complex(0, 0));
  CHECK(t.entry(0, 1) == Complex(0, -1));
  CHECK(t.entry(1, 0) == Complex(0, 1));

  auto t2 = time_operator(pl(1, 2, 1), 2);
  CHECK(t2.entry(1, 0) == Complex(0, 1.0 / 3.0));

  // zero diagonal, purely imaginary off-diagonal
  auto t3 = time_operator(pl(1, 0.8, 1), 32);
  for (int r = 0; r < 32; ++r) {
    CHECK(t3.entry(r, r) == Complex(0, 0));
    for (int c = 0; c < 32; ++c)
      if (r != c) CHECK(t3.entry(r, c).real() == 0.0);
  }

  auto bad = SpectralFunction::tabulated({1.0, 1.0, 2.0});
  CHECK_THROWS_AS(time_operator(bad, 3), std::invalid_argument);
}

TEST_CASE("partial-sum assembly matches closed form on the band",
          "[operators][oracle]") {
  // full band: literal product assembly must reproduce the closed form
  // exactly, entry by entry
  for (auto f : {pl(1, 1, 1), pl(1, 2, 1), pl(1, 0.8, 1)}) {
    for (Eigen::Index M : {2, 3, 5, 8, 13, 32}) {
      auto lit = time_operator_partial(f, M, M);
      auto closed = time_operator(f, M);
      CHECK(max_abs_diff(lit.dense_entries(), closed.dense_entries()) == 0.0);
    }
  }

  // tridiagonal cut
  auto tri = time_operator_partial(pl(1, 1, 1), 3, 1);
  CHECK(tri.entry(1, 0) == Complex(0, 1));
  CHECK(tri.entry(0, 1) == Complex(0, -1));
  CHECK(tri.entry(2, 0) == Complex(0, 0));

  // cut covering the matrix equals the closed form
  auto full = time_operator_partial(pl(1, 1, 1), 3, 2);
  CHECK(max_abs_diff(full.dense_entries(),
                     time_operator(pl(1, 1, 1), 3).dense_entries()) == 0.0);

  // banded restriction at larger size
  auto banded = time_operator_partial(pl(1, 0.8, 1), 64, 8);
  auto closed = time_operator(pl(1, 0.8, 1), 64);
  for (Eigen::Index r = 0; r < 64; ++r)
    for (Eigen::Index c = 0; c < 64; ++c) {
      if (std::abs(r - c) <= 8)
        CHECK(banded.entry(r, c) == closed.entry(r, c));
      else
        CHECK(banded.entry(r, c) == Complex(0, 0));
    }
}

TEST_CASE("galapon matrix from eigenvalue lists", "[operators]") {
  std::vector<double> e12 = {1.0, 2.0};
  auto g = galapon_matrix(e12, 2);
  CHECK(g.entry(0, 1) == Complex(0, -1));

  std::vector<double> esq(8);
  for (int n = 0; n < 8; ++n) esq[n] = double(n) * n + 1.0;
  auto gsq = galapon_matrix(esq, 8);
  auto t = time_operator(pl(1, 2, 1), 8);
  CHECK(max_abs_diff(gsq.dense_entries(), t.dense_entries()) == 0.0);

  std::vector<double> e124 = {1.0, 2.0, 4.0};
  auto g3 = galapon_matrix(e124, 3);
  CHECK(g3.entry(2, 0) == Complex(0, 1.0 / 3.0));

  std::vector<double> dup = {1.0, 1.0, 2.0};
  CHECK_THROWS_AS(galapon_matrix(dup, 3), std::invalid_argument);
}

TEST_CASE("symmetrized operator", "[operators]") {
  // gamma = 0 collapses to the time operator entrywise
  for (auto f : {pl(1, 0.8, 1), SpectralFunction::sqrt_shift()}) {
    auto s = symmetrized_time_op(f, 64, 0.0, 2.0);
    auto t = time_operator(f, 64);
    const double scale = t.dense_entries().cwiseAbs().maxCoeff();
    CHECK(max_abs_diff(s.dense_entries(), t.dense_entries()) <= 1e-13 * scale);
  }

  auto s = symmetrized_time_op(pl(1, 1, 1), 2, 1.0, 2.0);
  CHECK(s.entry(0, 0) == Complex(1, 0));
  CHECK(s.entry(1, 1) == Complex(4, 0));
  CHECK(s.entry(0, 1) == Complex(0, -1));
  CHECK(s.entry(1, 0) == Complex(0, 1));
}

TEST_CASE("hermiticity holds to the last bit", "[operators][property]") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_powerlaw(rng);
    CHECK(hermiticity_defect(time_operator(f, 24)) == 0.0);
    CHECK(hermiticity_defect(time_operator_squared(f, 24)) == 0.0);
    CHECK(hermiticity_defect(symmetrized_time_op(f, 24, 1.7, 2.0)) == 0.0);
    CHECK(hermiticity_defect(time_operator_partial(f, 24, 9)) == 0.0);
  }
  std::vector<double> e = {1.0, 2.5, 2.75, 4.0};
  CHECK(hermiticity_defect(galapon_matrix(e, 4)) == 0.0);
}

TEST_CASE("product identity: (f(m)+f(n)) T'(m,n) = T(m,n)",
          "[operators][property]") {
  for (auto f : {pl(1, 0.8, 1), pl(1, 1.5, 1), SpectralFunction::sqrt_shift()}) {
    for (Eigen::Index M : {16, 128, 512}) {
      auto t = time_operator(f, M);
      auto t2 = time_operator_squared(f, M);
      const double scale = t.dense_entries().cwiseAbs().maxCoeff();
      double worst = 0.0;
      for (Eigen::Index r = 0; r < M; ++r)
        for (Eigen::Index c = 0; c < M; ++c) {
          if (r == c) continue;
          const Complex lhs =
              (f(static_cast<std::size_t>(r)) + f(static_cast<std::size_t>(c))) *
              t2.entry(r, c);
          worst = std::max(worst, std::abs(lhs - t.entry(r, c)));
        }
      CHECK(worst <= 1e-13 * scale);
    }
  }
}

TEST_CASE("commutator special cases", "[operators]") {
  auto f = pl(1, 0.8, 1);
  const Eigen::Index M = 48;
  auto D = diag_power(f, M, 1.0);
  auto T = time_operator(f, M);

  // [diag f, T] has every off-diagonal entry equal to i
  auto C = commutator(D, T);
  for (Eigen::Index r = 0; r < M; ++r)
    for (Eigen::Index c = 0; c < M; ++c) {
      if (r == c)
        CHECK(C.entry(r, c) == Complex(0, 0));
      else
        CHECK(std::abs(C.entry(r, c) - Complex(0, 1)) <= 1e-15);
    }

  // [A, A] = 0
  auto Z = commutator(T, T);
  CHECK(Z.dense_entries().cwiseAbs().maxCoeff() == 0.0);

  // 2x2 hand computation
  DenseMatrix b(2, 2);
  b << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  auto B = OperatorMatrix::dense(MatrixKind::General, b, "B");
  DiagVector a(2);
  a << 1.0, 2.0;
  auto A = OperatorMatrix::diagonal(MatrixKind::DiagPower, a, "A");
  auto C2 = commutator(A, B);
  CHECK(C2.entry(0, 1) == Complex(0, 1));
  CHECK(C2.entry(1, 0) == Complex(0, 1));

  CHECK_THROWS_AS(commutator(A, T), std::invalid_argument);
}

TEST_CASE("diagonal product commutes with truncation", "[operators][oracle]") {
  // multiply at 2M, truncate, compare against the product of truncations
  auto f = pl(1, 0.8, 1);
  const Eigen::Index M = 12;
  auto Dbig = diag_power(f, 2 * M, 1.0).to_dense();
  auto Tbig = time_operator(f, 2 * M).to_dense();
  DenseMatrix big = (Dbig * Tbig).topLeftCorner(M, M);
  DenseMatrix small = diag_power(f, M, 1.0).to_dense() *
                      time_operator(f, M).to_dense();
  CHECK(max_abs_diff(big, small) == 0.0);

  // the same statement fails for two non-diagonal factors, which is exactly
  // why commutator exactness requires a diagonal side
  DenseMatrix nn = (Tbig * Tbig).topLeftCorner(M, M);
  DenseMatrix nn_small = time_operator(f, M).to_dense() *
                         time_operator(f, M).to_dense();
  CHECK(max_abs_diff(nn, nn_small) > 1e-6);
}

TEST_CASE("csv export layout", "[operators][io]") {
  auto t = time_operator(pl(1, 1, 1), 2);
  std::ostringstream out;
  write_matrix_csv(t, out);
  CHECK(out.str() == "0,0,0,-1\n0,1,0,0\n");
}

TEST_CASE("binary dump round-trip", "[operators][io]") {
  std::mt19937 rng(4242);
  auto f = random_powerlaw(rng);
  auto t = symmetrized_time_op(f, 17, 0.5, 1.0);
  const std::string path = "mat_roundtrip_test.bin";
  write_matrix_binary(t, path);
  auto back = read_matrix_binary(path);
  CHECK(back.kind_tag == static_cast<std::uint32_t>(MatrixKind::Symmetrized));
  REQUIRE(back.entries.rows() == 17);
  CHECK(max_abs_diff(back.entries, t.dense_entries()) == 0.0);
  std::remove(path.c_str());
}

#include <doctest.h>

#include <cmath>

#include "dirac/inequalities.hpp"
#include "dirac/radial_ode.hpp"

using namespace dirac;

// The OpenMP kernels must agree bit-for-bit with their serial references:
// every grid point / draw is an independent pure computation and the
// aggregation order is fixed.

TEST_CASE("determinant scan: parallel equals serial bitwise") {
  const PotentialParams p(-0.95, 0, 0, 1.0);
  const RelationRow row = distinguished_row(p, -1);
  SolveOptions opts;
  const int n = 64;
  const auto par = scan_matching_determinant(p, -1, row, 0.05, 0.9, n, opts);
  const auto ser =
      scan_matching_determinant_serial(p, -1, row, 0.05, 0.9, n, opts);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
}

TEST_CASE("inequality corpus: parallel equals serial bitwise") {
  const PotentialParams p(0.5, 0.1, 0.2);
  const int ks[] = {1, -1};
  const CorpusReport par = run_inequality_corpus(p, ks, 6, 42, 1.0);
  const CorpusReport ser = run_inequality_corpus_serial(p, ks, 6, 42, 1.0);
  REQUIRE(par.records.size() == ser.records.size());
  for (std::size_t i = 0; i < par.records.size(); ++i) {
    CHECK(par.records[i].test == ser.records[i].test);
    CHECK(par.records[i].seed == ser.records[i].seed);
    CHECK(par.records[i].lhs == ser.records[i].lhs);
    CHECK(par.records[i].rhs == ser.records[i].rhs);
    CHECK(par.records[i].margin == ser.records[i].margin);
  }
  CHECK(par.min_margin_rel == ser.min_margin_rel);
  CHECK(par.all_ok == ser.all_ok);
}

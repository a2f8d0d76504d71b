// Wall-clock comparison of the OpenMP kernels against their serial
// references: the matching-determinant energy scan and the inequality
// corpus. Both pairs must agree bitwise; this target reports the speedup.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dirac/inequalities.hpp"
#include "dirac/radial_ode.hpp"

using namespace dirac;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, seconds(t0, Clock::now()));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int scan_n = 200;
  int trials = 24;
  if (argc > 1) scan_n = std::stoi(argv[1]);
  if (argc > 2) trials = std::stoi(argv[2]);

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both paths run serially\n");
#endif

  const PotentialParams p(-0.95, 0, 0, 1.0);
  const RelationRow row = distinguished_row(p, -1);
  SolveOptions opts;

  std::vector<double> ser, par;
  const double t_scan_ser = time_best_of(3, [&] {
    ser = scan_matching_determinant_serial(p, -1, row, 0.05, 0.95, scan_n,
                                           opts);
  });
  const double t_scan_par = time_best_of(3, [&] {
    par = scan_matching_determinant(p, -1, row, 0.05, 0.95, scan_n, opts);
  });
  bool same = ser.size() == par.size();
  for (std::size_t i = 0; same && i < ser.size(); ++i)
    same = ser[i] == par[i];

  std::printf("\nmatching-determinant scan, %d energies\n", scan_n);
  std::printf("  serial   %8.3f ms\n", 1e3 * t_scan_ser);
  std::printf("  openmp   %8.3f ms   speedup %.2fx   bitwise %s\n",
              1e3 * t_scan_par, t_scan_ser / t_scan_par,
              same ? "equal" : "DIFFERENT");

  const PotentialParams ip(1.0, 0, 0);
  const int ks[] = {1, -1, 2, -2};
  CorpusReport rs, rp;
  const double t_corpus_ser = time_best_of(2, [&] {
    rs = run_inequality_corpus_serial(ip, ks, trials, 0, 1.0);
  });
  const double t_corpus_par = time_best_of(2, [&] {
    rp = run_inequality_corpus(ip, ks, trials, 0, 1.0);
  });
  bool csame = rs.records.size() == rp.records.size() &&
               rs.min_margin_rel == rp.min_margin_rel;
  for (std::size_t i = 0; csame && i < rs.records.size(); ++i)
    csame = rs.records[i].lhs == rp.records[i].lhs &&
            rs.records[i].rhs == rp.records[i].rhs;

  std::printf("\ninequality corpus, %d trials x 4 channels\n", trials);
  std::printf("  serial   %8.3f ms\n", 1e3 * t_corpus_ser);
  std::printf("  openmp   %8.3f ms   speedup %.2fx   bitwise %s\n",
              1e3 * t_corpus_par, t_corpus_ser / t_corpus_par,
              csame ? "equal" : "DIFFERENT");

  return (same && csame) ? 0 : 1;
}

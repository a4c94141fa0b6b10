// Compares the OpenMP kernels against the serial reference implementations
// on the dense coefficient arrays: wedge products, bidifferential sweeps and
// full star products at benchmark sizes.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fermion/reference.hpp"
#include "fermion/rng.hpp"
#include "fermion/star.hpp"

using namespace fermion;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

MultivectorC random_dense(Rng& rng, int gens) {
  MultivectorC f(gens);
  for (std::uint32_t k = 0; k < f.size(); ++k) f[k] = rng.cnormal();
  return f;
}

template <class F>
double best_of(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    body();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("openmp disabled; kernel and reference both run serially\n");
#endif
  Rng rng(2024);

  std::printf("\n%-28s %10s %12s %9s\n", "case", "kernel ms", "reference ms", "speedup");

  for (int m : {10, 12, 14}) {
    auto a = random_dense(rng, m);
    auto b = random_dense(rng, m);
    MultivectorC out(m);
    const double k = best_of(3, [&] { wedge_kernel(a.data(), b.data(), out.data(), m); });
    const double r = best_of(m >= 14 ? 1 : 2, [&] { out = reference::wedge(a, b); });
    std::printf("wedge m=%-21d %10.2f %12.2f %8.1fx\n", m, k, r, r / k);
  }

  for (int m : {12, 14, 16}) {
    auto f = random_dense(rng, m);
    BiOperator<Cplx> op;
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        if (mu != nu) op.dd.push_back({mu, nu, rng.cnormal()});
        op.dw.push_back({mu, nu, rng.cnormal()});
      }
    MultivectorC out(m);
    const double k = best_of(3, [&] { apply_bioperator(op, f.data(), out.data(), m); });
    const double r = best_of(2, [&] { out = reference::apply_bioperator(op, f); });
    std::printf("bioperator sweep m=%-10d %10.2f %12.2f %8.1fx\n", m, k, r, r / k);
  }

  // Full star products: the doubled algebra runs at 2m generators.
  for (int m : {6, 7, 8}) {
    auto f = random_dense(rng, m);
    auto g = random_dense(rng, m);
    auto q = SqMat<Cplx>::identity(m);
    SqMat<Cplx> K(m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        Cplx v = rng.cnormal();
        K(i, j) = v;
        K(j, i) = -v;
      }
    MultivectorC out(m);
    const double k = best_of(2, [&] { out = star_k(f, g, q, K, Cplx(1.0)); });
    std::printf("star product m=%-14d %10.2f %12s %9s\n", m, k, "-", "-");
  }
  return 0;
}

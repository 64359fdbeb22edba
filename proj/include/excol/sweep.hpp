#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "excol/cohomology.hpp"
#include "excol/fan.hpp"
#include "excol/mutation.hpp"
#include "excol/verifier.hpp"

namespace excol {

/// All specs with s, r >= 1, s + r <= max_dim and 0 = a_0 <= ... <= a_r <= max_degree.
inline std::vector<BundleSpec> enumerate_specs(int max_dim, int max_degree) {
  std::vector<BundleSpec> out;
  for (int s = 1; s < max_dim; ++s)
    for (int r = 1; s + r <= max_dim; ++r) {
      IntVec degs(static_cast<std::size_t>(r) + 1, 0);
      auto rec = [&](auto&& self, std::size_t pos, std::int64_t lo) -> void {
        if (pos == degs.size()) {
          out.push_back(BundleSpec{s, degs});
          return;
        }
        for (std::int64_t a = lo; a <= max_degree; ++a) {
          degs[pos] = a;
          self(self, pos + 1, a);
        }
      };
      rec(rec, 1, 0);
    }
  return out;
}

/// Torus-invariant centers of the given codimension: ray subsets that span a cone.
inline std::vector<CenterSpec> enumerate_centers(const BundleSpec& spec, int codim) {
  std::vector<std::string> names;
  for (int i = 0; i <= spec.s; ++i) names.push_back("b" + std::to_string(i));
  for (int j = 0; j <= spec.r(); ++j) names.push_back("f" + std::to_string(j));
  std::vector<CenterSpec> out;
  const std::size_t n = names.size();
  const auto c = static_cast<std::size_t>(codim);
  std::vector<std::size_t> idx(c);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t start) -> void {
    if (pos == c) {
      int base = 0;
      for (auto i : idx) base += i <= static_cast<std::size_t>(spec.s);
      const int fiber = codim - base;
      if (base <= spec.s && fiber <= spec.r()) {
        CenterSpec cs;
        for (auto i : idx) cs.ray_names.push_back(names[i]);
        out.push_back(std::move(cs));
      }
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      idx[pos] = i;
      self(self, pos + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

struct SweepCase {
  BundleSpec spec;
  CenterSpec center;
  int codim = 0;
};

struct SweepResult {
  SweepCase job;
  std::optional<Report> report;
  std::optional<std::string> error;
  double seconds = 0;

  bool passed() const { return report && report->all_passed() && !error; }
};

inline std::vector<SweepCase> enumerate_cases(int max_dim, int max_degree, const std::vector<int>& codims) {
  std::vector<SweepCase> out;
  for (const auto& spec : enumerate_specs(max_dim, max_degree))
    for (int c : codims)
      for (auto& center : enumerate_centers(spec, c)) out.push_back({spec, std::move(center), c});
  return out;
}

/// Constructs and certifies one case. Errors become part of the result.
inline SweepResult run_case(CohomologyOracle& oracle, const SweepCase& job) {
  SweepResult res{job, std::nullopt, std::nullopt, 0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const BlowupSetup setup = make_blowup(job.spec, job.center);
    MutationEngine engine(setup, oracle);
    const Collection col = engine.construct();
    res.report = certify(oracle, setup.blowup_fan, col, expected_length(job.spec, job.center));
    if (auto bad = engine.recheck_log(col)) res.error = "log entry " + std::to_string(*bad) + " does not reproduce";
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

/// Runs all cases on `jobs` threads; results keep the input order.
inline std::vector<SweepResult> run_sweep(CohomologyOracle& oracle, const std::vector<SweepCase>& cases,
                                          unsigned jobs = 1) {
  std::vector<SweepResult> results(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cases.size();) results[i] = run_case(oracle, cases[i]);
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace excol

#pragma once

#include "fjpop/sdp.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fjpop {

struct HierarchyOptions {
  SdpOptions sdp;
  double stagnation_tol = 1e-6;
  /// Allowed decrease of rho between consecutive orders before the run is flagged.
  double monotone_tol = 1e-6;
  unsigned jobs = 1;
  std::size_t product_cap = kDefaultProductCap;
};

struct HierarchyRow {
  int k = 0;
  double rho = std::nan("");
  double tau = std::nan("");
  SdpStatus sos_status = SdpStatus::max_iter;
  SdpStatus moment_status = SdpStatus::max_iter;
  SdpResiduals sos_residuals, moment_residuals;
  int eta = 0;
  double wall_ms = 0.0;
  std::optional<std::string> error;

  bool optimal() const {
    return !error && sos_status == SdpStatus::optimal && moment_status == SdpStatus::optimal;
  }
};

struct HierarchyResult {
  std::vector<HierarchyRow> rows;
  std::optional<int> stagnation_order;
  /// False when rho decreases between two optimal consecutive orders.
  bool monotone = true;

  bool all_optimal() const {
    for (const auto& r : rows)
      if (!r.optimal()) return false;
    return !rows.empty();
  }
};

/// The relaxed problem for a hierarchy run: pop lifted by the optimality system
/// and products. For the denominator variant without an explicit theta the FJ
/// multiplier lambda0 is used.
inline PopProblem hierarchy_problem(const PopProblem& pop, std::optional<Augmentation> variant, bool use_products,
                                    bool denominator, std::size_t cap = kDefaultProductCap) {
  PopProblem aug = augment_problem(pop, variant, use_products, cap);
  if (denominator && !aug.theta) {
    if (!variant || !has_lambda0(*variant))
      throw std::invalid_argument("denominator variant needs a theta polynomial or an FJ augmentation");
    aug.theta = Polynomial::variable(aug.nvars(), pop.nvars());
  }
  if (!denominator) aug.theta.reset();
  return aug;
}

inline HierarchyRow solve_order(const PopProblem& aug, int k, bool denominator, const SdpOptions& opts) {
  HierarchyRow row;
  row.k = k;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    SdpSolution sos, mom;
    if (denominator) {
      DenominatorRelaxation rel = build_denominator_sdp(aug, k);
      row.eta = rel.eta;
      sos = solve_sdp(rel.sos, opts);
      mom = solve_sdp(rel.moment, opts);
    } else {
      sos = solve_sdp(build_sos_sdp(aug, k), opts);
      mom = solve_sdp(build_moment_sdp(aug, k), opts);
    }
    row.rho = sos.value;
    row.tau = mom.value;
    row.sos_status = sos.status;
    row.moment_status = mom.status;
    row.sos_residuals = sos.residuals;
    row.moment_residuals = mom.residuals;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

/// rho_k and tau_k for k in [k_min, k_max]. Errors are recorded per order and
/// the run continues; rows are ordered by k whatever the number of jobs.
inline HierarchyResult run_hierarchy(const PopProblem& pop, std::optional<Augmentation> variant, bool use_products,
                                     int k_min, int k_max, bool denominator, const HierarchyOptions& opts = {}) {
  if (k_min > k_max) throw std::invalid_argument("k_min exceeds k_max");
  const PopProblem aug = hierarchy_problem(pop, variant, use_products, denominator, opts.product_cap);
  const int kmin_adm = minimal_order(aug);
  if (k_min < kmin_adm) throw OrderTooSmall(k_min, kmin_adm);

  HierarchyResult res;
  const auto count = static_cast<std::size_t>(k_max - k_min + 1);
  res.rows.resize(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;)
      res.rows[i] = solve_order(aug, k_min + static_cast<int>(i), denominator, opts.sdp);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(count)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 1; i < count; ++i) {
    const auto& prev = res.rows[i - 1];
    const auto& cur = res.rows[i];
    if (!prev.optimal() || !cur.optimal()) continue;
    if (cur.rho < prev.rho - opts.monotone_tol) res.monotone = false;
    if (!res.stagnation_order && std::abs(cur.rho - prev.rho) <= opts.stagnation_tol) res.stagnation_order = cur.k;
  }
  return res;
}

}  // namespace fjpop

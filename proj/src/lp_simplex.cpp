#include "mcover/lp_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mcover {

Index LPModel::add_variable(double cost, double lo, double hi, std::string name) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  return objective.size() - 1;
}

void LPModel::add_row(std::vector<std::pair<Index, double>> coeffs, Sense sense, double rhs,
                      std::string name) {
  rows.push_back({std::move(coeffs), sense, rhs, std::move(name)});
}

void LPModel::validate() const {
  const std::size_t n = objective.size();
  if (lower.size() != n || upper.size() != n) throw std::invalid_argument("LP bound vector sizes");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) throw std::invalid_argument("LP objective not finite");
    if (!std::isfinite(lower[j])) throw std::invalid_argument("LP lower bounds must be finite");
    if (std::isnan(upper[j]) || upper[j] < lower[j]) throw std::invalid_argument("LP lo > hi");
  }
  for (const auto& row : rows) {
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("LP rhs not finite");
    for (const auto& [j, a] : row.coeffs) {
      if (j >= n) throw std::invalid_argument("LP row references unknown variable");
      if (!std::isfinite(a)) throw std::invalid_argument("LP coefficient not finite");
    }
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::solver_failure: return "solver_failure";
  }
  return "unknown";
}

namespace {

enum class PhaseResult { optimal, unbounded, iteration_cap };

// Columns: structurals [0, n), one slack per row [n, n+m), one artificial per row [n+m, n+2m).
class Tableau {
 public:
  Tableau(const LPModel& model, const SimplexOptions& opt) : opt_(opt) {
    n_ = model.num_vars();
    m_ = model.rows.size();
    cols_ = n_ + 2 * m_;
    a_.assign(m_ * cols_, 0.0);
    rhs_.resize(m_);
    sigma_.resize(m_);
    lo_.assign(cols_, 0.0);
    hi_.assign(cols_, kInf);
    val_.assign(cols_, 0.0);
    at_upper_.assign(cols_, false);
    row_of_.assign(cols_, kNone);
    basis_.resize(m_);

    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = model.lower[j];
      hi_[j] = model.upper[j];
      val_[j] = lo_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = model.rows[i];
      for (const auto& [j, coef] : row.coeffs) a_[i * cols_ + j] += coef;
      const std::size_t s = n_ + i;
      a_[i * cols_ + s] = row.sense == Sense::ge ? -1.0 : 1.0;
      if (row.sense == Sense::eq) hi_[s] = 0.0;
      rhs_[i] = row.rhs;
      double resid = row.rhs;
      for (std::size_t j = 0; j < n_; ++j) resid -= a_[i * cols_ + j] * val_[j];
      sigma_[i] = resid >= 0.0 ? 1.0 : -1.0;
      const std::size_t art = n_ + m_ + i;
      a_[i * cols_ + art] = sigma_[i];
      val_[art] = std::abs(resid);
    }
    t_ = a_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (sigma_[i] < 0.0) {
        for (std::size_t j = 0; j < cols_; ++j) t_[i * cols_ + j] = -t_[i * cols_ + j];
      }
      basis_[i] = n_ + m_ + i;
      row_of_[n_ + m_ + i] = i;
    }
  }

  std::size_t iterations() const { return iterations_; }

  PhaseResult run(const std::vector<double>& cost) {
    cost_ = cost;
    compute_reduced_costs();
    for (;;) {
      if (iterations_ >= opt_.max_iterations) return PhaseResult::iteration_cap;
      const std::size_t q = choose_entering();
      if (q == kNone) return PhaseResult::optimal;
      if (!step(q)) return PhaseResult::unbounded;
      ++iterations_;
    }
  }

  double phase1_infeasibility() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i) s += val_[n_ + m_ + i];
    return s;
  }

  // Pivots basic artificials out where possible and fixes every artificial at zero.
  void prepare_phase2() {
    for (std::size_t p = 0; p < m_; ++p) {
      if (!is_artificial(basis_[p])) continue;
      std::size_t best = kNone;
      double best_abs = 1e-7;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (row_of_[j] != kNone) continue;
        const double v = std::abs(t_[p * cols_ + j]);
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best != kNone) {
        const std::size_t leaving = basis_[p];
        pivot(p, best);
        val_[leaving] = 0.0;
        at_upper_[leaving] = false;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t art = n_ + m_ + i;
      hi_[art] = 0.0;
      if (row_of_[art] == kNone) {
        val_[art] = 0.0;
        at_upper_[art] = false;
      }
    }
    refresh_basic_values();
  }

  void refresh_basic_values() {
    // x_B = B^{-1}(rhs - N x_N); column k of B^{-1} is sigma_k times the tableau column of
    // artificial k, since that column started as sigma_k e_k.
    std::vector<double> w = rhs_;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (row_of_[j] != kNone || val_[j] == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) w[i] -= a_[i * cols_ + j] * val_[j];
    }
    for (std::size_t p = 0; p < m_; ++p) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += t_[p * cols_ + n_ + m_ + k] * sigma_[k] * w[k];
      val_[basis_[p]] = v;
    }
  }

  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      double v = 0.0;
      for (std::size_t p = 0; p < m_; ++p) v += cost_[basis_[p]] * t_[p * cols_ + n_ + m_ + k];
      y[k] = sigma_[k] * v;
    }
    return y;
  }

  const std::vector<double>& values() const { return val_; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool is_artificial(std::size_t j) const { return j >= n_ + m_; }

  void compute_reduced_costs() {
    d_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      double v = cost_[j];
      for (std::size_t i = 0; i < m_; ++i) v -= cost_[basis_[i]] * t_[i * cols_ + j];
      d_[j] = v;
    }
  }

  std::size_t choose_entering() const {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (row_of_[j] != kNone) continue;
      if (hi_[j] - lo_[j] <= 0.0) continue;
      if (!at_upper_[j] && d_[j] < -opt_.optimality_tol) return j;
      if (at_upper_[j] && d_[j] > opt_.optimality_tol) return j;
    }
    return kNone;
  }

  // Moves q in its improving direction as far as the bounds allow. False when unbounded.
  bool step(std::size_t q) {
    const double dir = at_upper_[q] ? -1.0 : 1.0;
    double t_max = hi_[q] - lo_[q];
    std::size_t leave = kNone;
    bool leave_to_upper = false;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = dir * t_[i * cols_ + q];
      const std::size_t b = basis_[i];
      double limit = kInf;
      bool to_upper = false;
      if (a > opt_.pivot_tol) {
        limit = (val_[b] - lo_[b]) / a;
      } else if (a < -opt_.pivot_tol && std::isfinite(hi_[b])) {
        limit = (hi_[b] - val_[b]) / -a;
        to_upper = true;
      } else {
        continue;
      }
      limit = std::max(0.0, limit);
      const bool better = limit < t_max - 1e-12;
      const bool tie = !better && limit <= t_max + 1e-12 && leave != kNone && b < basis_[leave];
      if (better || tie) {
        t_max = limit;
        leave = i;
        leave_to_upper = to_upper;
      }
    }
    if (!std::isfinite(t_max)) return false;

    val_[q] += dir * t_max;
    for (std::size_t i = 0; i < m_; ++i) val_[basis_[i]] -= dir * t_max * t_[i * cols_ + q];

    if (leave == kNone) {
      at_upper_[q] = !at_upper_[q];
      val_[q] = at_upper_[q] ? hi_[q] : lo_[q];
      return true;
    }
    const std::size_t leaving = basis_[leave];
    pivot(leave, q);
    at_upper_[leaving] = leave_to_upper;
    val_[leaving] = leave_to_upper ? hi_[leaving] : lo_[leaving];
    return true;
  }

  void pivot(std::size_t p, std::size_t q) {
    double* prow = &t_[p * cols_];
    const double piv = prow[q];
    for (std::size_t j = 0; j < cols_; ++j) prow[j] /= piv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == p) continue;
      double* row = &t_[i * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= dq * prow[j];
      d_[q] = 0.0;
    }
    row_of_[basis_[p]] = kNone;
    basis_[p] = q;
    row_of_[q] = p;
  }

  SimplexOptions opt_;
  std::size_t n_ = 0, m_ = 0, cols_ = 0;
  std::vector<double> a_;  // original coefficients, row-major
  std::vector<double> t_;  // current tableau B^{-1} A
  std::vector<double> rhs_, sigma_, lo_, hi_, val_, cost_, d_;
  std::vector<bool> at_upper_;
  std::vector<std::size_t> basis_, row_of_;
  std::size_t iterations_ = 0;
};

double row_activity(const LpRow& row, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& [j, a] : row.coeffs) s += a * x[j];
  return s;
}

}  // namespace

LPSolution DenseSimplex::solve(const LPModel& model) const {
  model.validate();
  const std::size_t n = model.num_vars();
  const std::size_t m = model.rows.size();
  LPSolution sol;
  Tableau tab(model, options_);

  std::vector<double> phase1(n + 2 * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + m + i] = 1.0;
  PhaseResult pr = tab.run(phase1);
  sol.iterations = tab.iterations();
  if (pr == PhaseResult::iteration_cap) {
    sol.message = "iteration cap reached in phase 1";
    return sol;
  }
  tab.refresh_basic_values();
  double rhs_scale = 1.0;
  for (const auto& row : model.rows) rhs_scale = std::max(rhs_scale, std::abs(row.rhs));
  if (tab.phase1_infeasibility() > options_.feasibility_tol * rhs_scale) {
    sol.status = LpStatus::infeasible;
    sol.message = "phase 1 optimum is positive";
    return sol;
  }

  tab.prepare_phase2();
  std::vector<double> phase2(n + 2 * m, 0.0);
  std::copy(model.objective.begin(), model.objective.end(), phase2.begin());
  pr = tab.run(phase2);
  sol.iterations = tab.iterations();
  if (pr == PhaseResult::iteration_cap) {
    sol.message = "iteration cap reached in phase 2";
    return sol;
  }
  if (pr == PhaseResult::unbounded) {
    sol.status = LpStatus::unbounded;
    sol.message = "improving ray found";
    return sol;
  }
  tab.refresh_basic_values();

  const auto& vals = tab.values();
  sol.x.assign(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double tol = options_.feasibility_tol * std::max(1.0, std::abs(sol.x[j]));
    if (sol.x[j] < model.lower[j] - tol || sol.x[j] > model.upper[j] + tol) {
      sol.message = "bound residual check failed";
      return sol;
    }
    sol.x[j] = std::clamp(sol.x[j], model.lower[j], model.upper[j]);
  }
  for (const auto& row : model.rows) {
    const double act = row_activity(row, sol.x);
    const double tol = options_.feasibility_tol * std::max(1.0, std::abs(row.rhs));
    const bool ok = (row.sense == Sense::le && act <= row.rhs + tol) ||
                    (row.sense == Sense::ge && act >= row.rhs - tol) ||
                    (row.sense == Sense::eq && std::abs(act - row.rhs) <= tol);
    if (!ok) {
      sol.message = "row residual check failed";
      return sol;
    }
  }

  sol.duals = tab.duals();
  sol.reduced_costs = model.objective;
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, a] : model.rows[i].coeffs) sol.reduced_costs[j] -= sol.duals[i] * a;
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += model.objective[j] * sol.x[j];
  sol.dual_objective = 0.0;
  for (std::size_t i = 0; i < m; ++i) sol.dual_objective += sol.duals[i] * model.rows[i].rhs;
  for (std::size_t j = 0; j < n; ++j) {
    const double mu = sol.reduced_costs[j];
    if (mu > 0.0) {
      sol.dual_objective += mu * model.lower[j];
    } else if (mu < 0.0) {
      sol.dual_objective += mu * (std::isfinite(model.upper[j]) ? model.upper[j] : sol.x[j]);
    }
  }
  sol.status = LpStatus::optimal;
  return sol;
}

LPSolution solve_lp(const LPModel& model) { return DenseSimplex().solve(model); }

LPSolution solve_lp(const LPModel& model, const LpBackend& backend) { return backend.solve(model); }

std::string to_lp_format(const LPModel& model) {
  auto var = [&](std::size_t j) {
    return model.names[j].empty() ? "v" + std::to_string(j) : model.names[j];
  };
  std::ostringstream os;
  os.precision(17);
  os << "Minimize\n obj:";
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    if (model.objective[j] != 0.0) os << (model.objective[j] < 0 ? " - " : " + ")
                                      << std::abs(model.objective[j]) << " " << var(j);
  }
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.rows.size(); ++i) {
    const auto& row = model.rows[i];
    os << " " << (row.name.empty() ? "r" + std::to_string(i) : row.name) << ":";
    for (const auto& [j, a] : row.coeffs) os << (a < 0 ? " - " : " + ") << std::abs(a) << " " << var(j);
    os << (row.sense == Sense::le ? " <= " : row.sense == Sense::ge ? " >= " : " = ") << row.rhs
       << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    os << " " << model.lower[j] << " <= " << var(j) << " <= ";
    if (std::isfinite(model.upper[j])) {
      os << model.upper[j];
    } else {
      os << "+inf";
    }
    os << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace mcover

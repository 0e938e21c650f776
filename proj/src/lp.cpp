#include "gmt/lp.hpp"

#include "gmt/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace gmt {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState : unsigned char { basic, at_lower, at_upper };

class Simplex {
 public:
  Simplex(const LpProblem& problem, const SimplexOptions& options) : opt_(options), m_(problem.rows) {
    if (m_ < 0 || static_cast<int>(problem.rhs.size()) != m_) throw ContractError("solve_lp: rhs size mismatch");
    row_sign_.assign(static_cast<std::size_t>(m_), 1.0);
    b_ = Eigen::VectorXd(m_);
    for (int i = 0; i < m_; ++i) {
      const double v = problem.rhs[static_cast<std::size_t>(i)];
      if (v < 0.0) row_sign_[static_cast<std::size_t>(i)] = -1.0;
      b_[i] = std::abs(v);
    }
    structural_ = static_cast<int>(problem.columns.size());
    start_.push_back(0);
    for (const auto& c : problem.columns) {
      if (!(c.upper >= 0.0)) throw ContractError("solve_lp: negative upper bound");
      for (const auto& [row, coef] : c.entries) {
        if (row < 0 || row >= m_) throw ContractError("solve_lp: row index out of range");
        row_.push_back(row);
        val_.push_back(coef * row_sign_[static_cast<std::size_t>(row)]);
      }
      start_.push_back(static_cast<int>(row_.size()));
      upper_.push_back(c.upper);
      problem_costs_.push_back(c.cost);
    }
    crash_basis();
  }

  LpSolution run() {
    LpSolution sol;
    if (artificial_count_ > 0) {
      std::vector<double> phase1(upper_.size(), 0.0);
      for (std::size_t j = static_cast<std::size_t>(structural_); j < upper_.size(); ++j) phase1[j] = 1.0;
      const LpStatus st = iterate(phase1, sol.iterations);
      if (st == LpStatus::iteration_limit) {
        sol.status = st;
        return sol;
      }
      double infeasibility = 0.0;
      for (std::size_t j = static_cast<std::size_t>(structural_); j < upper_.size(); ++j) infeasibility += x_[j];
      if (infeasibility > opt_.feasibility_tolerance * (1.0 + b_.lpNorm<1>())) {
        sol.status = LpStatus::infeasible;
        return sol;
      }
      // Artificials may stay basic at zero but can never grow again.
      for (std::size_t j = static_cast<std::size_t>(structural_); j < upper_.size(); ++j) {
        upper_[j] = 0.0;
        x_[j] = 0.0;
        if (state_[j] == VarState::at_upper) state_[j] = VarState::at_lower;
      }
    }
    std::vector<double> cost(upper_.size(), 0.0);
    for (int j = 0; j < structural_; ++j) {
      cost[static_cast<std::size_t>(j)] = problem_costs_[static_cast<std::size_t>(j)];
    }
    sol.status = iterate(cost, sol.iterations);
    if (sol.status != LpStatus::optimal) return sol;

    refactor();
    sol.x.assign(x_.begin(), x_.begin() + structural_);
    sol.objective = 0.0;
    for (int j = 0; j < structural_; ++j) sol.objective += cost[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
    const Eigen::VectorXd y = duals(cost);
    sol.duals.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) sol.duals[static_cast<std::size_t>(i)] = y[i] * row_sign_[static_cast<std::size_t>(i)];
    return sol;
  }

 private:
  void crash_basis() {
    basis_.assign(static_cast<std::size_t>(m_), -1);
    state_.assign(upper_.size(), VarState::at_lower);
    for (int j = 0; j < structural_; ++j) {
      const auto k = static_cast<std::size_t>(start_[static_cast<std::size_t>(j)]);
      if (start_[static_cast<std::size_t>(j) + 1] - start_[static_cast<std::size_t>(j)] != 1) continue;
      const int row = row_[k];
      const double coef = val_[k];
      if (basis_[static_cast<std::size_t>(row)] != -1 || coef <= 0.0) continue;
      if (b_[row] / coef > upper_[static_cast<std::size_t>(j)]) continue;
      basis_[static_cast<std::size_t>(row)] = j;
      state_[static_cast<std::size_t>(j)] = VarState::basic;
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] != -1) continue;
      row_.push_back(i);
      val_.push_back(1.0);
      start_.push_back(static_cast<int>(row_.size()));
      upper_.push_back(kInf);
      state_.push_back(VarState::basic);
      basis_[static_cast<std::size_t>(i)] = static_cast<int>(upper_.size()) - 1;
      ++artificial_count_;
    }
    x_.assign(upper_.size(), 0.0);
    refactor();
  }

  template <class F>
  void for_entries(std::size_t j, F&& f) const {
    for (int k = start_[j]; k < start_[j + 1]; ++k) f(row_[static_cast<std::size_t>(k)], val_[static_cast<std::size_t>(k)]);
  }

  // Rebuilds B^{-1} from the basis columns and recomputes basic values.
  void refactor() {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      for_entries(static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]),
                  [&](int row, double coef) { basis_matrix(row, i) = coef; });
    }
    binv_ = basis_matrix.partialPivLu().inverse();
    Eigen::VectorXd rhs = b_;
    for (std::size_t j = 0; j < upper_.size(); ++j) {
      if (state_[j] != VarState::at_upper) continue;
      for_entries(j, [&](int row, double coef) { rhs[row] -= coef * upper_[j]; });
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (int i = 0; i < m_; ++i) x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = xb[i];
    since_refactor_ = 0;
  }

  Eigen::VectorXd duals(const std::vector<double>& cost) const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
    return binv_.transpose() * cb;
  }

  double reduced_cost(std::size_t j, const std::vector<double>& cost, const Eigen::VectorXd& y) const {
    double d = cost[j];
    for (int k = start_[j]; k < start_[j + 1]; ++k) {
      d -= val_[static_cast<std::size_t>(k)] * y[row_[static_cast<std::size_t>(k)]];
    }
    return d;
  }

  LpStatus iterate(const std::vector<double>& cost, int& iterations) {
    double cost_scale = 1.0;
    for (double c : cost) cost_scale = std::max(cost_scale, std::abs(c));
    const double dtol = opt_.optimality_tolerance * cost_scale;
    Eigen::VectorXd y = duals(cost);
    int degenerate_streak = 0;
    Eigen::VectorXd alpha(m_);

    while (true) {
      if (iterations >= opt_.max_iterations) return LpStatus::iteration_limit;
      const bool bland = degenerate_streak > opt_.degenerate_streak_limit;

      // Partial pricing: scan blocks cyclically and take the best candidate
      // of the first block that has one. A full cycle without candidates
      // proves optimality.
      std::ptrdiff_t entering = -1;
      double best = 0.0;
      double entering_d = 0.0;
      const std::size_t total = upper_.size();
      const std::size_t block = bland ? total : std::max<std::size_t>(512, total / 16);
      for (std::size_t scanned = 0; scanned < total && entering < 0;) {
        const std::size_t end = std::min(total, scanned + block);
        for (; scanned < end; ++scanned) {
          const std::size_t j = bland ? scanned : (price_cursor_ + scanned) % total;
          if (state_[j] == VarState::basic || upper_[j] == 0.0) continue;
          const double d = reduced_cost(j, cost, y);
          const bool improving = (state_[j] == VarState::at_lower && d < -dtol) ||
                                 (state_[j] == VarState::at_upper && d > dtol);
          if (!improving) continue;
          if (bland) {
            entering = static_cast<std::ptrdiff_t>(j);
            entering_d = d;
            break;
          }
          if (std::abs(d) > best) {
            best = std::abs(d);
            entering = static_cast<std::ptrdiff_t>(j);
            entering_d = d;
          }
        }
        if (!bland && entering >= 0) price_cursor_ = (price_cursor_ + scanned) % total;
      }
      if (entering < 0) return LpStatus::optimal;
      const auto q = static_cast<std::size_t>(entering);
      const double dir = state_[q] == VarState::at_lower ? 1.0 : -1.0;

      alpha.setZero();
      for_entries(q, [&](int row, double coef) { alpha += coef * binv_.col(row); });

      // Ratio test: x_B(t) = x_B - dir * t * alpha.
      double step = upper_[q];  // bound flip
      int leaving = -1;
      bool leaving_to_upper = false;
      double leaving_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = dir * alpha[i];
        if (std::abs(a) <= opt_.pivot_tolerance) continue;
        const auto bj = static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
        double ratio;
        bool to_upper;
        if (a > 0.0) {
          ratio = std::max(0.0, x_[bj]) / a;
          to_upper = false;
        } else {
          if (!std::isfinite(upper_[bj])) continue;
          ratio = std::max(0.0, upper_[bj] - x_[bj]) / (-a);
          to_upper = true;
        }
        bool take = false;
        if (ratio < step) {
          take = true;
        } else if (leaving >= 0 && ratio == step) {
          take = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leaving)]
                       : std::abs(alpha[i]) > std::abs(leaving_pivot);
        }
        if (take) {
          step = ratio;
          leaving = i;
          leaving_to_upper = to_upper;
          leaving_pivot = alpha[i];
        }
      }
      if (!std::isfinite(step)) return LpStatus::unbounded;
      ++iterations;
      degenerate_streak = step <= 1e-14 ? degenerate_streak + 1 : 0;

      for (int i = 0; i < m_; ++i) {
        x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -= dir * step * alpha[i];
      }
      x_[q] += dir * step;

      if (leaving < 0) {
        // Entering variable hits its own opposite bound.
        state_[q] = dir > 0 ? VarState::at_upper : VarState::at_lower;
        x_[q] = dir > 0 ? upper_[q] : 0.0;
        continue;
      }

      const auto out = static_cast<std::size_t>(basis_[static_cast<std::size_t>(leaving)]);
      state_[out] = leaving_to_upper ? VarState::at_upper : VarState::at_lower;
      x_[out] = leaving_to_upper ? upper_[out] : 0.0;
      state_[q] = VarState::basic;
      basis_[static_cast<std::size_t>(leaving)] = static_cast<int>(q);

      // y' = y + (d_q / alpha_r) * (row r of the old B^{-1})^T
      const double pivot = alpha[leaving];
      const Eigen::RowVectorXd pivot_row = binv_.row(leaving) / pivot;
      y += entering_d * pivot_row.transpose();
      binv_.noalias() -= alpha * pivot_row;
      binv_.row(leaving) = pivot_row;

      if (++since_refactor_ >= opt_.refactor_interval) {
        refactor();
        y = duals(cost);
      }
    }
  }

  SimplexOptions opt_;
  int m_;
  int structural_ = 0;
  int artificial_count_ = 0;
  int since_refactor_ = 0;
  std::size_t price_cursor_ = 0;
  std::vector<double> row_sign_;
  Eigen::VectorXd b_;
  std::vector<int> start_;
  std::vector<int> row_;
  std::vector<double> val_;
  std::vector<double> upper_;
  std::vector<double> problem_costs_;
  std::vector<int> basis_;
  std::vector<VarState> state_;
  std::vector<double> x_;
  Eigen::MatrixXd binv_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options) {
  if (problem.rows == 0) {
    LpSolution sol;
    sol.x.assign(problem.columns.size(), 0.0);
    for (std::size_t j = 0; j < problem.columns.size(); ++j) {
      const auto& c = problem.columns[j];
      if (c.cost < 0.0) {
        if (!std::isfinite(c.upper)) {
          sol.status = LpStatus::unbounded;
          return sol;
        }
        sol.x[j] = c.upper;
        sol.objective += c.cost * c.upper;
      }
    }
    sol.status = LpStatus::optimal;
    return sol;
  }
  return Simplex(problem, options).run();
}

}  // namespace gmt

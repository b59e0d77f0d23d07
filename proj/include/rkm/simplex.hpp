#pragma once

// Bounded-variable revised primal simplex.
//
// Every row i gets a logical variable r_i = a_i . x whose bounds encode the
// row sense, so the working system is A x - r = 0. Structurals start at their
// lower bounds; rows whose activity is then out of range get an artificial
// column and phase 1 minimizes the sum of artificials. Phase 2 fixes the
// artificials at zero and minimizes the model objective.
//
// The basis is kept as a sparse LU factorization (Eigen) of the last
// refactorized basis plus a product-form eta file. Pricing is Dantzig's rule;
// after 10 * rows consecutive degenerate pivots it falls back to Bland's rule
// until the next non-degenerate pivot.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rkm/error.hpp"
#include "rkm/lp_model.hpp"

namespace rkm {

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  double pivot_tol = 1e-9;
  long max_pivots = 1'000'000;
  int refactor_interval = 64;
};

namespace detail {

using SparseVec = std::vector<std::pair<int, double>>;

class BasisFactor {
public:
  bool factor(int m, const std::vector<const SparseVec*>& columns) {
    m_ = m;
    std::vector<Eigen::Triplet<double>> triplets;
    for (int c = 0; c < m; ++c) {
      for (const auto& [row, value] : *columns[static_cast<std::size_t>(c)]) {
        triplets.emplace_back(row, c, value);
      }
    }
    Eigen::SparseMatrix<double> basis(m, m);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    etas_.clear();
    return lu_.info() == Eigen::Success;
  }

  void ftran(Eigen::VectorXd& v) {
    v = lu_.solve(v).eval();
    for (const auto& eta : etas_) {
      double& vr = v[eta.row];
      if (vr == 0.0) {
        continue;
      }
      vr /= eta.pivot;
      for (const auto& [i, a] : eta.others) {
        v[i] -= a * vr;
      }
    }
  }

  void btran(Eigen::VectorXd& v) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->row];
      for (const auto& [i, a] : it->others) {
        s -= a * v[i];
      }
      v[it->row] = s / it->pivot;
    }
    v = lu_.transpose().solve(v).eval();
  }

  void push_eta(int row, const Eigen::VectorXd& alpha) {
    Eta eta;
    eta.row = row;
    eta.pivot = alpha[row];
    for (int i = 0; i < m_; ++i) {
      if (i != row && std::abs(alpha[i]) > 1e-13) {
        eta.others.emplace_back(i, alpha[i]);
      }
    }
    etas_.push_back(std::move(eta));
  }

  std::size_t eta_count() const noexcept { return etas_.size(); }

private:
  struct Eta {
    int row = 0;
    double pivot = 1.0;
    SparseVec others;
  };

  int m_ = 0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

class BoundedSimplex {
public:
  BoundedSimplex(const LpModel& model, const SimplexOptions& opt) : model_(model), opt_(opt) {
    n_ = model.n_vars();
    m_ = model.n_rows();
    cols_.resize(static_cast<std::size_t>(n_ + m_));
    lower_.resize(static_cast<std::size_t>(n_ + m_));
    upper_.resize(static_cast<std::size_t>(n_ + m_));
    for (int i = 0; i < m_; ++i) {
      const auto& row = model.rows[static_cast<std::size_t>(i)];
      for (const auto& t : row.terms) {
        if (t.coef != 0.0) {
          cols_[static_cast<std::size_t>(t.var)].emplace_back(i, t.coef);
        }
      }
      cols_[static_cast<std::size_t>(n_ + i)].emplace_back(i, -1.0);
      lower_[static_cast<std::size_t>(n_ + i)] = row.sense == Sense::Le ? -kInf : row.rhs;
      upper_[static_cast<std::size_t>(n_ + i)] = row.sense == Sense::Ge ? kInf : row.rhs;
    }
    // Merge duplicate (row, var) entries.
    for (int j = 0; j < n_; ++j) {
      auto& col = cols_[static_cast<std::size_t>(j)];
      std::sort(col.begin(), col.end(), [](auto& a, auto& b) { return a.first < b.first; });
      SparseVec merged;
      for (const auto& e : col) {
        if (!merged.empty() && merged.back().first == e.first) {
          merged.back().second += e.second;
        } else {
          merged.push_back(e);
        }
      }
      col = std::move(merged);
      lower_[static_cast<std::size_t>(j)] = model.vars[static_cast<std::size_t>(j)].lower;
      upper_[static_cast<std::size_t>(j)] = model.vars[static_cast<std::size_t>(j)].upper;
    }
    objective_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    for (const auto& t : model.objective) {
      objective_[static_cast<std::size_t>(t.var)] += t.coef;
    }
  }

  LpSolution run() {
    initialize();
    LpSolution sol;

    if (n_art_ > 0) {
      std::vector<double> phase1(cols_.size(), 0.0);
      for (int a = first_art_; a < static_cast<int>(cols_.size()); ++a) {
        phase1[static_cast<std::size_t>(a)] = 1.0;
      }
      const auto st = iterate(phase1);
      (void)st; // phase 1 is bounded below by zero
      recompute_primal();
      double infeasibility = 0.0;
      for (int a = first_art_; a < static_cast<int>(cols_.size()); ++a) {
        infeasibility += x_[static_cast<std::size_t>(a)];
      }
      if (infeasibility > opt_.feasibility_tol * std::max(1.0, rhs_scale_)) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = pivots_;
        return sol;
      }
      for (int a = first_art_; a < static_cast<int>(cols_.size()); ++a) {
        upper_[static_cast<std::size_t>(a)] = 0.0;
        if (status_[static_cast<std::size_t>(a)] != Basic) {
          status_[static_cast<std::size_t>(a)] = AtLower;
          x_[static_cast<std::size_t>(a)] = 0.0;
        }
      }
    }

    std::vector<double> phase2 = objective_;
    phase2.resize(cols_.size(), 0.0);
    if (iterate(phase2) == LpStatus::Unbounded) {
      sol.status = LpStatus::Unbounded;
      sol.iterations = pivots_;
      return sol;
    }
    recompute_primal();

    sol.status = LpStatus::Optimal;
    sol.iterations = pivots_;
    sol.values.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
      sol.values[static_cast<std::size_t>(j)] =
          std::clamp(x_[static_cast<std::size_t>(j)], lower_[static_cast<std::size_t>(j)],
                     upper_[static_cast<std::size_t>(j)]);
    }
    sol.objective = objective_value(model_, sol.values);
    return sol;
  }

private:
  enum VarStatus : unsigned char { Basic, AtLower, AtUpper };

  void initialize() {
    const int total = n_ + m_;
    x_.assign(static_cast<std::size_t>(total), 0.0);
    status_.assign(static_cast<std::size_t>(total), AtLower);
    for (int j = 0; j < n_; ++j) {
      x_[static_cast<std::size_t>(j)] = lower_[static_cast<std::size_t>(j)];
    }
    std::vector<double> activity(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < n_; ++j) {
      for (const auto& [i, a] : cols_[static_cast<std::size_t>(j)]) {
        activity[static_cast<std::size_t>(i)] += a * x_[static_cast<std::size_t>(j)];
      }
    }
    basis_.assign(static_cast<std::size_t>(m_), -1);
    first_art_ = total;
    rhs_scale_ = 1.0;
    for (int i = 0; i < m_; ++i) {
      const int r = n_ + i;
      const double act = activity[static_cast<std::size_t>(i)];
      const double lo = lower_[static_cast<std::size_t>(r)];
      const double hi = upper_[static_cast<std::size_t>(r)];
      rhs_scale_ = std::max(rhs_scale_, std::abs(std::isfinite(lo) ? lo : hi));
      if (act >= lo - opt_.feasibility_tol && act <= hi + opt_.feasibility_tol) {
        basis_[static_cast<std::size_t>(i)] = r;
        status_[static_cast<std::size_t>(r)] = Basic;
        x_[static_cast<std::size_t>(r)] = act;
        continue;
      }
      const bool below = act < lo;
      const double bound = below ? lo : hi;
      status_[static_cast<std::size_t>(r)] = below ? AtLower : AtUpper;
      x_[static_cast<std::size_t>(r)] = bound;
      // act - bound + sign * art = 0 with art >= 0
      const double sign = bound - act > 0 ? 1.0 : -1.0;
      cols_.push_back({{i, sign}});
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      x_.push_back(std::abs(bound - act));
      status_.push_back(Basic);
      basis_[static_cast<std::size_t>(i)] = static_cast<int>(cols_.size()) - 1;
    }
    first_art_ = total;
    n_art_ = static_cast<int>(cols_.size()) - total;
    refactor();
  }

  void refactor() {
    std::vector<const SparseVec*> bcols(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      bcols[static_cast<std::size_t>(i)] = &cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
    }
    if (!factor_.factor(m_, bcols)) {
      fail(ErrorKind::Numerical, "simplex basis became singular");
    }
  }

  void recompute_primal() {
    refactor();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      if (status_[static_cast<std::size_t>(j)] == Basic) {
        continue;
      }
      const double v = x_[static_cast<std::size_t>(j)];
      if (v == 0.0) {
        continue;
      }
      for (const auto& [i, a] : cols_[static_cast<std::size_t>(j)]) {
        rhs[i] -= a * v;
      }
    }
    factor_.ftran(rhs);
    for (int i = 0; i < m_; ++i) {
      x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = rhs[i];
    }
  }

  LpStatus iterate(const std::vector<double>& cost) {
    const long degenerate_limit = 10L * std::max(m_, 1);
    long degenerate_run = 0;
    const int total = static_cast<int>(cols_.size());
    Eigen::VectorXd duals(m_);
    Eigen::VectorXd alpha(m_);

    while (true) {
      if (pivots_ >= opt_.max_pivots) {
        fail(ErrorKind::Numerical, "simplex iteration cap reached");
      }
      const bool bland = degenerate_run >= degenerate_limit;

      for (int i = 0; i < m_; ++i) {
        duals[i] = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
      }
      factor_.btran(duals);

      int entering = -1;
      double best_score = 0.0;
      double entering_dj = 0.0;
      for (int j = 0; j < total; ++j) {
        const auto st = status_[static_cast<std::size_t>(j)];
        if (st == Basic || lower_[static_cast<std::size_t>(j)] == upper_[static_cast<std::size_t>(j)]) {
          continue;
        }
        double dj = cost[static_cast<std::size_t>(j)];
        for (const auto& [i, a] : cols_[static_cast<std::size_t>(j)]) {
          dj -= duals[i] * a;
        }
        const bool eligible = (st == AtLower && dj < -opt_.optimality_tol) ||
                              (st == AtUpper && dj > opt_.optimality_tol);
        if (!eligible) {
          continue;
        }
        if (bland) {
          entering = j;
          entering_dj = dj;
          break;
        }
        if (std::abs(dj) > best_score) {
          best_score = std::abs(dj);
          entering = j;
          entering_dj = dj;
        }
      }
      if (entering < 0) {
        return LpStatus::Optimal;
      }

      alpha.setZero();
      for (const auto& [i, a] : cols_[static_cast<std::size_t>(entering)]) {
        alpha[i] = a;
      }
      factor_.ftran(alpha);

      const double dir = entering_dj < 0 ? 1.0 : -1.0;
      const double span = upper_[static_cast<std::size_t>(entering)] - lower_[static_cast<std::size_t>(entering)];
      double theta = span;
      int leave_row = -1;
      double leave_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double rate = -dir * alpha[i];
        if (std::abs(rate) <= opt_.pivot_tol) {
          continue;
        }
        const int b = basis_[static_cast<std::size_t>(i)];
        const double xb = x_[static_cast<std::size_t>(b)];
        double limit;
        if (rate < 0) {
          const double lo = lower_[static_cast<std::size_t>(b)];
          if (!std::isfinite(lo)) {
            continue;
          }
          limit = std::max(0.0, (xb - lo) / -rate);
        } else {
          const double hi = upper_[static_cast<std::size_t>(b)];
          if (!std::isfinite(hi)) {
            continue;
          }
          limit = std::max(0.0, (hi - xb) / rate);
        }
        bool take;
        if (leave_row < 0) {
          take = limit <= theta;
        } else if (limit < theta - 1e-12) {
          take = true;
        } else if (limit <= theta + 1e-12) {
          const int current = basis_[static_cast<std::size_t>(leave_row)];
          take = bland ? b < current : std::abs(alpha[i]) > std::abs(leave_pivot);
        } else {
          take = false;
        }
        if (take) {
          leave_row = i;
          leave_pivot = alpha[i];
          theta = limit;
        }
      }
      if (!std::isfinite(theta)) {
        return LpStatus::Unbounded;
      }

      ++pivots_;
      degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;

      for (int i = 0; i < m_; ++i) {
        if (alpha[i] != 0.0) {
          x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -= theta * dir * alpha[i];
        }
      }
      x_[static_cast<std::size_t>(entering)] += theta * dir;

      if (leave_row < 0) {
        // Bound flip: the entering variable crosses its whole range.
        status_[static_cast<std::size_t>(entering)] =
            status_[static_cast<std::size_t>(entering)] == AtLower ? AtUpper : AtLower;
        x_[static_cast<std::size_t>(entering)] =
            status_[static_cast<std::size_t>(entering)] == AtLower ? lower_[static_cast<std::size_t>(entering)]
                                                                   : upper_[static_cast<std::size_t>(entering)];
        continue;
      }

      const int leaving = basis_[static_cast<std::size_t>(leave_row)];
      const double rate = -dir * alpha[leave_row];
      if (rate < 0) {
        status_[static_cast<std::size_t>(leaving)] = AtLower;
        x_[static_cast<std::size_t>(leaving)] = lower_[static_cast<std::size_t>(leaving)];
      } else {
        status_[static_cast<std::size_t>(leaving)] = AtUpper;
        x_[static_cast<std::size_t>(leaving)] = upper_[static_cast<std::size_t>(leaving)];
      }
      basis_[static_cast<std::size_t>(leave_row)] = entering;
      status_[static_cast<std::size_t>(entering)] = Basic;

      if (static_cast<int>(factor_.eta_count()) + 1 >= opt_.refactor_interval) {
        recompute_primal();
      } else {
        factor_.push_eta(leave_row, alpha);
      }
    }
  }

  const LpModel& model_;
  SimplexOptions opt_;
  int n_ = 0;
  int m_ = 0;
  int first_art_ = 0;
  int n_art_ = 0;
  double rhs_scale_ = 1.0;
  long pivots_ = 0;
  std::vector<SparseVec> cols_;
  std::vector<double> lower_, upper_, objective_, x_;
  std::vector<VarStatus> status_;
  std::vector<int> basis_;
  BasisFactor factor_;
};

} // namespace detail

/// Solves the model to a primal-optimal basic solution, or reports
/// infeasible / unbounded. Throws Error{Numerical} on iteration cap or a
/// singular basis. Deterministic for a given model.
inline LpSolution solve_lp(const LpModel& model, const SimplexOptions& opt = {}) {
  if (auto v = validate_model(model); !v.empty()) {
    fail(ErrorKind::Parameter, "malformed LP model: " + v.front());
  }
  if (model.n_rows() == 0) {
    // Bounds only: each variable sits at the bound its cost prefers.
    LpSolution sol;
    sol.values.resize(static_cast<std::size_t>(model.n_vars()));
    std::vector<double> c(static_cast<std::size_t>(model.n_vars()), 0.0);
    for (const auto& t : model.objective) {
      c[static_cast<std::size_t>(t.var)] += t.coef;
    }
    for (int j = 0; j < model.n_vars(); ++j) {
      const auto& v = model.vars[static_cast<std::size_t>(j)];
      if (c[static_cast<std::size_t>(j)] < 0) {
        if (!std::isfinite(v.upper)) {
          sol.status = LpStatus::Unbounded;
          return sol;
        }
        sol.values[static_cast<std::size_t>(j)] = v.upper;
      } else {
        sol.values[static_cast<std::size_t>(j)] = v.lower;
      }
    }
    sol.status = LpStatus::Optimal;
    sol.objective = objective_value(model, sol.values);
    return sol;
  }
  detail::BoundedSimplex simplex(model, opt);
  return simplex.run();
}

} // namespace rkm

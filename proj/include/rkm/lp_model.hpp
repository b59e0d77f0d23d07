#pragma once

// Linear programs in inequality form: minimize c.x subject to sparse rows
// (<=, =, >=) and variable bounds lower <= x <= upper, lower finite.

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rkm/error.hpp"

namespace rkm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Le, Eq, Ge };

struct LpTerm {
  int var = 0;
  double coef = 0.0;
};

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  Sense sense = Sense::Le;
  double rhs = 0.0;
};

struct LpModel {
  std::vector<LpVariable> vars;
  std::vector<LpRow> rows;
  std::vector<LpTerm> objective; // minimized

  int add_variable(std::string name, double lower, double upper) {
    vars.push_back({std::move(name), lower, upper});
    return static_cast<int>(vars.size()) - 1;
  }

  int add_row(std::string name, std::vector<LpTerm> terms, Sense sense, double rhs) {
    rows.push_back({std::move(name), std::move(terms), sense, rhs});
    return static_cast<int>(rows.size()) - 1;
  }

  int n_vars() const noexcept { return static_cast<int>(vars.size()); }
  int n_rows() const noexcept { return static_cast<int>(rows.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) noexcept {
  switch (s) {
  case LpStatus::Optimal:
    return "optimal";
  case LpStatus::Infeasible:
    return "infeasible";
  default:
    return "unbounded";
  }
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> values;
  long iterations = 0;
};

inline std::vector<std::string> validate_model(const LpModel& model) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    const auto& v = model.vars[j];
    if (!std::isfinite(v.lower)) {
      out.push_back("variable " + v.name + " has a non-finite lower bound");
    }
    if (std::isnan(v.upper) || v.upper < v.lower) {
      out.push_back("variable " + v.name + " has an empty bound interval");
    }
  }
  auto check_terms = [&](const std::vector<LpTerm>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= model.n_vars()) {
        out.push_back(where + " references variable index " + std::to_string(t.var));
      } else if (!std::isfinite(t.coef)) {
        out.push_back(where + " has a non-finite coefficient");
      }
    }
  };
  check_terms(model.objective, "objective");
  for (const auto& r : model.rows) {
    check_terms(r.terms, "row " + r.name);
    if (!std::isfinite(r.rhs)) {
      out.push_back("row " + r.name + " has a non-finite right-hand side");
    }
  }
  return out;
}

inline double row_activity(const LpRow& row, const std::vector<double>& x) {
  double a = 0.0;
  for (const auto& t : row.terms) {
    a += t.coef * x[static_cast<std::size_t>(t.var)];
  }
  return a;
}

inline double objective_value(const LpModel& model, const std::vector<double>& x) {
  double v = 0.0;
  for (const auto& t : model.objective) {
    v += t.coef * x[static_cast<std::size_t>(t.var)];
  }
  return v;
}

/// Independent feasibility re-check of a primal point. Empty means feasible.
inline std::vector<std::string> check_feasibility(const LpModel& model, const std::vector<double>& x,
                                                  double tol = 1e-7) {
  std::vector<std::string> out;
  if (x.size() != model.vars.size()) {
    out.push_back("value vector has wrong length");
    return out;
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < model.vars[j].lower || x[j] > model.vars[j].upper) {
      out.push_back("variable " + model.vars[j].name + " outside its bounds");
    }
  }
  for (const auto& r : model.rows) {
    const double a = row_activity(r, x);
    const double scale = 1.0 + std::abs(r.rhs);
    const bool ok = (r.sense == Sense::Le && a <= r.rhs + tol * scale) ||
                    (r.sense == Sense::Ge && a >= r.rhs - tol * scale) ||
                    (r.sense == Sense::Eq && std::abs(a - r.rhs) <= tol * scale);
    if (!ok) {
      std::ostringstream msg;
      msg << "row " << r.name << " violated: activity " << a << " vs rhs " << r.rhs;
      out.push_back(msg.str());
    }
  }
  return out;
}

namespace detail {

inline void write_lp_terms(std::ostream& os, const LpModel& model, const std::vector<LpTerm>& terms) {
  if (terms.empty()) {
    os << " 0 " << (model.vars.empty() ? std::string("x") : model.vars.front().name);
    return;
  }
  for (const auto& t : terms) {
    os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' '
       << model.vars[static_cast<std::size_t>(t.var)].name;
  }
}

} // namespace detail

/// CPLEX-style LP text: objective, rows in build order, then bounds.
inline void write_lp_format(std::ostream& os, const LpModel& model) {
  const auto old_precision = os.precision(17);
  os << "\\ format_version 1\n";
  os << "Minimize\n obj:";
  detail::write_lp_terms(os, model, model.objective);
  os << "\nSubject To\n";
  for (const auto& r : model.rows) {
    os << ' ' << r.name << ':';
    detail::write_lp_terms(os, model, r.terms);
    os << (r.sense == Sense::Le ? " <= " : r.sense == Sense::Ge ? " >= " : " = ") << r.rhs << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : model.vars) {
    if (std::isinf(v.upper)) {
      os << ' ' << v.name << " >= " << v.lower << '\n';
    } else {
      os << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
    }
  }
  os << "End\n";
  os.precision(old_precision);
}

} // namespace rkm

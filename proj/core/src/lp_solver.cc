// Copyright 2026 The rbflp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rbflp/lp_solver.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace rbflp {

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kZeroTol = 1e-12;  // entries below this are dropped
constexpr double kOptimalityTol = 1e-9;
constexpr double kPrimalTol = 1e-9;  // internal bound tolerance

double Scaled(double tol, double magnitude) {
  return tol * std::max(1.0, std::abs(magnitude));
}

}  // namespace

// Column layout: [0, n) structural, [n, n+m) slacks, [n+m, n+2m) artificials.
// Slack and artificial of row i are both +e_i in the constraint matrix.
class SimplexEngine::Impl {
 public:
  explicit Impl(const LinearModel& model) : model_(model) {
    model.Validate();
    n_ = model.num_vars();
    m_ = model.num_rows();
    ncols_ = n_ + 2 * m_;
    rows_.resize(m_);
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const Row& r = model.row(i);
      // Merge duplicate indices.
      for (const Term& t : r.terms) {
        if (t.coef == 0.0) continue;
        auto it = std::find_if(rows_[i].begin(), rows_[i].end(),
                               [&](const Term& e) { return e.var == t.var; });
        if (it == rows_[i].end()) {
          rows_[i].push_back(t);
        } else {
          it->coef += t.coef;
        }
      }
      b_[i] = r.rhs;
    }
    ComputeScaling();
    lb_.assign(ncols_, 0.0);
    ub_.assign(ncols_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lb_[j] = model.var(j).lower / col_scale_[j];
      ub_[j] = model.var(j).upper / col_scale_[j];
    }
    for (int i = 0; i < m_; ++i) {
      switch (model.row(i).sense) {
        case RowSense::kLessEqual:
          lb_[n_ + i] = 0.0;
          ub_[n_ + i] = kInf;
          break;
        case RowSense::kGreaterEqual:
          lb_[n_ + i] = -kInf;
          ub_[n_ + i] = 0.0;
          break;
        case RowSense::kEqual:
          lb_[n_ + i] = 0.0;
          ub_[n_ + i] = 0.0;
          break;
      }
    }
    phase2_cost_.assign(ncols_, 0.0);
    for (int j = 0; j < n_; ++j) {
      phase2_cost_[j] = model.var(j).cost * col_scale_[j];
    }
    at_upper_.assign(ncols_, 0);
    pos_.assign(ncols_, -1);
    basis_.assign(m_, -1);
    beta_.assign(m_, 0.0);
    max_abs_b_ = 0.0;
    for (double v : b_) max_abs_b_ = std::max(max_abs_b_, std::abs(v));
  }

  void SetBounds(int j, double lower, double upper) {
    if (j < 0 || j >= n_) throw std::out_of_range("SetBounds: bad column");
    if (lower > upper) throw std::invalid_argument("SetBounds: lower > upper");
    if (!have_tableau_ || pos_[j] >= 0) {
      lb_[j] = lower / col_scale_[j];
      ub_[j] = upper / col_scale_[j];
      return;
    }
    const double before = NonbasicValue(j);
    lb_[j] = lower / col_scale_[j];
    ub_[j] = upper / col_scale_[j];
    NormalizeStatus(j);
    ShiftNonbasic(j, NonbasicValue(j) - before);
  }

  double lower(int j) const { return lb_[j] * col_scale_[j]; }
  double upper(int j) const { return ub_[j] * col_scale_[j]; }

  LpSolution Solve() {
    LpSolution sol;
    LpStatus status = LpStatus::kOptimal;
    bool solved = false;
    if (have_tableau_) {
      // Warm start: restore dual feasibility by bound flips where possible,
      // then dual simplex.
      cost_ = phase2_cost_;
      ComputeReducedCosts();
      if (MakeDualFeasible()) {
        // A dual ray read off an ill-conditioned tableau is not a proof;
        // infeasibility is always confirmed by phase 1 from scratch.
        if (DualSimplex() == kDone) {
          status = PrimalSimplex(/*phase=*/2);
          solved = status != LpStatus::kInfeasible;
        }
      }
    }
    if (!solved) {
      status = SolveFromScratch();
      // A phase 1 tableau (artificials in the basis) is no warm start.
      if (status != LpStatus::kOptimal) have_tableau_ = false;
    }

    if (status == LpStatus::kOptimal) {
      status = Polish();
    }
    sol.status = status;
    sol.iterations = iterations_;
    if (status == LpStatus::kOptimal) {
      Extract(sol);
      last_basis_ = std::make_shared<Basis>(Basis{basis_, at_upper_});
    } else {
      last_basis_.reset();
    }
    return sol;
  }

  std::shared_ptr<const Basis> basis() const { return last_basis_; }

  void LoadBasis(const Basis& basis) {
    if (static_cast<int>(basis.basic.size()) != m_ ||
        static_cast<int>(basis.at_upper.size()) != ncols_) {
      throw std::invalid_argument("LoadBasis: basis does not fit the model");
    }
    basis_ = basis.basic;
    at_upper_ = basis.at_upper;
    // Artificials stay fixed at zero outside phase 1.
    for (int k = n_ + m_; k < ncols_; ++k) {
      lb_[k] = 0.0;
      ub_[k] = 0.0;
    }
    cost_ = phase2_cost_;
    have_tableau_ = Reinvert();
  }

 private:
  enum DualOutcome { kDone, kPrimalInfeasible, kGaveUp };

  // --- scaling -------------------------------------------------------------

  // Geometric-mean row and column scaling rounded to powers of two, applied
  // in place to rows_ and b_. Internally x_j = x'_j * col_scale_[j] and row i
  // is multiplied by row_scale_[i].
  void ComputeScaling() {
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(n_, 1.0);
    std::vector<std::vector<std::pair<int, double>>> cols(n_);
    for (int i = 0; i < m_; ++i) {
      for (const Term& t : rows_[i]) cols[t.var].push_back({i, t.coef});
    }
    auto mean = [](double lo, double hi) {
      return lo > hi ? 1.0 : 1.0 / std::sqrt(lo * hi);
    };
    for (int pass = 0; pass < 4; ++pass) {
      for (int i = 0; i < m_; ++i) {
        double lo = kInf, hi = 0.0;
        for (const Term& t : rows_[i]) {
          const double a = std::abs(t.coef) * col_scale_[t.var];
          lo = std::min(lo, a);
          hi = std::max(hi, a);
        }
        row_scale_[i] = mean(lo, hi);
      }
      for (int j = 0; j < n_; ++j) {
        double lo = kInf, hi = 0.0;
        for (const auto& [i, coef] : cols[j]) {
          const double a = std::abs(coef) * row_scale_[i];
          lo = std::min(lo, a);
          hi = std::max(hi, a);
        }
        col_scale_[j] = mean(lo, hi);
      }
    }
    for (double& r : row_scale_) r = std::exp2(std::round(std::log2(r)));
    for (double& c : col_scale_) c = std::exp2(std::round(std::log2(c)));
    for (int i = 0; i < m_; ++i) {
      for (Term& t : rows_[i]) t.coef *= row_scale_[i] * col_scale_[t.var];
      b_[i] *= row_scale_[i];
    }
  }

  // --- value bookkeeping -------------------------------------------------

  void NormalizeStatus(int j) {
    if (at_upper_[j] && ub_[j] == kInf) at_upper_[j] = 0;
    if (!at_upper_[j] && lb_[j] == -kInf && ub_[j] != kInf) at_upper_[j] = 1;
  }

  double NonbasicValue(int j) const {
    if (at_upper_[j]) return ub_[j];
    if (lb_[j] != -kInf) return lb_[j];
    if (ub_[j] != kInf) return ub_[j];
    return 0.0;
  }

  // Nonbasic column j moved by delta: basic values absorb -T_col * delta.
  void ShiftNonbasic(int j, double delta) {
    if (delta == 0.0) return;
    for (int i = 0; i < m_; ++i) {
      const double t = T(i, j);
      if (t != 0.0) beta_[i] -= t * delta;
    }
  }

  double& T(int i, int j) { return tab_[static_cast<size_t>(i) * ncols_ + j]; }
  double T(int i, int j) const {
    return tab_[static_cast<size_t>(i) * ncols_ + j];
  }

  bool IsFixed(int j) const { return lb_[j] == ub_[j]; }

  // --- tableau construction ------------------------------------------------

  // Slack basis plus artificials for rows the slack cannot absorb.
  LpStatus SolveFromScratch() {
    iterations_ = 0;
    tab_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
    std::fill(pos_.begin(), pos_.end(), -1);
    for (int j = 0; j < n_; ++j) {
      at_upper_[j] = 0;
      NormalizeStatus(j);
    }
    cost_.assign(ncols_, 0.0);
    bool need_phase1 = false;
    for (int i = 0; i < m_; ++i) {
      double resid = b_[i];
      for (const Term& t : rows_[i]) resid -= t.coef * NonbasicValue(t.var);
      for (const Term& t : rows_[i]) T(i, t.var) = t.coef;
      T(i, n_ + i) = 1.0;
      T(i, n_ + m_ + i) = 1.0;
      const int slack = n_ + i;
      const int art = n_ + m_ + i;
      if (resid >= lb_[slack] && resid <= ub_[slack]) {
        basis_[i] = slack;
        beta_[i] = resid;
        lb_[art] = 0.0;
        ub_[art] = 0.0;
        at_upper_[art] = 0;
      } else {
        // Slack at the violated bound (always 0 for these senses).
        const double v = resid < lb_[slack] ? lb_[slack] : ub_[slack];
        at_upper_[slack] = resid > ub_[slack] && ub_[slack] != kInf ? 1 : 0;
        if (IsFixed(slack)) at_upper_[slack] = 0;
        NormalizeStatus(slack);
        const double a = resid - v;
        basis_[i] = art;
        beta_[i] = a;
        if (a > 0) {
          lb_[art] = 0.0;
          ub_[art] = kInf;
          cost_[art] = 1.0;
        } else {
          lb_[art] = -kInf;
          ub_[art] = 0.0;
          cost_[art] = -1.0;
        }
        need_phase1 = true;
      }
      pos_[basis_[i]] = i;
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ + m_) continue;
      const int art = n_ + m_ + i;
      at_upper_[art] = 0;
    }
    have_tableau_ = true;
    degenerate_run_ = 0;
    pivots_since_refactor_ = 0;

    if (need_phase1) {
      ComputeReducedCosts();
      const LpStatus p1 = PrimalSimplex(/*phase=*/1);
      (void)p1;  // phase 1 is bounded below by zero
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] >= n_ + m_) infeas += std::abs(beta_[i]);
      }
      if (infeas > kFeasibilityTol * std::max(1.0, max_abs_b_)) {
        return LpStatus::kInfeasible;
      }
      DriveOutArtificials();
    }
    for (int k = n_ + m_; k < ncols_; ++k) {
      lb_[k] = 0.0;
      ub_[k] = 0.0;
      if (pos_[k] < 0) at_upper_[k] = 0;
    }
    cost_ = phase2_cost_;
    ComputeReducedCosts();
    return PrimalSimplex(/*phase=*/2);
  }

  void DriveOutArtificials() {
    for (int r = 0; r < m_; ++r) {
      const int art = basis_[r];
      if (art < n_ + m_) continue;
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < n_ + m_; ++j) {
        if (pos_[j] >= 0) continue;
        const double a = std::abs(T(r, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row; artificial stays at zero
      // Degenerate pivot: entering keeps its nonbasic value.
      const double entering_value = NonbasicValue(best);
      const double delta = beta_[r] / T(r, best);
      for (int i = 0; i < m_; ++i) {
        if (i != r) beta_[i] -= T(i, best) * delta;
      }
      beta_[r] = entering_value + delta;
      at_upper_[art] = 0;
      Pivot(r, best);
    }
  }

  void ComputeReducedCosts() {
    d_.assign(cost_.begin(), cost_.end());
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &tab_[static_cast<size_t>(i) * ncols_];
      for (int j = 0; j < ncols_; ++j) d_[j] -= cb * row[j];
    }
    for (int i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
  }

  // Rebuilds the tableau from basis_ and at_upper_ using the original data.
  bool Reinvert() {
    std::vector<double> binv(static_cast<size_t>(m_) * m_, 0.0);
    std::vector<double> bmat(static_cast<size_t>(m_) * m_, 0.0);
    // Column-wise fill of B.
    std::vector<std::vector<Term>> cols(n_);
    for (int i = 0; i < m_; ++i) {
      for (const Term& t : rows_[i]) cols[t.var].push_back({i, t.coef});
    }
    for (int k = 0; k < m_; ++k) {
      const int j = basis_[k];
      if (j < 0) return false;
      if (j < n_) {
        for (const Term& t : cols[j]) {
          bmat[static_cast<size_t>(t.var) * m_ + k] = t.coef;
        }
      } else {
        bmat[static_cast<size_t>((j - n_) % m_) * m_ + k] = 1.0;
      }
    }
    for (int i = 0; i < m_; ++i) binv[static_cast<size_t>(i) * m_ + i] = 1.0;
    // Gauss-Jordan with partial pivoting on [B | I].
    for (int c = 0; c < m_; ++c) {
      int piv = -1;
      double best = 1e-11;
      for (int r = c; r < m_; ++r) {
        const double a = std::abs(bmat[static_cast<size_t>(r) * m_ + c]);
        if (a > best) {
          best = a;
          piv = r;
        }
      }
      if (piv < 0) return false;
      if (piv != c) {
        for (int k = 0; k < m_; ++k) {
          std::swap(bmat[static_cast<size_t>(piv) * m_ + k],
                    bmat[static_cast<size_t>(c) * m_ + k]);
          std::swap(binv[static_cast<size_t>(piv) * m_ + k],
                    binv[static_cast<size_t>(c) * m_ + k]);
        }
      }
      const double p = bmat[static_cast<size_t>(c) * m_ + c];
      for (int k = 0; k < m_; ++k) {
        bmat[static_cast<size_t>(c) * m_ + k] /= p;
        binv[static_cast<size_t>(c) * m_ + k] /= p;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = bmat[static_cast<size_t>(r) * m_ + c];
        if (f == 0.0) continue;
        double* br = &bmat[static_cast<size_t>(r) * m_];
        double* bc = &bmat[static_cast<size_t>(c) * m_];
        double* ir = &binv[static_cast<size_t>(r) * m_];
        double* ic = &binv[static_cast<size_t>(c) * m_];
        for (int k = 0; k < m_; ++k) {
          br[k] -= f * bc[k];
          ir[k] -= f * ic[k];
        }
      }
    }
    // Row c of B^-1 now corresponds to basis position c.
    tab_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
    std::fill(pos_.begin(), pos_.end(), -1);
    for (int i = 0; i < m_; ++i) pos_[basis_[i]] = i;
    for (int j = 0; j < ncols_; ++j) {
      if (pos_[j] < 0) NormalizeStatus(j);
    }
    std::vector<double> rhs(b_);
    for (int k = 0; k < m_; ++k) {
      for (const Term& t : rows_[k]) {
        if (pos_[t.var] < 0) rhs[k] -= t.coef * NonbasicValue(t.var);
      }
      if (pos_[n_ + k] < 0) rhs[k] -= NonbasicValue(n_ + k);
      if (pos_[n_ + m_ + k] < 0) rhs[k] -= NonbasicValue(n_ + m_ + k);
    }
    for (int i = 0; i < m_; ++i) {
      double* trow = &tab_[static_cast<size_t>(i) * ncols_];
      const double* irow = &binv[static_cast<size_t>(i) * m_];
      double value = 0.0;
      for (int k = 0; k < m_; ++k) {
        const double w = irow[k];
        if (w == 0.0) continue;
        for (const Term& t : rows_[k]) trow[t.var] += w * t.coef;
        trow[n_ + k] += w;
        trow[n_ + m_ + k] += w;
        value += w * rhs[k];
      }
      for (int j = 0; j < ncols_; ++j) {
        if (std::abs(trow[j]) < kZeroTol) trow[j] = 0.0;
      }
      beta_[i] = value;
    }
    for (int i = 0; i < m_; ++i) {
      double* trow = &tab_[static_cast<size_t>(i) * ncols_];
      for (int k = 0; k < m_; ++k) {
        if (k != i) trow[basis_[k]] = 0.0;
      }
      trow[basis_[i]] = 1.0;
    }
    ComputeReducedCosts();
    pivots_since_refactor_ = 0;
    return true;
  }

  // --- pivoting ----------------------------------------------------------

  void Pivot(int r, int q) {
    double* prow = &tab_[static_cast<size_t>(r) * ncols_];
    const double p = prow[q];
    nz_.clear();
    for (int k = 0; k < ncols_; ++k) {
      if (prow[k] == 0.0) continue;
      prow[k] /= p;
      if (std::abs(prow[k]) < kZeroTol) {
        prow[k] = 0.0;
      } else {
        nz_.push_back(k);
      }
    }
    prow[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[static_cast<size_t>(i) * ncols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int k : nz_) {
        double v = row[k] - f * prow[k];
        if (std::abs(v) < kZeroTol) v = 0.0;
        row[k] = v;
      }
      row[q] = 0.0;
    }
    const double fd = d_[q];
    if (fd != 0.0) {
      for (int k : nz_) d_[k] -= fd * prow[k];
    }
    d_[q] = 0.0;
    const int leaving = basis_[r];
    pos_[leaving] = -1;
    basis_[r] = q;
    pos_[q] = r;
    ++iterations_;
    ++pivots_since_refactor_;
  }

  int IterationLimit() const { return 50 * (m_ + n_) + 20000; }

  // --- primal simplex ----------------------------------------------------

  LpStatus PrimalSimplex(int phase) {
    const int bland_threshold = 5 * (m_ + n_);
    const int art_begin = n_ + m_;
    int guard = 0;
    while (true) {
      if (++guard > IterationLimit()) {
        throw NumericalFailure("primal simplex iteration limit reached");
      }
      if (pivots_since_refactor_ > std::max(200, m_)) {
        if (!Reinvert()) throw NumericalFailure("singular basis");
      }
      const bool bland = degenerate_run_ >= bland_threshold;
      // Pricing.
      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < ncols_; ++j) {
        if (pos_[j] >= 0 || IsFixed(j)) continue;
        if (phase == 2 && j >= art_begin) continue;
        const double dj = d_[j];
        const double tol = kOptimalityTol * (1.0 + std::abs(cost_[j]));
        int cand_dir = 0;
        const bool free_var = lb_[j] == -kInf && ub_[j] == kInf;
        if ((!at_upper_[j] || free_var) && dj < -tol) {
          cand_dir = +1;
        } else if ((at_upper_[j] || free_var) && dj > tol) {
          cand_dir = -1;
        }
        if (cand_dir == 0) continue;
        if (bland) {
          q = j;
          dir = cand_dir;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
          dir = cand_dir;
        }
      }
      if (q < 0) return LpStatus::kOptimal;

      // Ratio test.
      int r = -1;
      double theta = kInf;
      double r_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double t = T(i, q);
        if (std::abs(t) <= kPivotTol) continue;
        const double rate = -dir * t;  // d(basic_i)/d(theta)
        const int bi = basis_[i];
        double limit;
        if (rate < 0) {
          if (lb_[bi] == -kInf) continue;
          limit = (beta_[i] - lb_[bi]) / -rate;
        } else {
          if (ub_[bi] == kInf) continue;
          limit = (ub_[bi] - beta_[i]) / rate;
        }
        limit = std::max(limit, 0.0);
        bool take = false;
        if (limit < theta - 1e-12) {
          take = true;
        } else if (limit <= theta + 1e-12) {
          take = bland ? bi < basis_[r] : std::abs(t) > std::abs(r_pivot);
        }
        if (take) {
          theta = limit;
          r = i;
          r_pivot = t;
        }
      }
      const double range = ub_[q] - lb_[q];
      const bool flip = range < kInf && range <= theta;
      if (r < 0 && !flip) {
        if (phase == 1) throw NumericalFailure("phase 1 reported unbounded");
        return LpStatus::kUnbounded;
      }
      if (flip) theta = range;
      degenerate_run_ = theta <= 1e-12 ? degenerate_run_ + 1 : 0;

      const double step = dir * theta;
      const double entering_value = NonbasicValue(q) + step;
      for (int i = 0; i < m_; ++i) {
        const double t = T(i, q);
        if (t != 0.0) beta_[i] -= t * step;
      }
      if (flip) {
        at_upper_[q] = dir > 0 ? 1 : 0;
        continue;
      }
      const int leaving = basis_[r];
      const double rate = -dir * r_pivot;
      at_upper_[leaving] = rate > 0 ? 1 : 0;
      if (IsFixed(leaving)) at_upper_[leaving] = 0;
      NormalizeStatus(leaving);
      beta_[r] = entering_value;
      at_upper_[q] = 0;
      Pivot(r, q);
    }
  }

  // --- dual simplex ------------------------------------------------------

  bool MakeDualFeasible() {
    for (int j = 0; j < ncols_; ++j) {
      if (pos_[j] >= 0 || IsFixed(j)) continue;
      const double tol = kOptimalityTol * (1.0 + std::abs(cost_[j]));
      const double dj = d_[j];
      const bool free_var = lb_[j] == -kInf && ub_[j] == kInf;
      if (free_var) {
        if (std::abs(dj) > tol) return false;
        continue;
      }
      if (!at_upper_[j] && dj < -tol) {
        if (ub_[j] == kInf) return false;
        const double before = NonbasicValue(j);
        at_upper_[j] = 1;
        ShiftNonbasic(j, NonbasicValue(j) - before);
      } else if (at_upper_[j] && dj > tol) {
        if (lb_[j] == -kInf) return false;
        const double before = NonbasicValue(j);
        at_upper_[j] = 0;
        ShiftNonbasic(j, NonbasicValue(j) - before);
      }
    }
    return true;
  }

  DualOutcome DualSimplex() {
    // Rows whose violation is within the feasibility tolerance but admit no
    // entering column are rounding noise; Polish() re-checks them.
    std::vector<char> skip(m_, 0);
    int guard = 0;
    while (true) {
      if (++guard > IterationLimit()) return kGaveUp;
      if (pivots_since_refactor_ > std::max(200, m_)) {
        if (!Reinvert()) return kGaveUp;
        if (!MakeDualFeasible()) return kGaveUp;
      }
      // Leaving row: largest bound violation.
      int r = -1;
      double worst = 0.0;
      bool below = false;
      for (int i = 0; i < m_; ++i) {
        if (skip[i]) continue;
        const int bi = basis_[i];
        const double v = beta_[i];
        if (lb_[bi] != -kInf && v < lb_[bi] - Scaled(kPrimalTol, lb_[bi])) {
          if (lb_[bi] - v > worst) {
            worst = lb_[bi] - v;
            r = i;
            below = true;
          }
        } else if (ub_[bi] != kInf &&
                   v > ub_[bi] + Scaled(kPrimalTol, ub_[bi])) {
          if (v - ub_[bi] > worst) {
            worst = v - ub_[bi];
            r = i;
            below = false;
          }
        }
      }
      if (r < 0) return kDone;

      // Entering column: dual ratio test.
      int q = -1;
      double best_ratio = kInf;
      double best_pivot = 0.0;
      const double* row = &tab_[static_cast<size_t>(r) * ncols_];
      for (int j = 0; j < ncols_; ++j) {
        if (pos_[j] >= 0 || IsFixed(j)) continue;
        const double t = row[j];
        if (std::abs(t) <= kPivotTol) continue;
        const bool free_var = lb_[j] == -kInf && ub_[j] == kInf;
        // x_B(r) moves by -t * delta_j; we need it to rise if below.
        bool ok;
        if (free_var) {
          ok = true;
        } else if (!at_upper_[j]) {  // delta_j >= 0
          ok = below ? t < 0 : t > 0;
        } else {  // delta_j <= 0
          ok = below ? t > 0 : t < 0;
        }
        if (!ok) continue;
        const double ratio = std::abs(d_[j]) / std::abs(t);
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 &&
             std::abs(t) > std::abs(best_pivot))) {
          best_ratio = ratio;
          q = j;
          best_pivot = t;
        }
      }
      if (q < 0) {
        const int bi = basis_[r];
        if (worst > Scaled(kFeasibilityTol, below ? lb_[bi] : ub_[bi])) {
          return kPrimalInfeasible;
        }
        skip[r] = 1;
        continue;
      }

      const int leaving = basis_[r];
      const double target = below ? lb_[leaving] : ub_[leaving];
      const double delta = (beta_[r] - target) / best_pivot;
      const double entering_value = NonbasicValue(q) + delta;
      for (int i = 0; i < m_; ++i) {
        const double t = T(i, q);
        if (t != 0.0) beta_[i] -= t * delta;
      }
      at_upper_[leaving] = below ? 0 : 1;
      if (IsFixed(leaving)) at_upper_[leaving] = 0;
      NormalizeStatus(leaving);
      beta_[r] = entering_value;
      at_upper_[q] = 0;
      Pivot(r, q);
    }
  }

  // --- verification --------------------------------------------------------

  std::vector<double> CurrentPrimal() const {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j) {
      x[j] = pos_[j] >= 0 ? beta_[pos_[j]] : NonbasicValue(j);
    }
    return x;
  }

  bool ResidualsAcceptable() const {
    const std::vector<double> x = CurrentPrimal();
    for (int j = 0; j < n_; ++j) {
      const double c = col_scale_[j];
      const double v = x[j] * c;
      if (v < lb_[j] * c - Scaled(kFeasibilityTol * 0.1, lb_[j] * c) ||
          v > ub_[j] * c + Scaled(kFeasibilityTol * 0.1, ub_[j] * c)) {
        return false;
      }
    }
    for (int i = 0; i < m_; ++i) {
      double act = 0.0;
      double mag = std::abs(b_[i]);
      for (const Term& t : rows_[i]) {
        act += t.coef * x[t.var];
        mag = std::max(mag, std::abs(t.coef * x[t.var]));
      }
      const double slack = b_[i] - act;
      const int s = n_ + i;
      const double tol = Scaled(kFeasibilityTol * 0.1, mag);
      if (slack < lb_[s] - tol || slack > ub_[s] + tol) return false;
    }
    return true;
  }

  // Accepts the basis when the primal residuals hold against the original
  // rows; otherwise refactorizes and re-optimizes.
  LpStatus Polish() {
    if (ResidualsAcceptable()) return LpStatus::kOptimal;
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (!Reinvert()) break;
      if (MakeDualFeasible() && DualSimplex() != kDone) break;
      if (PrimalSimplex(2) != LpStatus::kOptimal) break;
      if (ResidualsAcceptable()) return LpStatus::kOptimal;
    }
    const LpStatus s = SolveFromScratch();
    if (s != LpStatus::kOptimal) return s;
    if (ResidualsAcceptable()) return LpStatus::kOptimal;
    if (Reinvert() && PrimalSimplex(2) == LpStatus::kOptimal &&
        ResidualsAcceptable()) {
      return LpStatus::kOptimal;
    }
    throw NumericalFailure("LP residuals exceed tolerance after refactoring");
  }

  void Extract(LpSolution& sol) const {
    sol.primal = CurrentPrimal();
    for (int j = 0; j < n_; ++j) {
      // Basic values carry roundoff; a fixed variable must read its bound.
      const double v = std::clamp(sol.primal[j], lb_[j], ub_[j]);
      sol.primal[j] = v * col_scale_[j];
    }
    sol.objective = model_.Objective(sol.primal);
    sol.dual.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double sensitivity = -d_[n_ + i] * row_scale_[i];
      const RowSense sense = model_.row(i).sense;
      sol.dual[i] = sense == RowSense::kLessEqual ? -sensitivity : sensitivity;
      if (sol.dual[i] == 0.0) sol.dual[i] = 0.0;  // no negative zeros
    }
    sol.reduced_cost.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      sol.reduced_cost[j] = pos_[j] >= 0 ? 0.0 : d_[j] / col_scale_[j];
    }
  }

  const LinearModel& model_;
  int n_ = 0;
  int m_ = 0;
  int ncols_ = 0;
  std::vector<std::vector<Term>> rows_;
  std::vector<double> b_;
  double max_abs_b_ = 0.0;
  std::vector<double> row_scale_;
  std::vector<double> col_scale_;
  std::vector<double> lb_, ub_;
  std::vector<double> phase2_cost_;
  std::vector<double> cost_;
  std::vector<double> tab_;
  std::vector<double> beta_;
  std::vector<double> d_;
  std::vector<int> basis_;
  std::vector<int> pos_;
  std::vector<signed char> at_upper_;
  std::vector<int> nz_;
  bool have_tableau_ = false;
  int iterations_ = 0;
  int degenerate_run_ = 0;
  int pivots_since_refactor_ = 0;
  std::shared_ptr<Basis> last_basis_;
};

SimplexEngine::SimplexEngine(const LinearModel& model)
    : impl_(std::make_unique<Impl>(model)) {}
SimplexEngine::~SimplexEngine() = default;
SimplexEngine::SimplexEngine(SimplexEngine&&) noexcept = default;
SimplexEngine& SimplexEngine::operator=(SimplexEngine&&) noexcept = default;

void SimplexEngine::SetBounds(int var, double lower, double upper) {
  impl_->SetBounds(var, lower, upper);
}
double SimplexEngine::lower(int var) const { return impl_->lower(var); }
double SimplexEngine::upper(int var) const { return impl_->upper(var); }
LpSolution SimplexEngine::Solve() { return impl_->Solve(); }
std::shared_ptr<const Basis> SimplexEngine::basis() const {
  return impl_->basis();
}
void SimplexEngine::LoadBasis(const Basis& basis) { impl_->LoadBasis(basis); }

LpSolution SolveLp(const LinearModel& model) {
  if (model.num_vars() < 1) {
    throw std::invalid_argument("SolveLp: model has no variables");
  }
  if (model.HasBinaries()) {
    throw std::invalid_argument("SolveLp: model has binary variables");
  }
  SimplexEngine engine(model);
  return engine.Solve();
}

KktResiduals CheckKktResiduals(const LinearModel& model,
                               const LpSolution& sol) {
  const int n = model.num_vars();
  const int m = model.num_rows();
  if (static_cast<int>(sol.primal.size()) != n ||
      static_cast<int>(sol.reduced_cost.size()) != n ||
      static_cast<int>(sol.dual.size()) != m) {
    throw std::invalid_argument("CheckKktResiduals: dimension mismatch");
  }
  KktResiduals res;
  const auto& x = sol.primal;

  std::vector<double> stationarity(n);
  for (int j = 0; j < n; ++j) stationarity[j] = model.var(j).cost;
  double dual_objective = model.objective_offset();

  for (int i = 0; i < m; ++i) {
    const Row& row = model.row(i);
    const double act = model.RowActivity(i, x);
    const double slack = row.rhs - act;
    double viol = 0.0;
    switch (row.sense) {
      case RowSense::kLessEqual:
        viol = std::max(0.0, -slack);
        break;
      case RowSense::kGreaterEqual:
        viol = std::max(0.0, slack);
        break;
      case RowSense::kEqual:
        viol = std::abs(slack);
        break;
    }
    res.primal = std::max(res.primal, viol);

    // Convert to sensitivity form: c = sum_i sens_i a_i + r.
    const double sens =
        row.sense == RowSense::kLessEqual ? -sol.dual[i] : sol.dual[i];
    if (row.sense != RowSense::kEqual) {
      res.dual = std::max(res.dual, std::max(0.0, -sol.dual[i]));
      res.complementarity =
          std::max(res.complementarity, std::abs(sol.dual[i] * slack));
    }
    for (const Term& t : row.terms) stationarity[t.var] -= sens * t.coef;
    dual_objective += sens * row.rhs;
  }

  for (int j = 0; j < n; ++j) {
    const Variable& v = model.var(j);
    res.primal = std::max(res.primal, std::max(0.0, v.lower - x[j]));
    res.primal = std::max(res.primal, std::max(0.0, x[j] - v.upper));
    const double r = sol.reduced_cost[j];
    res.dual = std::max(res.dual, std::abs(stationarity[j] - r));
    const double r_pos = std::max(0.0, r);
    const double r_neg = std::max(0.0, -r);
    if (v.lower == -kInf) {
      res.dual = std::max(res.dual, r_pos);
    } else {
      res.complementarity =
          std::max(res.complementarity, r_pos * std::abs(x[j] - v.lower));
      dual_objective += r_pos * v.lower;
    }
    if (v.upper == kInf) {
      res.dual = std::max(res.dual, r_neg);
    } else {
      res.complementarity =
          std::max(res.complementarity, r_neg * std::abs(v.upper - x[j]));
      dual_objective -= r_neg * v.upper;
    }
  }
  res.duality_gap = std::abs(model.Objective(x) - dual_objective);
  return res;
}

}  // namespace rbflp

// Copyright 2026 The deatool authors
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

#ifndef DEATOOL_LP_HPP
#define DEATOOL_LP_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace deatool::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, GreaterEq, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

class NumericalBreakdown : public std::runtime_error {
  public:
    explicit NumericalBreakdown(const std::string& what) : std::runtime_error(what) {}
};

/// Dense LP in the form
///   optimize c'x  s.t.  A x {<=,>=,=} b,  x >= 0.
template <typename Scalar = double>
struct Problem {
    Sense sense = Sense::Minimize;
    Eigen::VectorX<Scalar> objective;
    Eigen::MatrixX<Scalar> constraints;  // one row per constraint
    std::vector<Relation> relations;
    Eigen::VectorX<Scalar> rhs;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rhs.size()); }

    void add_constraint(const Eigen::VectorX<Scalar>& row, Relation rel, Scalar b) {
        constraints.conservativeResize(constraints.rows() + 1, objective.size());
        constraints.row(constraints.rows() - 1) = row;
        relations.push_back(rel);
        rhs.conservativeResize(rhs.size() + 1);
        rhs[rhs.size() - 1] = b;
    }

    void check() const {
        if (constraints.rows() != num_rows() ||
            static_cast<int>(relations.size()) != num_rows())
            throw std::invalid_argument("inconsistent constraint counts");
        if (num_rows() > 0 && constraints.cols() != num_vars())
            throw std::invalid_argument("constraint row length != variable count");
        if (!objective.allFinite() || (num_rows() > 0 && !constraints.allFinite()) ||
            !rhs.allFinite())
            throw std::invalid_argument("non-finite coefficient");
    }
};

template <typename Scalar = double>
struct Solution {
    Status status = Status::Infeasible;
    Scalar objective_value = Scalar(0);
    Eigen::VectorX<Scalar> variable_values;
    int iterations = 0;
};

namespace detail {

// Dense two-phase simplex tableau. Entering rule: most negative reduced cost,
// lowest index on ties; falls back to Bland's rule after a stall streak to
// break cycles. Leaving rule: min ratio, lowest basis index on ties.
template <typename Scalar>
class Tableau {
  public:
    static constexpr Scalar kFeasTol = Scalar(1e-8);
    static constexpr Scalar kOptTol = Scalar(1e-8);
    // Hard floor below which a pivot is numerically meaningless.
    static constexpr Scalar kPivotTol = Scalar(1e-12);
    // Eligibility floor for the ratio test: dividing a row by anything
    // smaller amplifies elimination noise beyond the feasibility tolerance.
    static constexpr Scalar kRatioTol = Scalar(1e-7);
    static constexpr int kStallStreak = 64;
    // Degenerate pivots tolerated under Bland's rule before the tableau is
    // perturbed to restore strict ratio ordering.
    static constexpr int kPerturbStreak = 4 * kStallStreak;

    explicit Tableau(const Problem<Scalar>& p) : n_(p.num_vars()), m_(p.num_rows()) {
        // Normalize to b >= 0, then append slack/surplus and artificial columns.
        Eigen::MatrixX<Scalar> a = p.constraints;
        Eigen::VectorX<Scalar> b = p.rhs;
        std::vector<Relation> rel = p.relations;
        for (int i = 0; i < m_; ++i) {
            if (b[i] < Scalar(0)) {
                a.row(i) = -a.row(i);
                b[i] = -b[i];
                if (rel[i] == Relation::LessEq)
                    rel[i] = Relation::GreaterEq;
                else if (rel[i] == Relation::GreaterEq)
                    rel[i] = Relation::LessEq;
            }
        }

        int n_slack = 0, n_art = 0;
        for (auto r : rel) {
            if (r != Relation::Equal) ++n_slack;
            if (r != Relation::LessEq) ++n_art;
        }
        cols_ = n_ + n_slack + n_art;
        art_begin_ = n_ + n_slack;

        t_.setZero(m_, cols_ + 1);
        t_.block(0, 0, m_, n_) = a;
        t_.col(cols_) = b;
        basis_.resize(m_);

        int slack = n_, art = art_begin_;
        for (int i = 0; i < m_; ++i) {
            switch (rel[i]) {
                case Relation::LessEq:
                    t_(i, slack) = Scalar(1);
                    basis_[i] = slack++;
                    break;
                case Relation::GreaterEq:
                    t_(i, slack++) = Scalar(-1);
                    t_(i, art) = Scalar(1);
                    basis_[i] = art++;
                    break;
                case Relation::Equal:
                    t_(i, art) = Scalar(1);
                    basis_[i] = art++;
                    break;
            }
        }

        cost_ = p.objective;
        if (p.sense == Sense::Maximize) cost_ = -cost_;
        cost_.conservativeResize(cols_);
        cost_.tail(cols_ - n_).setZero();

        b0_ = b;
        b_scale_ = m_ > 0 ? b.template lpNorm<Eigen::Infinity>() : Scalar(0);
        init_basis_ = basis_;
    }

    Solution<Scalar> run(const Problem<Scalar>& p) {
        Solution<Scalar> sol;

        // Phase 1: minimize the sum of artificial variables.
        if (art_begin_ < cols_) {
            Eigen::VectorX<Scalar> phase1_cost = Eigen::VectorX<Scalar>::Zero(cols_);
            phase1_cost.tail(cols_ - art_begin_).setOnes();
            if (!iterate(phase1_cost, /*forbid_artificials=*/false)) {
                // Phase-1 objective is bounded below by 0; unbounded cannot occur.
                throw NumericalBreakdown("phase-1 simplex reported unbounded");
            }
            restore_rhs();
            if (objective_of(phase1_cost) > kFeasTol * std::max(Scalar(1), b_scale_)) {
                sol.status = Status::Infeasible;
                sol.iterations = iterations_;
                return sol;
            }
            pivot_out_artificials();
        }

        // Phase 2 on the true objective, artificial columns barred.
        if (!iterate(cost_, /*forbid_artificials=*/true)) {
            sol.status = Status::Unbounded;
            sol.iterations = iterations_;
            return sol;
        }
        restore_rhs();

        sol.status = Status::Optimal;
        sol.iterations = iterations_;
        sol.variable_values = Eigen::VectorX<Scalar>::Zero(n_);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) sol.variable_values[basis_[i]] = std::max(Scalar(0), t_(i, cols_));
        sol.objective_value = p.objective.dot(sol.variable_values);
        return sol;
    }

  private:
    // Rebuilds the rhs column as B^{-1} b from the original right-hand side,
    // undoing any anti-cycling perturbation. The columns that started out
    // basic form an identity in the initial tableau, so their current values
    // are exactly the columns of B^{-1}.
    void restore_rhs() {
        if (!perturbed_) return;
        Eigen::VectorX<Scalar> fresh = Eigen::VectorX<Scalar>::Zero(m_);
        for (int i = 0; i < m_; ++i)
            if (b0_[i] != Scalar(0)) fresh.noalias() += b0_[i] * t_.col(init_basis_[i]);
        t_.col(cols_) = fresh;
        perturbed_ = false;
    }

    Scalar objective_of(const Eigen::VectorX<Scalar>& cost) const {
        Scalar v = Scalar(0);
        for (int i = 0; i < m_; ++i) v += cost[basis_[i]] * t_(i, cols_);
        return v;
    }

    // Reduced-cost row z_j = c_j - c_B' B^{-1} A_j for the current basis,
    // maintained incrementally across pivots inside iterate().
    Eigen::VectorX<Scalar> reduced_costs(const Eigen::VectorX<Scalar>& cost) const {
        Eigen::VectorX<Scalar> z = cost;
        for (int i = 0; i < m_; ++i) {
            const Scalar cb = cost[basis_[i]];
            if (cb != Scalar(0)) z.noalias() -= cb * t_.row(i).head(cols_).transpose();
        }
        return z;
    }

    // Returns false when unbounded.
    bool iterate(const Eigen::VectorX<Scalar>& cost, bool forbid_artificials) {
        const int limit = forbid_artificials ? art_begin_ : cols_;
        int stall = 0;
        int pivots_since_refresh = 0;
        const Scalar degenerate_step = kFeasTol * (Scalar(1) + b_scale_);
        const int max_iterations = 2000 * (m_ + cols_) + 10000;
        zrow_ = reduced_costs(cost);
        std::vector<char> barred(limit, 0);  // columns with no usable pivot row

        for (;;) {
            if (iterations_ > max_iterations)
                throw NumericalBreakdown("simplex iteration limit exceeded");
            const bool bland = stall >= kStallStreak;

            int entering = -1;
            Scalar best = -kOptTol;
            for (int j = 0; j < limit; ++j) {
                if (barred[j]) continue;
                const Scalar rc = zrow_[j];
                if (rc < best) {
                    entering = j;
                    if (bland) break;  // lowest index with negative reduced cost
                    best = rc;
                }
            }
            if (entering < 0) return true;

            // The incremental z-row drifts under heavy degeneracy; re-derive
            // the candidate's reduced cost exactly before committing to it.
            {
                Scalar exact = cost[entering];
                for (int i = 0; i < m_; ++i) {
                    const Scalar cb = cost[basis_[i]];
                    if (cb != Scalar(0)) exact -= cb * t_(i, entering);
                }
                zrow_[entering] = exact;
                if (exact >= -kOptTol) continue;  // stale candidate, rescan
            }

            const int leaving = ratio_test(entering);
            if (leaving < 0) {
                // A clearly improving column with no positive entry certifies
                // unboundedness; a marginal one is rounding noise, set aside.
                if (zrow_[entering] < Scalar(-1e-6) &&
                    t_.col(entering).maxCoeff() <= kRatioTol)
                    return false;
                barred[entering] = 1;
                continue;
            }
            // A degenerate pivot moves nothing; only a genuine step makes
            // progress. Objective deltas are too noisy near zero to tell
            // the two apart, step length is not.
            const Scalar step = t_(leaving, cols_) / t_(leaving, entering);
            if (step > degenerate_step) {
                stall = 0;
            } else if (++stall % kPerturbStreak == 0) {
                // Still cycling under Bland's rule: rounding noise has
                // blurred the exact ties its guarantee depends on. Give
                // each basic value a distinct nudge within the feasibility
                // tolerance so every ratio comparison becomes strict.
                const Scalar delta = kFeasTol / Scalar(m_ + 1);
                for (int i = 0; i < m_; ++i)
                    t_(i, cols_) = std::max(Scalar(0), t_(i, cols_)) +
                                   delta * Scalar(i + 1);
                perturbed_ = true;
            }

            pivot(leaving, entering, /*update_zrow=*/true);
            ++iterations_;
            std::fill(barred.begin(), barred.end(), 0);

            // The incremental z-row drifts on long degenerate runs.
            if (++pivots_since_refresh >= 128) {
                zrow_ = reduced_costs(cost);
                pivots_since_refresh = 0;
            }
        }
    }

    // Min-ratio test over rows with pivot entry above tolerance; lowest basis
    // index breaks ties (deterministic and cycle-safe under Bland's rule).
    int ratio_test(int entering) const {
        int row = -1;
        Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
        for (int i = 0; i < m_; ++i) {
            const Scalar piv = t_(i, entering);
            if (piv <= kRatioTol) continue;
            const Scalar ratio = t_(i, cols_) / piv;
            if (ratio < best_ratio - kPivotTol ||
                (ratio < best_ratio + kPivotTol && row >= 0 && basis_[i] < basis_[row])) {
                best_ratio = ratio;
                row = i;
            }
        }
        return row;
    }

    void pivot(int row, int col, bool update_zrow = false) {
        const Scalar piv = t_(row, col);
        if (std::abs(piv) < kPivotTol)
            throw NumericalBreakdown("pivot magnitude below tolerance");
        t_.row(row) /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            const Scalar f = t_(i, col);
            if (f != Scalar(0)) t_.row(i) -= f * t_.row(row);
        }
        if (update_zrow) {
            const Scalar f = zrow_[col];
            if (f != Scalar(0)) zrow_.noalias() -= f * t_.row(row).head(cols_).transpose();
        }
        basis_[row] = col;
    }

    // After phase 1, artificials left in the basis sit at zero level. Swap
    // each for any structural/slack column with a usable pivot; a row with
    // none is redundant and can stay as-is.
    void pivot_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < art_begin_) continue;
            for (int j = 0; j < art_begin_; ++j) {
                if (std::abs(t_(i, j)) > kRatioTol) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    int n_, m_, cols_ = 0, art_begin_ = 0;
    Eigen::MatrixX<Scalar> t_;
    Eigen::VectorX<Scalar> cost_;
    Eigen::VectorX<Scalar> zrow_;
    Eigen::VectorX<Scalar> b0_;
    Scalar b_scale_ = Scalar(0);
    std::vector<int> basis_;
    std::vector<int> init_basis_;
    bool perturbed_ = false;
    int iterations_ = 0;
};

}  // namespace detail

template <typename Scalar>
Solution<Scalar> solve(const Problem<Scalar>& problem) {
    problem.check();
    detail::Tableau<Scalar> tableau(problem);
    return tableau.run(problem);
}

/// Max-norm constraint violation of a candidate point; used by tests and
/// the engine's feasibility assertions.
template <typename Scalar>
Scalar feasibility_residual(const Problem<Scalar>& p, const Eigen::VectorX<Scalar>& x) {
    Scalar worst = Scalar(0);
    if (p.num_rows() == 0) return worst;
    const Eigen::VectorX<Scalar> ax = p.constraints * x;
    for (int i = 0; i < p.num_rows(); ++i) {
        Scalar v = Scalar(0);
        switch (p.relations[i]) {
            case Relation::LessEq: v = ax[i] - p.rhs[i]; break;
            case Relation::GreaterEq: v = p.rhs[i] - ax[i]; break;
            case Relation::Equal: v = std::abs(ax[i] - p.rhs[i]); break;
        }
        worst = std::max(worst, v);
    }
    worst = std::max(worst, -x.minCoeff());
    return worst;
}

}  // namespace deatool::lp

#endif  // DEATOOL_LP_HPP

#include "sbmopa/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sbmopa/errors.hpp"

namespace sbmopa::lp {

namespace {

double& tolerance_ref() {
    static double tol = 1e-7;
    return tol;
}

// Pivot-element eligibility threshold. Separate from the feasibility
// tolerance: pivoting on a near-zero element destroys the tableau.
constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-13;

} // namespace

double tolerance() { return tolerance_ref(); }

void set_tolerance(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw ValidationError("lp tolerance must be a positive finite number");
    }
    tolerance_ref() = tol;
}

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "unknown";
}

std::string to_string(Sense s) {
    switch (s) {
        case Sense::LessEqual: return "<=";
        case Sense::GreaterEqual: return ">=";
        case Sense::Equal: return "=";
    }
    return "?";
}

int Problem::add_variable(std::string name, double lower, double upper) {
    vars_.push_back(Variable{std::move(name), lower, upper});
    return static_cast<int>(vars_.size()) - 1;
}

int Problem::add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
    cons_.push_back(Constraint{std::move(name), std::move(terms), sense, rhs});
    return static_cast<int>(cons_.size()) - 1;
}

void Problem::set_objective(Goal goal, std::vector<Term> terms) {
    goal_ = goal;
    obj_ = std::move(terms);
}

void Problem::validate() const {
    const int n = static_cast<int>(vars_.size());
    for (int j = 0; j < n; ++j) {
        const Variable& v = vars_[j];
        if (std::isnan(v.lower) || std::isnan(v.upper)) {
            throw ValidationError("variable '" + v.name + "' has a NaN bound");
        }
        if (v.lower > v.upper) {
            throw ValidationError("variable '" + v.name + "' has lower bound > upper bound");
        }
    }
    auto check_terms = [&](const std::vector<Term>& terms, const std::string& where) {
        for (const Term& t : terms) {
            if (t.var < 0 || t.var >= n) {
                throw ValidationError(where + " references undeclared variable index " +
                                      std::to_string(t.var));
            }
            if (!std::isfinite(t.coeff)) {
                throw ValidationError(where + " has a non-finite coefficient on variable '" +
                                      vars_[t.var].name + "'");
            }
        }
    };
    check_terms(obj_, "objective");
    for (const Constraint& c : cons_) {
        check_terms(c.terms, "constraint '" + c.name + "'");
        if (!std::isfinite(c.rhs)) {
            throw ValidationError("constraint '" + c.name + "' has a non-finite rhs");
        }
    }
}

std::string Problem::dump() const {
    std::ostringstream os;
    os << (goal_ == Goal::Maximize ? "maximize" : "minimize");
    for (const Term& t : obj_) {
        os << " " << (t.coeff >= 0 ? "+" : "") << t.coeff << "*" << vars_[t.var].name;
    }
    os << "\nsubject to\n";
    for (const Constraint& c : cons_) {
        os << "  " << c.name << ":";
        for (const Term& t : c.terms) {
            os << " " << (t.coeff >= 0 ? "+" : "") << t.coeff << "*" << vars_[t.var].name;
        }
        os << " " << to_string(c.sense) << " " << c.rhs << "\n";
    }
    for (const Variable& v : vars_) {
        os << "  " << v.lower << " <= " << v.name << " <= " << v.upper << "\n";
    }
    return os.str();
}

namespace {

// Mapping from a declared variable to its standard-form column(s):
//   x = scale * z[col] + offset        (shifted or mirrored bound)
//   x = z[col] - z[neg_col]            (free variable split)
struct VarMap {
    int col = -1;
    int neg_col = -1;
    double scale = 1.0;
    double offset = 0.0;
};

// Two-phase dense tableau simplex over the canonical form
//   min c.z   s.t.  A z (sense) b,  z >= 0,  b >= 0.
class Simplex {
public:
    explicit Simplex(const Problem& p) : prob_(p) { build(); }
    Solution run();

private:
    void build();
    void add_row(std::vector<double> row, double rhs, Sense sense);
    double recompute_reduced_costs(const std::vector<double>& cost);
    int price(bool bland) const;
    int ratio_test(int entering) const;
    void pivot(int row, int col);
    // Runs simplex iterations for the given cost vector. Returns false when
    // the problem is unbounded in this phase.
    bool iterate(const std::vector<double>& cost);
    void drive_out_artificials();
    Solution extract();

    const Problem& prob_;

    // canonical rows, structural columns only
    std::vector<std::vector<double>> rows_;
    std::vector<double> rhs_;
    std::vector<Sense> canon_sense_;
    std::vector<double> row_sign_;
    std::vector<VarMap> var_map_;
    std::vector<int> row_of_con_;
    std::vector<int> id_col_;      // per row: column that started as e_i
    std::vector<char> artificial_; // per tableau column
    std::vector<double> cost2_;    // phase-2 cost, minimization
    int num_structural_ = 0;
    double obj_sign_ = 1.0;        // internal cost = obj_sign * user coeff

    // tableau state
    std::vector<std::vector<double>> t_;
    std::vector<double> b_;
    std::vector<double> red_;
    std::vector<int> basis_;
    int m_ = 0;
    int ncols_ = 0;
    int iterations_ = 0;
    int dantzig_budget_ = 0;
    int hard_limit_ = 0;
};

void Simplex::build() {
    const auto& vars = prob_.variables();
    const int nv = static_cast<int>(vars.size());
    var_map_.resize(nv);
    obj_sign_ = prob_.goal() == Goal::Maximize ? -1.0 : 1.0;

    struct PendingUpper {
        int col;
        double value;
    };
    std::vector<PendingUpper> uppers;
    int col = 0;
    for (int j = 0; j < nv; ++j) {
        const Variable& v = vars[j];
        VarMap& vm = var_map_[j];
        const bool lo = std::isfinite(v.lower);
        const bool hi = std::isfinite(v.upper);
        if (lo) {
            vm = VarMap{col++, -1, 1.0, v.lower};
            if (hi) uppers.push_back({vm.col, v.upper - v.lower});
        } else if (hi) {
            vm = VarMap{col++, -1, -1.0, v.upper};  // mirrored: x = upper - z
        } else {
            vm.col = col++;
            vm.neg_col = col++;
        }
    }
    num_structural_ = col;

    cost2_.assign(num_structural_, 0.0);
    for (const Term& t : prob_.objective()) {
        const VarMap& vm = var_map_[t.var];
        const double c = obj_sign_ * t.coeff;
        if (vm.neg_col >= 0) {
            cost2_[vm.col] += c;
            cost2_[vm.neg_col] -= c;
        } else {
            cost2_[vm.col] += c * vm.scale;
        }
    }

    const int ncon = static_cast<int>(prob_.constraints().size());
    row_of_con_.resize(ncon);
    for (int i = 0; i < ncon; ++i) {
        const Constraint& con = prob_.constraints()[i];
        std::vector<double> row(num_structural_, 0.0);
        double rhs = con.rhs;
        for (const Term& t : con.terms) {
            const VarMap& vm = var_map_[t.var];
            if (vm.neg_col >= 0) {
                row[vm.col] += t.coeff;
                row[vm.neg_col] -= t.coeff;
            } else {
                row[vm.col] += t.coeff * vm.scale;
                rhs -= t.coeff * vm.offset;
            }
        }
        row_of_con_[i] = static_cast<int>(rows_.size());
        add_row(std::move(row), rhs, con.sense);
    }
    for (const PendingUpper& u : uppers) {
        std::vector<double> row(num_structural_, 0.0);
        row[u.col] = 1.0;
        add_row(std::move(row), u.value, Sense::LessEqual);
    }

    m_ = static_cast<int>(rows_.size());
    id_col_.assign(m_, -1);
    basis_.assign(m_, -1);
    artificial_.assign(num_structural_, 0);

    // Slack/surplus/artificial columns, appended per row.
    std::vector<std::vector<double>> extra(m_);
    int extra_cols = 0;
    auto new_col = [&](int row, double coeff, bool art) {
        for (int i = 0; i < m_; ++i) extra[i].push_back(i == row ? coeff : 0.0);
        artificial_.push_back(art ? 1 : 0);
        return num_structural_ + extra_cols++;
    };
    for (int i = 0; i < m_; ++i) {
        switch (canon_sense_[i]) {
            case Sense::LessEqual: {
                const int c = new_col(i, 1.0, false);
                id_col_[i] = c;
                basis_[i] = c;
                break;
            }
            case Sense::GreaterEqual: {
                new_col(i, -1.0, false);
                const int c = new_col(i, 1.0, true);
                id_col_[i] = c;
                basis_[i] = c;
                break;
            }
            case Sense::Equal: {
                const int c = new_col(i, 1.0, true);
                id_col_[i] = c;
                basis_[i] = c;
                break;
            }
        }
    }
    ncols_ = num_structural_ + extra_cols;
    t_.assign(m_, std::vector<double>(ncols_, 0.0));
    for (int i = 0; i < m_; ++i) {
        std::copy(rows_[i].begin(), rows_[i].end(), t_[i].begin());
        for (int j = 0; j < extra_cols; ++j) t_[i][num_structural_ + j] = extra[i][j];
    }
    b_ = rhs_;
    cost2_.resize(ncols_, 0.0);

    dantzig_budget_ = 2000 + 20 * (m_ + ncols_);
    hard_limit_ = 200000 + 400 * (m_ + ncols_);
}

void Simplex::add_row(std::vector<double> row, double rhs, Sense sense) {
    double sign = 1.0;
    if (rhs < 0.0) {
        sign = -1.0;
        rhs = -rhs;
        for (double& v : row) v = -v;
        if (sense == Sense::LessEqual) sense = Sense::GreaterEqual;
        else if (sense == Sense::GreaterEqual) sense = Sense::LessEqual;
    }
    rows_.push_back(std::move(row));
    rhs_.push_back(rhs);
    row_sign_.push_back(sign);
    canon_sense_.push_back(sense);
}

double Simplex::recompute_reduced_costs(const std::vector<double>& cost) {
    red_ = cost;
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb == 0.0) continue;
        obj += cb * b_[i];
        const auto& row = t_[i];
        for (int j = 0; j < ncols_; ++j) red_[j] -= cb * row[j];
    }
    return obj;
}

int Simplex::price(bool bland) const {
    const double tol = tolerance();
    if (bland) {
        for (int j = 0; j < ncols_; ++j) {
            if (!artificial_[j] && red_[j] < -tol) return j;
        }
        return -1;
    }
    int best = -1;
    double best_red = -tol;
    for (int j = 0; j < ncols_; ++j) {
        if (!artificial_[j] && red_[j] < best_red) {
            best_red = red_[j];
            best = j;
        }
    }
    return best;
}

int Simplex::ratio_test(int entering) const {
    // A basic artificial pinned at zero must never grow again: if the
    // entering column touches its row, pivot there (degenerate pivot).
    // Artificials still carrying value (phase 1) go through the normal test.
    for (int i = 0; i < m_; ++i) {
        if (artificial_[basis_[i]] && b_[i] <= 1e-9 &&
            std::abs(t_[i][entering]) > kPivotTol) {
            return i;
        }
    }
    int best = -1;
    double best_ratio = kInf;
    for (int i = 0; i < m_; ++i) {
        const double a = t_[i][entering];
        if (a <= kPivotTol) continue;
        const double ratio = std::max(b_[i], 0.0) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && (best < 0 || basis_[i] < basis_[best]))) {
            best_ratio = ratio;
            best = i;
        }
    }
    return best;
}

void Simplex::pivot(int row, int col) {
    std::vector<double>& pr = t_[row];
    const double inv = 1.0 / pr[col];
    for (int j = 0; j < ncols_; ++j) pr[j] *= inv;
    pr[col] = 1.0;
    b_[row] *= inv;
    if (b_[row] < 0.0 && b_[row] > -1e-9) b_[row] = 0.0;
    for (int i = 0; i < m_; ++i) {
        if (i == row) continue;
        const double f = t_[i][col];
        if (f == 0.0) continue;
        std::vector<double>& ri = t_[i];
        for (int j = 0; j < ncols_; ++j) {
            ri[j] -= f * pr[j];
            if (std::abs(ri[j]) < kDropTol) ri[j] = 0.0;
        }
        ri[col] = 0.0;
        b_[i] -= f * b_[row];
        if (b_[i] < 0.0 && b_[i] > -1e-9) b_[i] = 0.0;
    }
    const double f = red_[col];
    if (f != 0.0) {
        for (int j = 0; j < ncols_; ++j) {
            red_[j] -= f * pr[j];
            if (std::abs(red_[j]) < kDropTol) red_[j] = 0.0;
        }
        red_[col] = 0.0;
    }
    basis_[row] = col;
}

bool Simplex::iterate(const std::vector<double>& cost) {
    recompute_reduced_costs(cost);
    while (true) {
        if (iterations_ > hard_limit_) {
            throw SolverError("simplex iteration limit exceeded (" +
                              std::to_string(hard_limit_) + "); problem dump:\n" + prob_.dump());
        }
        const int entering = price(iterations_ > dantzig_budget_);
        if (entering < 0) return true;
        const int leaving = ratio_test(entering);
        if (leaving < 0) return false;
        pivot(leaving, entering);
        ++iterations_;
    }
}

void Simplex::drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
        if (!artificial_[basis_[i]]) continue;
        for (int j = 0; j < ncols_; ++j) {
            if (artificial_[j]) continue;
            if (std::abs(t_[i][j]) > kPivotTol) {
                pivot(i, j);
                break;
            }
        }
        // No eligible pivot: the row is redundant; the artificial stays basic
        // at zero and the ratio-test guard keeps it there.
    }
}

Solution Simplex::extract() {
    Solution s;
    s.status = Status::Optimal;
    s.iterations = iterations_;

    std::vector<double> z(ncols_, 0.0);
    for (int i = 0; i < m_; ++i) z[basis_[i]] = std::max(b_[i], 0.0);

    const int nv = static_cast<int>(prob_.variables().size());
    s.primal.resize(nv, 0.0);
    for (int j = 0; j < nv; ++j) {
        const VarMap& vm = var_map_[j];
        if (vm.neg_col >= 0) {
            s.primal[j] = z[vm.col] - z[vm.neg_col];
        } else {
            s.primal[j] = vm.scale * z[vm.col] + vm.offset;
        }
    }

    // Objective of the reported point, evaluated directly on the primal
    // values so re-substitution reproduces it exactly.
    double obj = 0.0;
    for (const Term& t : prob_.objective()) obj += t.coeff * s.primal[t.var];
    s.objective = obj;

    // Duals from the reduced costs of each row's original identity column:
    // red[id] = cost[id] - y_i, with cost zero for slacks and artificials.
    const int ncon = static_cast<int>(prob_.constraints().size());
    s.dual.resize(ncon, 0.0);
    for (int i = 0; i < ncon; ++i) {
        const int r = row_of_con_[i];
        const double y_canon = cost2_[id_col_[r]] - red_[id_col_[r]];
        s.dual[i] = obj_sign_ * row_sign_[r] * y_canon;
    }
    return s;
}

Solution Simplex::run() {
    const double tol = tolerance();

    bool have_artificial = false;
    for (int i = 0; i < m_; ++i) have_artificial |= (artificial_[basis_[i]] != 0);

    if (have_artificial) {
        std::vector<double> cost1(ncols_, 0.0);
        for (int j = 0; j < ncols_; ++j) cost1[j] = artificial_[j] ? 1.0 : 0.0;
        if (!iterate(cost1)) {
            throw SolverError("phase-1 subproblem reported unbounded; problem dump:\n" +
                              prob_.dump());
        }
        double infeas = 0.0;
        for (int i = 0; i < m_; ++i) {
            if (artificial_[basis_[i]]) infeas += std::max(b_[i], 0.0);
        }
        if (infeas > tol) {
            Solution s;
            s.status = Status::Infeasible;
            s.iterations = iterations_;
            return s;
        }
        drive_out_artificials();
    }

    if (!iterate(cost2_)) {
        Solution s;
        s.status = Status::Unbounded;
        s.iterations = iterations_;
        return s;
    }

    Solution s = extract();
    const std::string cert = certify(prob_, s);
    if (!cert.empty()) {
        throw SolverError("optimality certificate failed: " + cert + "\nproblem dump:\n" +
                          prob_.dump());
    }
    return s;
}

} // namespace

Solution solve(const Problem& problem) {
    problem.validate();
    Simplex sx(problem);
    return sx.run();
}

std::string certify(const Problem& problem, const Solution& solution) {
    if (solution.status != Status::Optimal) return "status is not Optimal";
    const double tol = tolerance();
    const auto& vars = problem.variables();
    const auto& cons = problem.constraints();
    const int nv = static_cast<int>(vars.size());
    const int nc = static_cast<int>(cons.size());
    if (static_cast<int>(solution.primal.size()) != nv) return "primal size mismatch";
    if (static_cast<int>(solution.dual.size()) != nc) return "dual size mismatch";
    const bool maximize = problem.goal() == Goal::Maximize;

    for (int j = 0; j < nv; ++j) {
        const double x = solution.primal[j];
        if (!std::isfinite(x)) return "non-finite primal value for '" + vars[j].name + "'";
        const double pad = tol * (1.0 + std::abs(vars[j].lower) + std::abs(vars[j].upper));
        if (std::isfinite(vars[j].lower) && x < vars[j].lower - pad) {
            return "primal below lower bound for '" + vars[j].name + "'";
        }
        if (std::isfinite(vars[j].upper) && x > vars[j].upper + pad) {
            return "primal above upper bound for '" + vars[j].name + "'";
        }
    }

    std::vector<double> activity(nc, 0.0);
    for (int i = 0; i < nc; ++i) {
        double act = 0.0;
        double scale = 1.0 + std::abs(cons[i].rhs);
        for (const Term& t : cons[i].terms) {
            act += t.coeff * solution.primal[t.var];
            scale += std::abs(t.coeff * solution.primal[t.var]);
        }
        activity[i] = act;
        const double y = solution.dual[i];
        const double slack = cons[i].rhs - act;
        switch (cons[i].sense) {
            case Sense::LessEqual:
                if (slack < -tol * scale) return "constraint '" + cons[i].name + "' violated";
                if ((maximize ? y : -y) < -tol) {
                    return "dual sign violated on '" + cons[i].name + "'";
                }
                break;
            case Sense::GreaterEqual:
                if (slack > tol * scale) return "constraint '" + cons[i].name + "' violated";
                if ((maximize ? y : -y) > tol) {
                    return "dual sign violated on '" + cons[i].name + "'";
                }
                break;
            case Sense::Equal:
                if (std::abs(slack) > tol * scale) {
                    return "constraint '" + cons[i].name + "' violated";
                }
                break;
        }
        if (cons[i].sense != Sense::Equal &&
            std::abs(y) * std::abs(slack) > tol * scale * (1.0 + std::abs(y))) {
            return "complementary slackness violated on '" + cons[i].name + "'";
        }
    }

    // Stationarity: reduced cost of every variable must match its bound state.
    std::vector<double> red(nv, 0.0);
    for (const Term& t : problem.objective()) red[t.var] += t.coeff;
    double dual_scale = 1.0;
    for (int i = 0; i < nc; ++i) {
        const double y = solution.dual[i];
        dual_scale += std::abs(y);
        if (y == 0.0) continue;
        for (const Term& t : cons[i].terms) red[t.var] -= y * t.coeff;
    }
    for (int j = 0; j < nv; ++j) {
        const double x = solution.primal[j];
        const double pad = tol * (1.0 + std::abs(x)) * 10.0;
        const bool at_lower = std::isfinite(vars[j].lower) && x <= vars[j].lower + pad;
        const bool at_upper = std::isfinite(vars[j].upper) && x >= vars[j].upper - pad;
        const double rho = maximize ? red[j] : -red[j];
        // For a maximization problem: rho <= 0 when free to increase,
        // rho >= 0 when free to decrease.
        const double slackness = tol * dual_scale;
        if (!at_upper && rho > slackness) {
            return "stationarity violated on '" + vars[j].name + "' (can increase)";
        }
        if (!at_lower && rho < -slackness) {
            return "stationarity violated on '" + vars[j].name + "' (can decrease)";
        }
    }
    return std::string();
}

} // namespace sbmopa::lp

#pragma once

#include <limits>
#include <string>
#include <vector>

namespace sbmopa::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility/optimality tolerance shared by the solver and every downstream
// assertion in this library. One global knob so all checks reference the same
// number. Set it once at startup; not synchronized across threads.
double tolerance();
void set_tolerance(double tol);

enum class Sense { LessEqual, GreaterEqual, Equal };
enum class Goal { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

std::string to_string(Status s);
std::string to_string(Sense s);

struct Term {
    int var = -1;
    double coeff = 0.0;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

// Immutable after construction from the solver's point of view: build it,
// then hand it to solve(). Never mutated by the solver, so one problem may be
// solved from several threads at once.
class Problem {
public:
    int add_variable(std::string name, double lower = 0.0, double upper = kInf);
    int add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);
    void set_objective(Goal goal, std::vector<Term> terms);

    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<Constraint>& constraints() const { return cons_; }
    Goal goal() const { return goal_; }
    const std::vector<Term>& objective() const { return obj_; }

    // Throws ValidationError on undeclared/duplicate-free issues: a term that
    // references no declared variable, a NaN coefficient or bound, or
    // lower > upper.
    void validate() const;

    // Human-readable listing for bug reports and error messages.
    std::string dump() const;

private:
    std::vector<Variable> vars_;
    std::vector<Constraint> cons_;
    std::vector<Term> obj_;
    Goal goal_ = Goal::Maximize;
};

struct Solution {
    Status status = Status::Infeasible;
    double objective = 0.0;
    // Per declared variable / constraint; filled only when status == Optimal.
    std::vector<double> primal;
    // dual[i] is the sensitivity d(objective)/d(rhs_i) of constraint i.
    std::vector<double> dual;
    int iterations = 0;
};

// Dense two-phase primal simplex. Dantzig pricing with fixed tie-breaking;
// falls back to Bland's rule after an iteration budget so degenerate
// instances terminate. Deterministic for identical input.
//
// Throws ValidationError when the problem fails validate(), SolverError on
// iteration-limit exhaustion or a failed optimality certificate.
Solution solve(const Problem& problem);

// KKT certificate for an Optimal solution: primal feasibility, dual sign
// conditions, complementary slackness and stationarity, all within
// tolerance(). Returns an empty string when the certificate holds, otherwise
// a description of the first violated condition.
std::string certify(const Problem& problem, const Solution& solution);

} // namespace sbmopa::lp

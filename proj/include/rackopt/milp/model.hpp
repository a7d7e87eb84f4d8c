#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace rackopt::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { binary, integer, continuous };

enum class ConstraintSense { less_equal, equal, greater_equal };

enum class ObjectiveSense { minimize, maximize };

/// Ordinal handle for a model variable. Stable across model mutations.
struct VarRef {
    int index = -1;

    friend bool operator==(VarRef a, VarRef b) { return a.index == b.index; }
    friend bool operator!=(VarRef a, VarRef b) { return a.index != b.index; }
};

struct Variable {
    double lower = 0.0;
    double upper = 0.0;
    VarKind kind = VarKind::continuous;
    int branch_priority = 0;
    std::string name;
};

inline Variable binary_var(std::string name, int branch_priority = 0) {
    return Variable{0.0, 1.0, VarKind::binary, branch_priority, std::move(name)};
}

inline Variable integer_var(std::string name, double lower, double upper, int branch_priority = 0) {
    return Variable{lower, upper, VarKind::integer, branch_priority, std::move(name)};
}

inline Variable continuous_var(std::string name, double lower, double upper) {
    return Variable{lower, upper, VarKind::continuous, 0, std::move(name)};
}

struct LinearTerm {
    VarRef var;
    double coef = 0.0;
};

struct LinearConstraint {
    std::vector<LinearTerm> terms;
    ConstraintSense sense = ConstraintSense::less_equal;
    double rhs = 0.0;
    std::string name;
};

struct Objective {
    std::vector<LinearTerm> terms;
    ObjectiveSense sense = ObjectiveSense::minimize;
};

/// Sparse mixed-integer linear model. Rows and columns are append-only;
/// variable kinds and bounds can be mutated in place (used by the staged
/// heuristics and by assignment pinning).
class MilpModel {
public:
    VarRef add_variable(Variable v) {
        if (!(v.lower <= v.upper)) {
            throw std::invalid_argument("add_variable: lower bound " + std::to_string(v.lower) +
                                        " exceeds upper bound " + std::to_string(v.upper) +
                                        " for '" + v.name + "'");
        }
        if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0)) {
            throw std::invalid_argument("add_variable: binary variable '" + v.name +
                                        "' must have bounds within [0,1]");
        }
        vars_.push_back(std::move(v));
        return VarRef{static_cast<int>(vars_.size()) - 1};
    }

    int add_linear_constraint(LinearConstraint c) {
        std::unordered_set<int> seen;
        for (const auto& t : c.terms) {
            check_ref(t.var, "add_linear_constraint");
            if (!seen.insert(t.var.index).second) {
                throw std::invalid_argument("add_linear_constraint: duplicate variable index " +
                                            std::to_string(t.var.index) + " in '" + c.name + "'");
            }
        }
        cons_.push_back(std::move(c));
        return static_cast<int>(cons_.size()) - 1;
    }

    void set_variable_kind(VarRef ref, VarKind kind) {
        check_ref(ref, "set_variable_kind");
        Variable& v = vars_[ref.index];
        if (kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0)) {
            throw std::invalid_argument("set_variable_kind: bounds of '" + v.name +
                                        "' fall outside [0,1]");
        }
        v.kind = kind;
    }

    /// Collapses the variable's bounds to [value, value].
    void fix_variable(VarRef ref, double value) {
        check_ref(ref, "fix_variable");
        Variable& v = vars_[ref.index];
        if (value < v.lower || value > v.upper) {
            throw std::invalid_argument("fix_variable: value " + std::to_string(value) +
                                        " outside bounds of '" + v.name + "'");
        }
        if (v.kind != VarKind::continuous && std::abs(value - std::round(value)) > 1e-9) {
            throw std::invalid_argument("fix_variable: non-integral value " + std::to_string(value) +
                                        " for integer variable '" + v.name + "'");
        }
        v.lower = value;
        v.upper = value;
    }

    void set_bounds(VarRef ref, double lower, double upper) {
        check_ref(ref, "set_bounds");
        if (!(lower <= upper)) {
            throw std::invalid_argument("set_bounds: empty interval for '" + vars_[ref.index].name + "'");
        }
        vars_[ref.index].lower = lower;
        vars_[ref.index].upper = upper;
    }

    void set_objective(Objective obj) {
        std::unordered_set<int> seen;
        for (const auto& t : obj.terms) {
            check_ref(t.var, "set_objective");
            if (!seen.insert(t.var.index).second) {
                throw std::invalid_argument("set_objective: duplicate variable index " +
                                            std::to_string(t.var.index));
            }
        }
        obj_ = std::move(obj);
    }

    int num_variables() const { return static_cast<int>(vars_.size()); }
    int num_constraints() const { return static_cast<int>(cons_.size()); }

    const Variable& variable(VarRef ref) const {
        check_ref(ref, "variable");
        return vars_[ref.index];
    }
    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<LinearConstraint>& constraints() const { return cons_; }
    const Objective& objective() const { return obj_; }

    bool has_integer_variables() const {
        for (const auto& v : vars_) {
            if (v.kind != VarKind::continuous) return true;
        }
        return false;
    }

    /// Plain-text dump, one variable per line followed by one constraint per line.
    void dump(std::ostream& os) const {
        os << (obj_.sense == ObjectiveSense::minimize ? "minimize" : "maximize");
        for (const auto& t : obj_.terms) os << ' ' << format_term(t);
        os << '\n';
        for (int j = 0; j < num_variables(); ++j) {
            const Variable& v = vars_[j];
            os << "var x" << j << " '" << v.name << "' " << kind_name(v.kind)
               << " [" << v.lower << ", " << v.upper << "]";
            if (v.branch_priority != 0) os << " prio=" << v.branch_priority;
            os << '\n';
        }
        for (const auto& c : cons_) {
            os << "con '" << c.name << "'";
            for (const auto& t : c.terms) os << ' ' << format_term(t);
            os << ' ' << sense_name(c.sense) << ' ' << c.rhs << '\n';
        }
    }

private:
    void check_ref(VarRef ref, const char* where) const {
        if (ref.index < 0 || ref.index >= num_variables()) {
            throw std::invalid_argument(std::string(where) + ": unknown variable index " +
                                        std::to_string(ref.index));
        }
    }

    static std::string format_term(const LinearTerm& t) {
        std::string s = t.coef >= 0 ? "+" : "";
        s += std::to_string(t.coef) + "*x" + std::to_string(t.var.index);
        return s;
    }

    static const char* kind_name(VarKind k) {
        switch (k) {
            case VarKind::binary: return "bin";
            case VarKind::integer: return "int";
            case VarKind::continuous: return "cont";
        }
        return "?";
    }

    static const char* sense_name(ConstraintSense s) {
        switch (s) {
            case ConstraintSense::less_equal: return "<=";
            case ConstraintSense::equal: return "=";
            case ConstraintSense::greater_equal: return ">=";
        }
        return "?";
    }

    std::vector<Variable> vars_;
    std::vector<LinearConstraint> cons_;
    Objective obj_;
};

}  // namespace rackopt::milp

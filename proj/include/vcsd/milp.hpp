#pragma once

#include <string>
#include <vector>

#include "vcsd/instance.hpp"
#include "vcsd/policies.hpp"

namespace vcsd {

enum class VarKind { Continuous, Binary };
enum class ConstraintSense { LessEqual, GreaterEqual, Equal };

struct LpVariable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lb = 0.0;
    double ub = 0.0;
};

struct LpTerm {
    int var = 0;  // index into variables
    double coeff = 0.0;
};

struct LpConstraint {
    std::string name;
    std::vector<LpTerm> terms;
    ConstraintSense sense = ConstraintSense::LessEqual;
    double rhs = 0.0;
};

// Deterministic-counterpart MILP over nodes {depot 0, customers 1..n} and trips 0..E-1.
struct MilpModel {
    int n_nodes = 0;  // customers + depot
    int m = 0;
    int E = 0;
    double Q = 0.0;
    double L = 0.0;
    std::vector<double> demands;           // per node, depot = 0
    std::vector<std::vector<double>> tau;  // node-to-node travel times

    std::vector<LpVariable> variables;
    std::vector<double> objective;  // coefficient per variable
    std::vector<LpConstraint> constraints;

    // Variable index helpers; (v, e, i[, j]) encode vehicle, trip, nodes.
    int x_index(int v, int e, int i) const;
    int y_index(int v, int e, int i, int j) const;
    int lambda_index(int v, int e, int i) const;
    int q_index(int v, int e, int i) const;
    int t_index(int v, int e, int i) const;
    int tdep_index(int v, int e) const;
};

// Algorithm-3 trip bound: one customer per round trip, nearest first, splitting by Q.
int trip_upper_bound(const CustomerRealization& realization, const InstanceSpec& spec);

MilpModel build_model(const CustomerRealization& realization, const InstanceSpec& spec, int E);

void export_lp(const MilpModel& model, const std::string& path);

// Re-reads an exported LP file (our own dialect) for round-trip checks.
struct ParsedLp {
    std::vector<LpVariable> variables;
    std::vector<double> objective;
    std::vector<LpConstraint> constraints;
};
ParsedLp parse_lp(const std::string& path);

// Solution file of `name value` lines; reconstructs routes from y arcs.
std::vector<Route> parse_solution(const std::string& path, const MilpModel& model);

// Evaluates a full assignment against every model constraint; returns the
// objective, throws DataError when a constraint is violated beyond tol.
double check_assignment(const MilpModel& model, const std::vector<double>& values,
                        double tol = 1e-6);

}  // namespace vcsd

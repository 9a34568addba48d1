#pragma once

#include <string>
#include <vector>

#include "vcsd/instance.hpp"
#include "vcsd/policies.hpp"

namespace vcsd {

struct EvalRow {
    std::string instance_name;
    std::string policy_name;
    double mean = 0.0;
    double stddev = 0.0;  // population
    int scenario_count = 0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
};

// Mean/std of episode served demand over a scenario set. Per-scenario seeds are
// position-derived so serial and parallel runs agree.
EvalRow evaluate(Policy& policy, const InstanceSpec& spec, const ScenarioSet& set,
                 const Rng& base, int jobs = 1);

// %X = (a - b) / b * 100.
double improvement(double a, double b);

void emit_tables(const EvalReport& report, const std::string& path);
EvalReport read_tables(const std::string& path);

}  // namespace vcsd

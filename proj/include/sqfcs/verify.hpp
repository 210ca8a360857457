// verify.hpp — the cross-check suite behind `sqfcs verify` and the acceptance
// test binary: every claim the library stakes its correctness on, one
// pass/fail line each

#pragma once

#include <string>
#include <vector>

namespace sqfcs::verify {

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

struct Options {
    bool fast = false;    // smaller Monte Carlo / draw budgets
    int threads = 2;      // used by the trajectory sampler
    std::string scratch_dir = "verify_tmp";
};

inline constexpr int kCriteria = 11;

CriterionResult run_criterion(int id, const Options& opts = {});
std::vector<CriterionResult> run_all(const Options& opts = {});

}  // namespace sqfcs::verify

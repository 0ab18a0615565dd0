#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ladder {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

/// Runs the acceptance criteria 1-9 in order. Figure datasets are written
/// below `scratch_dir` through the command-line front end.
std::vector<CriterionResult> run_acceptance(const std::filesystem::path& scratch_dir);

/// "[PASS] 3 Blockade reproduction: <detail> (0.001 s, budget 0.1 s)"
std::string format_result(const CriterionResult& r);

}  // namespace ladder

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace conetree {

/// One line of a verification report.  `pass` is `value < threshold` when
/// `upper_bound` is set and `value > threshold` otherwise.
struct CheckResult {
    std::string check;
    nlohmann::json params;
    double value = 0.0;
    double threshold = 0.0;
    bool upper_bound = true;
    bool pass = false;
};

nlohmann::json to_json(const CheckResult& r);

struct VerifyOptions {
    int frechet_cutoff = 4;
    int frechet_energies = 50;
};

std::vector<CheckResult> verify_identities();
std::vector<CheckResult> verify_frechet(const VerifyOptions& opts = {});
std::vector<CheckResult> verify_susy();

/// "identities", "frechet", "susy" or "all".  Throws InvalidArgument otherwise.
std::vector<CheckResult> run_verify_suite(const std::string& suite, const VerifyOptions& opts = {});

}  // namespace conetree

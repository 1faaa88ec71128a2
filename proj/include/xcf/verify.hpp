#ifndef XCF_VERIFY_HPP
#define XCF_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace xcf {

struct CheckResult {
    std::string name;
    std::string group;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::string only;        // run only checks whose group or name matches
    bool corrupt_rhs = false; // negative control: flips the vector field sign
};

// Runs the acceptance checks (every tolerance pinned in code).
std::vector<CheckResult> run_acceptance(const VerifyOptions& opts = {});

// Prints one pass/fail line per check; returns the number of failures.
int print_acceptance(const std::vector<CheckResult>& results, std::ostream& os);

} // namespace xcf

#endif

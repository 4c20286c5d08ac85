#ifndef PMOL_ERRORS_HPP
#define PMOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pmol {

// Invalid system description or config input. CLI maps this to exit code 2.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string &msg) : std::runtime_error(msg) {}
};

// Numerical failure (singular solve, non-convergence, undefined correlation).
// CLI maps this to exit code 3.
class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace pmol

#endif

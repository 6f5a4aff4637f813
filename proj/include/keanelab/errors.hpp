#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace keanelab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition or domain violation (degenerate lengths, out-of-range level, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation exceeded its configured step or bit budget.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, std::uint64_t steps_done)
        : Error(what), steps_done_(steps_done) {}

    std::uint64_t steps_done() const { return steps_done_; }

private:
    std::uint64_t steps_done_;
};

/// Invalid run configuration; collects every violation found.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& ps) {
        std::string out = "invalid config";
        for (const auto& p : ps) {
            out += "\n  - " + p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

}  // namespace keanelab

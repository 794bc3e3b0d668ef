#pragma once

#include <stdexcept>
#include <string>

namespace wasep {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid experiment configuration; carries one message per offending key.
class config_error : public error {
public:
    explicit config_error(std::vector<std::string> issues)
        : error(join(issues)), issues_(std::move(issues)) {}
    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid config:";
        for (const auto& e : v) { s += "\n  - "; s += e; }
        return s;
    }
    std::vector<std::string> issues_;
};

// Corrupted simulation state (broken invariant detected at runtime).
class state_error : public error {
public:
    using error::error;
};

// A per-event hook detected a violation during evolve().
class hook_violation : public error {
public:
    using error::error;
};

}  // namespace wasep

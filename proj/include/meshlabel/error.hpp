#pragma once

#include <stdexcept>
#include <string>

namespace meshlabel {

/// Bad or missing user input (files, formats, parameter values). Maps to exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A broken internal invariant. Maps to exit code 2.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

inline void check_invariant(bool cond, const std::string& what) {
    if (!cond) throw InvariantError(what);
}

}  // namespace meshlabel

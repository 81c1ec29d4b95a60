#pragma once

#include <stdexcept>
#include <string>

namespace tensorcommit {

/// Shapes, arities or lengths that do not line up.
class shape_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A byte stream or text file that does not parse as the expected format.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mathematically undefined input (repeated nodes, degenerate tails, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Count or size that does not fit the representation.
class overflow_error : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

}  // namespace tensorcommit

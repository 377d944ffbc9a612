#pragma once

#include <stdexcept>
#include <string>

namespace ompadvisor {

// Base for all errors that carry a source position.
class SourceError : public std::runtime_error {
public:
    SourceError(const std::string& what, int line, int column)
        : std::runtime_error(what + " at line " + std::to_string(line) +
                             ", column " + std::to_string(column)),
          line(line),
          column(column) {}

    int line;
    int column;
};

class LexError : public SourceError {
public:
    using SourceError::SourceError;
};

class ParseError : public SourceError {
public:
    using SourceError::SourceError;
};

// Malformed pragma text (bad clause syntax, unbalanced parentheses, ...).
class DirectiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad on-disk artifacts: corpora, vocabularies, manifests, checkpoints.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite losses, exploding gradients, and similar numeric failures.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ompadvisor

#pragma once
#include <stdexcept>
#include <string>

namespace fbmre {

// Circulant embedding produced an eigenvalue more negative than the clip
// tolerance allows. For fGn this indicates a covariance or implementation
// bug, not a property of the model.
class EmbeddingNotPsdError : public std::runtime_error {
public:
    explicit EmbeddingNotPsdError(const std::string& what) : std::runtime_error(what) {}
};

class SizeExceededError : public std::runtime_error {
public:
    explicit SizeExceededError(const std::string& what) : std::runtime_error(what) {}
};

class FactorizationFailedError : public std::runtime_error {
public:
    explicit FactorizationFailedError(const std::string& what) : std::runtime_error(what) {}
};

class PreconditionViolatedError : public std::runtime_error {
public:
    explicit PreconditionViolatedError(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateDesignError : public std::runtime_error {
public:
    explicit DegenerateDesignError(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fbmre

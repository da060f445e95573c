#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vortex {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidIndex : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Evaluation point too close to a lattice point of the torus.
class Singularity : public Error {
public:
    using Error::Error;
};

class CoincidentPositions : public Error {
public:
    using Error::Error;
};

// Two vortices closer than the dynamics guard distance.
class NearCollision : public Error {
public:
    NearCollision(std::size_t i, std::size_t j, double distance, std::string stage,
                  long step = -1);

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }
    double distance() const noexcept { return distance_; }
    const std::string& stage() const noexcept { return stage_; }
    long step() const noexcept { return step_; }

    NearCollision at_step(long step) const;

private:
    std::size_t first_;
    std::size_t second_;
    double distance_;
    std::string stage_;
    long step_;
};

// Rejection sampler ran out of attempts.
class AcceptanceFailure : public Error {
public:
    explicit AcceptanceFailure(std::size_t attempts);
    std::size_t attempts() const noexcept { return attempts_; }

private:
    std::size_t attempts_;
};

class FitDomain : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace vortex

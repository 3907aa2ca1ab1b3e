#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwalk {

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Structural violation: self-loop, duplicate edge, unknown terminal, bad pairing.
class GraphError : public Error {
   public:
    using Error::Error;
};

/// Malformed graph, circuit or config text. Line and column are 1-based.
class ParseError : public Error {
   public:
    ParseError(const std::string &message, std::size_t line, std::size_t column)
        : Error(message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

   private:
    std::size_t line_;
    std::size_t column_;
};

/// Momentum outside the open scattering band or too close to its edges.
class BandError : public Error {
   public:
    using Error::Error;
};

class IllConditionedError : public Error {
   public:
    IllConditionedError(double k, double condition)
        : Error("scattering system is ill-conditioned at k = " + std::to_string(k) +
                " (condition estimate " + std::to_string(condition) + ")"),
          k_(k),
          condition_(condition) {}
    double k() const noexcept { return k_; }
    double condition() const noexcept { return condition_; }

   private:
    double k_;
    double condition_;
};

/// Invalid circuit: qubit index out of range, control equal to target.
class CircuitError : public Error {
   public:
    using Error::Error;
};

class UndefinedEffectiveLength : public Error {
   public:
    using Error::Error;
};

class NoStationaryPoint : public Error {
   public:
    using Error::Error;
};

class NonConvergentComposition : public Error {
   public:
    using Error::Error;
};

class UnsoundTruncation : public Error {
   public:
    using Error::Error;
};

class PacketPlacementError : public Error {
   public:
    using Error::Error;
};

}  // namespace qwalk

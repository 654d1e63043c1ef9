#pragma once

#include <stdexcept>
#include <string>

namespace ptolemy {

// A quadruple whose Ptolemy ratio is requested has a vanishing diagonal.
// The message names the diagonal ("ac" or "bd") that collapsed.
class DegenerateQuadrilateral : public std::domain_error {
 public:
  explicit DegenerateQuadrilateral(const std::string& diagonal)
      : std::domain_error("degenerate quadrilateral: diagonal " + diagonal +
                          " has zero length"),
        diagonal_(diagonal) {}

  const std::string& diagonal() const { return diagonal_; }

 private:
  std::string diagonal_;
};

class InvalidEccentricity : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidDelta : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finite-difference step too large for the cyclic gaps of the tuple.
class StepTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidSeed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ptolemy

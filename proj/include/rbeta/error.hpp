#pragma once

#include <stdexcept>
#include <string>

namespace rbeta {

/// Base of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (n < 3, non-binary digit, ...).
class domain_error : public error {
 public:
  using error::error;
};

/// Operation called outside its stated precondition.
class precondition_error : public error {
 public:
  using error::error;
};

/// An orbit left [0, 1/(beta-1)] by more than the drift guard.
class orbit_escape : public error {
 public:
  using error::error;
};

/// An explicit-prefix coin stream was read past its end.
class stream_exhausted : public error {
 public:
  using error::error;
};

/// The point belongs to the countable set removed from the domain of the
/// symbolic coding: return time 1, or an exact landing on a or b.
class deleted_point : public error {
 public:
  using error::error;
};

/// A structural invariant failed; indicates numeric drift or a bug.
class invariant_violation : public error {
 public:
  using error::error;
};

/// A proven inequality failed numerically.
class theorem_violation : public error {
 public:
  using error::error;
};

/// The measure evaluator cannot compute the requested set exactly.
class unsupported_target : public error {
 public:
  using error::error;
};

class insufficient_sample : public error {
 public:
  using error::error;
};

}  // namespace rbeta

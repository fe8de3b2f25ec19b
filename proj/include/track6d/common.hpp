#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace track6d {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside the mathematical domain of an operation (non-positive depth,
// |omega| >= pi, non-rotation matrix, empty mask, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Rotation close enough to pi that the axis-angle sign is not recoverable.
class AmbiguityError : public DomainError {
 public:
  explicit AmbiguityError(const std::string& msg) : DomainError(msg) {}
};

// Euler decomposition at gimbal lock: the three angles are not unique.
class GimbalLockError : public DomainError {
 public:
  explicit GimbalLockError(const std::string& msg) : DomainError(msg) {}
};

// Raised by the tracker when the target cannot be followed any further
// (mask collapsed, box degenerate, decode failed). frame_index is the
// first frame that could not be tracked.
class TrackingLostError : public Error {
 public:
  TrackingLostError(int frame_index, const std::string& msg)
      : Error("frame " + std::to_string(frame_index) + ": " + msg),
        frame_index(frame_index) {}
  int frame_index;
};

// Raised by the training loop when the loss or a parameter stops being finite.
class TrainDivergedError : public Error {
 public:
  TrainDivergedError(std::int64_t step, const std::string& msg)
      : Error("step " + std::to_string(step) + ": " + msg), step(step) {}
  std::int64_t step;
};

// File or serialization problem; carries the offending path.
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& msg)
      : Error(path + ": " + msg), path(path) {}
  std::string path;
};

// Malformed configuration or JSON document that fails schema validation.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

}  // namespace track6d

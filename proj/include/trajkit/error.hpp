#pragma once

#include <stdexcept>
#include <string>

namespace trajkit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a frame invariant (bounds, ordering, conflicting fixes).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad operation parameters or pipeline configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

// A per-trajectory operation failed inside the executor.
class SegmentError : public Error {
 public:
  SegmentError(std::string traj_id, const std::string& cause)
      : Error("trajectory '" + traj_id + "': " + cause), traj_id_(std::move(traj_id)), cause_(cause) {}

  const std::string& traj_id() const noexcept { return traj_id_; }
  const std::string& cause() const noexcept { return cause_; }

 private:
  std::string traj_id_;
  std::string cause_;
};

}  // namespace trajkit

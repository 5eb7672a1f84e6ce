#pragma once

#include <stdexcept>
#include <string>

namespace ncg {

enum class Err {
  Ok = 0,
  InvalidArgument,
  DimensionMismatch,
  ZeroInverse,
  TooLarge,
  Timeout,
  Config,
  KTooLarge,
  DenominatorTooLarge,
  InsufficientCapacity,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace ncg

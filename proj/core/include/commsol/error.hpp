#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace commsol {

/// Base class for every domain error raised by the library. The CLI maps
/// these to exit code 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

/// A subgroup (or image) that was required to have finite index does not.
class InfiniteIndexError : public Error {
public:
  using Error::Error;
};

class ResourceLimitError : public Error {
public:
  using Error::Error;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Rank, dimension or group-family mismatch between operands.
class MismatchError : public Error {
public:
  using Error::Error;
};

/// Work cap used by enumerations. Reads COMMSOL_MAX_WORK when set.
std::size_t work_cap(std::size_t fallback = 2'000'000);

} // namespace commsol

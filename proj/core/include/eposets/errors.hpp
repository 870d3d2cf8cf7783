#pragma once

#include <stdexcept>
#include <string>

namespace eposets {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class EmptyInputError : public Error { using Error::Error; };
class MixedRankError : public Error { using Error::Error; };
class AllZeroWeightsError : public Error { using Error::Error; };
class NotDownwardRegularError : public Error { using Error::Error; };
class NotMiddleRegularError : public Error { using Error::Error; };
class DimensionMismatchError : public Error { using Error::Error; };
class NotNormalizedError : public Error { using Error::Error; };
class ZeroMassError : public Error { using Error::Error; };
class LevelBoundsError : public Error { using Error::Error; };
class LevelMismatchError : public Error { using Error::Error; };
class BudgetExceededError : public Error { using Error::Error; };
class NonPrimeQError : public Error { using Error::Error; };
class NotAffineError : public Error { using Error::Error; };
class EmptySupportError : public Error { using Error::Error; };
class RankDeficientError : public Error { using Error::Error; };
class ZeroMeanError : public Error { using Error::Error; };
class EmptySetError : public Error { using Error::Error; };
class NoLocalConstantSignError : public Error { using Error::Error; };
class InvalidPosetError : public Error { using Error::Error; };
class ParseError : public Error { using Error::Error; };
class IOError : public Error { using Error::Error; };

}  // namespace eposets

#pragma once

#include <stdexcept>

namespace balens {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define BALENS_ERROR_TYPE(Name)  \
  class Name : public Error {    \
   public:                       \
    using Error::Error;          \
  }

// Ingestion
BALENS_ERROR_TYPE(MalformedCsv);
BALENS_ERROR_TYPE(UnknownTarget);
BALENS_ERROR_TYPE(UnparsableLabel);
BALENS_ERROR_TYPE(NonNumericValue);
BALENS_ERROR_TYPE(IndexOutOfRange);

// Preprocessing
BALENS_ERROR_TYPE(SingleClassDataset);
BALENS_ERROR_TYPE(AllMissingFeature);
BALENS_ERROR_TYPE(SchemaMismatch);
BALENS_ERROR_TYPE(MissingCellPresent);

// Model fitting
BALENS_ERROR_TYPE(EmptyInput);
BALENS_ERROR_TYPE(NegativeWeight);
BALENS_ERROR_TYPE(DimensionMismatch);

// Metrics
BALENS_ERROR_TYPE(LengthMismatch);
BALENS_ERROR_TYPE(EmptyConfusion);
BALENS_ERROR_TYPE(EmptyList);
BALENS_ERROR_TYPE(ZeroRow);

// Sampling / evaluation
BALENS_ERROR_TYPE(TooFewClassMembers);
BALENS_ERROR_TYPE(SpecInvalid);
BALENS_ERROR_TYPE(ConfigInvalid);
BALENS_ERROR_TYPE(EmptyReport);

// Generic
BALENS_ERROR_TYPE(InvalidArgument);
BALENS_ERROR_TYPE(IoError);

#undef BALENS_ERROR_TYPE

}  // namespace balens

#ifndef FVQA_ERROR_HPP_
#define FVQA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fvqa {

enum class ErrorCode {
  kIo,
  kParse,
  kNoSlotsFound,
  kVerbNotFound,
  kNoSubject,
  kDuplicateVerb,
  kEmptyFrameSet,
  kVerbMismatch,
  kUnknownVerb,
  kUnknownElement,
  kUnknownImage,
  kUnknownSample,
  kUnknownNode,
  kCyclicTaxonomy,
  kLengthMismatch,
  kEmptyAnswerSet,
  kMissingPrediction,
  kMissingElementPrediction,
  kDegenerateTable,
  kKeyMismatch,
  kOutOfRange,
  kEmptyQuestion,
  kEmptyDataset,
  kDimMismatch,
  kShapeMismatch,
  kUnlabeledSample,
  kCheckpointMismatch,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kNoSlotsFound: return "NoSlotsFound";
    case ErrorCode::kVerbNotFound: return "VerbNotFound";
    case ErrorCode::kNoSubject: return "NoSubject";
    case ErrorCode::kDuplicateVerb: return "DuplicateVerb";
    case ErrorCode::kEmptyFrameSet: return "EmptyFrameSet";
    case ErrorCode::kVerbMismatch: return "VerbMismatch";
    case ErrorCode::kUnknownVerb: return "UnknownVerb";
    case ErrorCode::kUnknownElement: return "UnknownElement";
    case ErrorCode::kUnknownImage: return "UnknownImage";
    case ErrorCode::kUnknownSample: return "UnknownSample";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kCyclicTaxonomy: return "CyclicTaxonomy";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyAnswerSet: return "EmptyAnswerSet";
    case ErrorCode::kMissingPrediction: return "MissingPrediction";
    case ErrorCode::kMissingElementPrediction: return "MissingElementPrediction";
    case ErrorCode::kDegenerateTable: return "DegenerateTable";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptyQuestion: return "EmptyQuestion";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kUnlabeledSample: return "UnlabeledSample";
    case ErrorCode::kCheckpointMismatch: return "CheckpointMismatch";
  }
  return "Error";
}

// All library failures are reported through this type. The message is a
// single line suitable for a command-line diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace fvqa

#endif  // FVQA_ERROR_HPP_

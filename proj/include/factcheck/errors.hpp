#pragma once

#include <stdexcept>
#include <string>

namespace factcheck {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IngestError : Error { using Error::Error; };

// core model
struct InvalidLabelIndex : Error { using Error::Error; };
struct InvalidLabelName : Error { using Error::Error; };
struct InvalidDate : Error { using Error::Error; };

// decomposition
struct DecompositionBackendError : Error { using Error::Error; };
struct EmptyDecomposition : Error { using Error::Error; };

// web retrieval
struct MalformedUrl : Error { using Error::Error; };
struct SearchBackendError : Error { using Error::Error; };
struct ScrapeFailed : Error { using Error::Error; };

// summarization
struct SummarizationBackendError : Error { using Error::Error; };
struct EmptyEvidence : Error { using Error::Error; };

// veracity
struct InputModeMismatch : Error { using Error::Error; };
struct EmptyTrainingSet : Error { using Error::Error; };
struct InvalidScore : Error { using Error::Error; };
struct ScoreParseError : Error { using Error::Error; };
struct ClassifierBackendError : Error { using Error::Error; };

// evaluation
struct LengthMismatch : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct UnequalRatings : Error { using Error::Error; };
struct ManifestMismatch : Error { using Error::Error; };

// pipeline
struct PipelineError : Error {
    PipelineError(const std::string& stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage(stage) {}
    std::string stage;
};

}  // namespace factcheck

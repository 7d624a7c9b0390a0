#pragma once

#include <stdexcept>
#include <string>

namespace ned {

enum class Errc {
  file_unreadable,
  no_valid_records,
  duplicate_id,
  unsorted_input,
  non_positive_duration,
  invalid_argument,
  missing_annotations,
  annotation_span_invalid,
  no_entities,
  empty_sequence,
  series_too_short,
  empty_input,
  empty_graph,
  no_ground_truth,
  zero_detections,
  schema_mismatch,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::file_unreadable: return "FileUnreadable";
    case Errc::no_valid_records: return "NoValidRecords";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::unsorted_input: return "UnsortedInput";
    case Errc::non_positive_duration: return "NonPositiveDuration";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::missing_annotations: return "MissingAnnotations";
    case Errc::annotation_span_invalid: return "AnnotationSpanInvalid";
    case Errc::no_entities: return "NoEntities";
    case Errc::empty_sequence: return "EmptySequence";
    case Errc::series_too_short: return "SeriesTooShort";
    case Errc::empty_input: return "EmptyInput";
    case Errc::empty_graph: return "EmptyGraph";
    case Errc::no_ground_truth: return "NoGroundTruth";
    case Errc::zero_detections: return "ZeroDetections";
    case Errc::schema_mismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

// Input and contract violations surfaced to callers. Anything else that
// escapes (std::logic_error and friends) is an internal invariant failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace ned
